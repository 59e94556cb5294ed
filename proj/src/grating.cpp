#include "casimir/grating.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <string>

#include "casimir/constants.hpp"
#include "casimir/error.hpp"

namespace casimir {

namespace {

using cplx = std::complex<double>;
using Eigen::Index;

// Tangential field columns of the uniform-medium waves, one per (pol, order),
// rows ordered (Ez, Ex, Hz, Hx). sigma = +1 grows with y (downward wave),
// sigma = -1 decays with y (upward wave).
CMatrix uniform_modes(const RVector& alpha, const Wavevector& k, double eps, int sigma) {
  const Index m = alpha.size();
  CMatrix psi = CMatrix::Zero(4 * m, 2 * m);
  const double xi = k.xi;
  const double denom = eps * xi * xi + k.kz * k.kz;
  for (Index i = 0; i < m; ++i) {
    const double a = alpha[i];
    const double gamma = std::sqrt(eps * xi * xi + k.kz * k.kz + a * a);
    const double cross = k.kz * a / denom;
    // e-wave: Ez = 1, Hz = 0
    psi(i, i) = 1.0;
    psi(m + i, i) = cross;
    psi(3 * m + i, i) = -sigma * eps * xi * gamma / denom;
    // h-wave: Ez = 0, Hz = 1
    psi(m + i, m + i) = sigma * gamma * xi / denom;
    psi(2 * m + i, m + i) = 1.0;
    psi(3 * m + i, m + i) = cross;
  }
  return psi;
}

// Field solution inside the corrugation layer 0 < y < a:
//   growing part   Gp e^{S (y - a)} c+   (values at y = a: Gp c+, at y = 0: Gp X c+)
//   decaying part  Gm e^{-S y} c-        (values at y = 0: Gm c-,  at y = a: Gm X c-)
// with X = e^{-S a}; every factor is bounded for any depth.
struct LayerModes {
  CMatrix Gp;
  CMatrix Gm;
  CMatrix X;
};

bool has_degenerate_pair(const Eigen::VectorXcd& lambda, double gap) {
  for (Index i = 0; i < lambda.size(); ++i) {
    for (Index j = i + 1; j < lambda.size(); ++j) {
      const double scale = std::max(std::abs(lambda[i]), std::abs(lambda[j]));
      if (std::abs(lambda[i] - lambda[j]) <= gap * scale) return true;
    }
  }
  return false;
}

LayerModes stack(const CMatrix& W, const CMatrix& V, CMatrix X) {
  const Index n = W.rows();
  LayerModes modes;
  modes.Gp.resize(2 * n, W.cols());
  modes.Gp << W, V;
  modes.Gm.resize(2 * n, W.cols());
  modes.Gm << W, -V;
  modes.X = std::move(X);
  return modes;
}

LayerModes matrix_function_modes(const PropagationMatrix& pm, double depth) {
  const CMatrix PQ = pm.PQ.cast<cplx>();
  const CMatrix S = PQ.sqrt();
  const Index n = S.rows();
  const CMatrix Sinv = S.partialPivLu().solve(CMatrix::Identity(n, n));
  const CMatrix V = pm.Q.cast<cplx>() * Sinv;
  CMatrix X = (-depth * S).exp();
  return stack(CMatrix::Identity(n, n), V, std::move(X));
}

bool modal_modes(const PropagationMatrix& pm, double depth, const SolverOptions& options,
                 LayerModes& out) {
  Eigen::EigenSolver<RMatrix> es(pm.PQ);
  if (es.info() != Eigen::Success) return false;
  const Eigen::VectorXcd lambda = es.eigenvalues();
  if (options.method == LayerMethod::Auto && has_degenerate_pair(lambda, options.degeneracy_gap)) {
    return false;
  }
  const Index n = lambda.size();
  Eigen::VectorXcd q(n);
  Eigen::VectorXcd x(n);
  for (Index j = 0; j < n; ++j) {
    q[j] = std::sqrt(lambda[j]);
    if (q[j].real() < 0.0) q[j] = -q[j];
    x[j] = std::exp(-depth * q[j]);
  }
  const CMatrix W = es.eigenvectors();
  const CMatrix V = (pm.Q.cast<cplx>() * W) * q.cwiseInverse().asDiagonal();
  out = stack(W, V, x.asDiagonal().toDenseMatrix());
  return true;
}

LayerModes uniform_layer_modes(const RVector& alpha, const Wavevector& k, double eps,
                               double depth) {
  LayerModes modes;
  modes.Gp = uniform_modes(alpha, k, eps, +1);
  modes.Gm = uniform_modes(alpha, k, eps, -1);
  const Index m = alpha.size();
  Eigen::VectorXcd x(2 * m);
  for (Index i = 0; i < m; ++i) {
    const double gamma = std::sqrt(eps * k.xi * k.xi + k.kz * k.kz + alpha[i] * alpha[i]);
    x[i] = x[m + i] = std::exp(-gamma * depth);
  }
  modes.X = x.asDiagonal().toDenseMatrix();
  return modes;
}

CMatrix solve_checked(const CMatrix& A, const CMatrix& B, const SolverOptions& options,
                      const char* what) {
  Eigen::PartialPivLU<CMatrix> lu(A);
  const double rc = lu.rcond();
  if (!(rc > options.min_rcond)) {
    throw Error(ErrorCode::IllConditionedMatching,
                std::string(what) + " matching system has rcond " + std::to_string(rc));
  }
  return lu.solve(B);
}

// Vacuum above y = a, the layer in 0 < y < a, substrate below y = 0.
// Returns the reflection referenced to the top of the layer, y = a.
CMatrix match(const RVector& alpha, const Wavevector& k, const LayerModes* layer,
              double eps_substrate, const SolverOptions& options) {
  const Index m = alpha.size();
  const CMatrix vac_dn = uniform_modes(alpha, k, 1.0, +1);
  const CMatrix vac_up = uniform_modes(alpha, k, 1.0, -1);
  const CMatrix sub_dn = uniform_modes(alpha, k, eps_substrate, +1);

  if (layer == nullptr) {
    CMatrix sys(4 * m, 4 * m);
    sys << vac_up, -sub_dn;
    return solve_checked(sys, -vac_dn, options, "interface").topRows(2 * m);
  }

  const CMatrix GpX = layer->Gp * layer->X;
  const CMatrix GmX = layer->Gm * layer->X;

  // y = 0: Gp X c+ + Gm c- = sub_dn T  =>  c- = Z c+
  CMatrix sys_b(4 * m, 4 * m);
  sys_b << layer->Gm, -sub_dn;
  const CMatrix Z = solve_checked(sys_b, -GpX, options, "substrate").topRows(2 * m);

  // y = a: vac_dn I + vac_up Ra = (Gp + Gm X Z) c+
  CMatrix sys_a(4 * m, 4 * m);
  sys_a << vac_up, -(layer->Gp + GmX * Z);
  return solve_checked(sys_a, -vac_dn, options, "cover").topRows(2 * m);
}

// Moves the reference plane from y = a down to y = 0: R0 = e^{gamma a} Ra e^{gamma a}.
void to_substrate_reference(ReflectionMatrix& r, double period) {
  if (r.reference == 0.0) return;
  const RVector gamma = decay_constants(r.k, 1.0, period, r.truncation);
  const Index m = gamma.size();
  Eigen::VectorXd g(2 * m);
  for (Index i = 0; i < m; ++i) g[i] = g[m + i] = std::exp(gamma[i] * r.reference);
  r.R = g.asDiagonal() * r.R * g.asDiagonal();
  r.reference = 0.0;
}

// (Ez, Hz) amplitudes of unit TE (E along s) and TM (H along s) waves,
// s = (kz, 0, -alpha) / k.
Eigen::Matrix2d te_tm_basis(double alpha, double kz, double xi, double gamma, int sigma) {
  double k = std::hypot(alpha, kz);
  double ca = alpha;
  double cz = kz;
  if (k == 0.0) {
    ca = 1.0;
    cz = 0.0;
    k = 1.0;
  }
  Eigen::Matrix2d T;
  T(0, 0) = -ca / k;
  T(1, 0) = sigma * gamma * cz / (xi * k);
  T(0, 1) = -sigma * gamma * cz / (xi * k);
  T(1, 1) = -ca / k;
  return T;
}

template <typename Reflect>
ReflectionMatrix per_order_reflection(const Wavevector& k, double period, int truncation,
                                      Reflect&& reflect) {
  const RVector alpha = rayleigh_alphas(k.kx, period, truncation);
  const Index m = alpha.size();
  ReflectionMatrix out;
  out.k = k;
  out.truncation = truncation;
  out.R = CMatrix::Zero(2 * m, 2 * m);
  for (Index i = 0; i < m; ++i) {
    const double kpar = std::hypot(alpha[i], k.kz);
    const double gamma = std::hypot(k.xi, kpar);
    const FresnelPair r = reflect(kpar, gamma);
    const Eigen::Matrix2d t_dn = te_tm_basis(alpha[i], k.kz, k.xi, gamma, +1);
    const Eigen::Matrix2d t_up = te_tm_basis(alpha[i], k.kz, k.xi, gamma, -1);
    const Eigen::Matrix2d block =
        t_up * Eigen::Vector2d(r.te, r.tm).asDiagonal() * t_dn.inverse();
    out.R(i, i) = block(0, 0);
    out.R(i, m + i) = block(0, 1);
    out.R(m + i, i) = block(1, 0);
    out.R(m + i, m + i) = block(1, 1);
  }
  return out;
}

}  // namespace

RVector rayleigh_alphas(double kx, double period, int truncation) {
  RVector alpha(2 * truncation + 1);
  for (int n = -truncation; n <= truncation; ++n) {
    alpha[n + truncation] = kx + 2.0 * constants::pi * n / period;
  }
  return alpha;
}

RVector decay_constants(const Wavevector& k, double eps, double period, int truncation) {
  RVector alpha = rayleigh_alphas(k.kx, period, truncation);
  for (Index i = 0; i < alpha.size(); ++i) {
    alpha[i] = std::sqrt(eps * k.xi * k.xi + k.kz * k.kz + alpha[i] * alpha[i]);
  }
  return alpha;
}

ToeplitzPermittivity fourier_lamellar(double eps_bar, double filling, int truncation) {
  const int m = 2 * truncation + 1;
  auto coefficient = [filling](double inside, int n) {
    if (n == 0) return 1.0 + (inside - 1.0) * filling;
    return (inside - 1.0) * std::sin(constants::pi * n * filling) / (constants::pi * n);
  };
  ToeplitzPermittivity t{RMatrix(m, m), RMatrix(m, m)};
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < m; ++c) {
      t.eps(r, c) = coefficient(eps_bar, r - c);
      t.inv_eps(r, c) = coefficient(1.0 / eps_bar, r - c);
    }
  }
  // Exact zeros at f = 0, 1 instead of sin(pi n) round-off.
  if (filling == 0.0 || filling == 1.0) {
    const double e = filling == 1.0 ? eps_bar : 1.0;
    t.eps = e * RMatrix::Identity(m, m);
    t.inv_eps = (1.0 / e) * RMatrix::Identity(m, m);
  }
  return t;
}

RMatrix PropagationMatrix::full() const {
  const Index n = P.rows();
  RMatrix M = RMatrix::Zero(2 * n, 2 * n);
  M.topRightCorner(n, n) = P;
  M.bottomLeftCorner(n, n) = Q;
  return M;
}

PropagationMatrix build_M(const ToeplitzPermittivity& toeplitz, const Wavevector& k,
                          double period, int truncation) {
  if (!(k.xi > 0.0)) throw Error(ErrorCode::DegenerateMomentum, "build_M needs xi > 0");
  const Index m = 2 * truncation + 1;
  const RVector alpha = rayleigh_alphas(k.kx, period, truncation);
  const auto Kx = alpha.asDiagonal();
  const RMatrix I = RMatrix::Identity(m, m);

  Eigen::PartialPivLU<RMatrix> eps_lu(toeplitz.eps);
  Eigen::PartialPivLU<RMatrix> inv_lu(toeplitz.inv_eps);
  if (!(eps_lu.rcond() > 1e-14) || !(inv_lu.rcond() > 1e-14)) {
    throw Error(ErrorCode::SingularToeplitz, "Toeplitz permittivity not invertible");
  }
  const RMatrix eps_inv = eps_lu.inverse();     // [eps]^-1
  const RMatrix eps_perp = inv_lu.inverse();    // [1/eps]^-1
  const double xi = k.xi;
  const double kz = k.kz;

  const RMatrix eps_inv_kx = eps_inv * Kx;
  const RMatrix kx_eps_inv = Kx * eps_inv;

  PropagationMatrix pm;
  pm.P.resize(2 * m, 2 * m);
  pm.Q.resize(2 * m, 2 * m);
  // d(Ez)/dy, d(Ex)/dy in terms of (Hz, Hx)
  pm.P.topLeftCorner(m, m) = (kz / xi) * eps_inv_kx;
  pm.P.topRightCorner(m, m) = -xi * I - (kz * kz / xi) * eps_inv;
  pm.P.bottomLeftCorner(m, m) = xi * I + (1.0 / xi) * kx_eps_inv * Kx;
  pm.P.bottomRightCorner(m, m) = -(kz / xi) * kx_eps_inv;
  // d(Hz)/dy, d(Hx)/dy in terms of (Ez, Ex)
  RMatrix kx2 = RMatrix::Zero(m, m);
  kx2.diagonal() = alpha.cwiseProduct(alpha);
  RMatrix kxd = RMatrix::Zero(m, m);
  kxd.diagonal() = alpha;
  pm.Q.topLeftCorner(m, m) = -(kz / xi) * kxd;
  pm.Q.topRightCorner(m, m) = xi * eps_perp + (kz * kz / xi) * I;
  pm.Q.bottomLeftCorner(m, m) = -xi * toeplitz.eps - (1.0 / xi) * kx2;
  pm.Q.bottomRightCorner(m, m) = (kz / xi) * kxd;

  pm.PQ = RMatrix::Zero(2 * m, 2 * m);
  pm.PQ.topLeftCorner(m, m) = xi * xi * toeplitz.eps + kx2 + kz * kz * I;
  pm.PQ.topRightCorner(m, m) = kz * (eps_inv_kx * eps_perp - kxd);
  pm.PQ.bottomRightCorner(m, m) = (xi * xi * I + kx_eps_inv * Kx) * eps_perp + kz * kz * I;
  return pm;
}

ReflectionMatrix reflection_matrix(const GratingSpec& grating, const Wavevector& k, int truncation,
                                   const SolverOptions& options) {
  const double omega = k.xi * constants::c;
  return reflection_matrix(grating, grating.bar.permittivity(omega),
                           grating.substrate.permittivity(omega), k, truncation, options);
}

ReflectionMatrix reflection_matrix(const GratingSpec& grating, double eps_bar, double eps_substrate,
                                   const Wavevector& k, int truncation,
                                   const SolverOptions& options) {
  if (!(k.xi > 0.0)) throw Error(ErrorCode::DegenerateMomentum, "reflection needs xi > 0");
  const RVector alpha = rayleigh_alphas(k.kx, grating.period, truncation);
  ReflectionMatrix out;
  out.k = k;
  out.truncation = truncation;

  const double depth = grating.depth;
  const double filling = grating.filling();
  if (eps_substrate == 1.0 && (eps_bar == 1.0 || depth == 0.0 || filling == 0.0)) {
    out.R = CMatrix::Zero(2 * alpha.size(), 2 * alpha.size());
    return out;
  }
  if (depth == 0.0) {
    out.R = match(alpha, k, nullptr, eps_substrate, options);
    return out;
  }

  const ToeplitzPermittivity toeplitz = fourier_lamellar(eps_bar, filling, truncation);
  const PropagationMatrix pm = build_M(toeplitz, k, grating.period, truncation);
  LayerModes layer;
  if (options.method == LayerMethod::Auto && (filling == 0.0 || filling == 1.0)) {
    layer = uniform_layer_modes(alpha, k, filling == 1.0 ? eps_bar : 1.0, depth);
  } else {
    const bool modal = options.method != LayerMethod::MatrixFunction &&
                       modal_modes(pm, depth, options, layer);
    if (!modal) layer = matrix_function_modes(pm, depth);
  }
  out.R = match(alpha, k, &layer, eps_substrate, options);
  out.reference = depth;
  if (options.reference == ReferencePlane::Substrate) to_substrate_reference(out, grating.period);
  return out;
}

ReflectionMatrix plane_reflection_matrix(const MaterialModel& material, const Wavevector& k,
                                         double period, int truncation) {
  const double eps = material.permittivity(k.xi * constants::c);
  return per_order_reflection(k, period, truncation, [&](double kpar, double) {
    return fresnel(k.xi, kpar, eps);
  });
}

ReflectionMatrix flat_reflection_matrix(const GratingSpec& grating, double eps_bar,
                                        double eps_substrate, const Wavevector& k, int truncation,
                                        ReferencePlane reference) {
  if (grating.is_bare_surface()) {
    return per_order_reflection(k, grating.period, truncation, [&](double kpar, double) {
      return fresnel(k.xi, kpar, eps_substrate);
    });
  }
  const double a = grating.depth;
  ReflectionMatrix out =
      per_order_reflection(k, grating.period, truncation, [&](double kpar, double) {
        return film_fresnel(k.xi, kpar, eps_bar, a, eps_substrate);
      });
  out.reference = a;
  if (reference == ReferencePlane::Substrate) to_substrate_reference(out, grating.period);
  return out;
}

RVector propagation_K(const Wavevector& k, double distance, double period, int truncation) {
  const RVector gamma = decay_constants(k, 1.0, period, truncation);
  const Index m = gamma.size();
  RVector K(2 * m);
  for (Index i = 0; i < m; ++i) K[i] = K[m + i] = std::exp(-distance * gamma[i]);
  return K;
}

CMatrix upper_reflection(const ReflectionMatrix& R2, const RVector& K, double shift,
                         double period) {
  if (!(shift >= 0.0 && shift <= period)) {
    throw Error(ErrorCode::ShiftOutOfRange, "shift must lie in [0, d]");
  }
  const Index m = R2.order_count();
  const int N = R2.truncation;
  Eigen::VectorXcd left(2 * m);
  Eigen::VectorXcd right(2 * m);
  for (Index i = 0; i < m; ++i) {
    const double n = static_cast<double>(i - N);
    const cplx phase = std::polar(1.0, 2.0 * constants::pi * n * shift / period);
    left[i] = K[i] * phase;
    left[m + i] = -K[m + i] * phase;
    right[i] = K[i] / phase;
    right[m + i] = -K[m + i] / phase;
  }
  return left.asDiagonal() * R2.R * right.asDiagonal();
}

}  // namespace casimir
