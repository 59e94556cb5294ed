#pragma once

#include <Eigen/Dense>

#include "casimir/core.hpp"
#include "casimir/lifshitz.hpp"

namespace casimir {

using RMatrix = Eigen::MatrixXd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

/// In-plane Bloch data of one quadrature node. All in rad/m; xi is the
/// imaginary frequency divided by c.
struct Wavevector {
  double xi = 0.0;
  double kx = 0.0;
  double kz = 0.0;
};

/// Rayleigh order wavenumbers alpha_m = kx + 2 pi m / d, m = -N..N.
RVector rayleigh_alphas(double kx, double period, int truncation);

/// gamma_m = sqrt(eps xi^2 + kz^2 + alpha_m^2).
RVector decay_constants(const Wavevector& k, double eps, double period, int truncation);

/// Fourier-space multiplication by eps(x) (Laurent rule) and by 1/eps(x),
/// for one period of a lamellar layer with a bar centred on x = 0.
struct ToeplitzPermittivity {
  RMatrix eps;      // [eps]_{mn} = eps_{m-n}
  RMatrix inv_eps;  // [1/eps]_{mn}
};

/// `filling` is the bar fraction (d - d1) / d.
ToeplitzPermittivity fourier_lamellar(double eps_bar, double filling, int truncation);

/// First-order system dA/dy = M A for A = (Ez, Ex, Hz, Hx), written as
/// d(Ez,Ex)/dy = P (Hz,Hx) and d(Hz,Hx)/dy = Q (Ez,Ex).
struct PropagationMatrix {
  RMatrix P;
  RMatrix Q;
  /// P Q in closed form. It is block upper triangular,
  ///   [[xi^2 [eps] + Kx^2 + kz^2,  kz ([eps]^-1 Kx [1/eps]^-1 - Kx)],
  ///    [0,  (xi^2 + Kx [eps]^-1 Kx) [1/eps]^-1 + kz^2]],
  /// and free of the 1/xi terms that cancel in the explicit product.
  RMatrix PQ;

  int dimension() const { return static_cast<int>(2 * P.rows()); }
  RMatrix full() const;
};

/// E_x is discontinuous across the bar walls and uses the inverse rule
/// [1/eps]^-1; E_y and E_z use [eps].
PropagationMatrix build_M(const ToeplitzPermittivity& toeplitz, const Wavevector& k,
                          double period, int truncation);

/// Reflection of a downward wave on a grating, in the (E_z, H_z) Rayleigh
/// basis: rows and columns are ordered (e, m = -N..N) then (h, m = -N..N),
/// amplitudes referenced to the substrate plane y = 0.
struct ReflectionMatrix {
  CMatrix R;
  Wavevector k;
  int truncation = 0;
  /// Height of the amplitude reference plane above the substrate surface.
  double reference = 0.0;

  Eigen::Index order_count() const { return 2 * truncation + 1; }
};

/// Plane the Rayleigh amplitudes are referenced to. Relative to the
/// substrate plane the top-referenced matrix is G R G with G = e^{-gamma a};
/// the substrate-referenced one grows like e^{2 gamma a} for deep gratings.
enum class ReferencePlane { Substrate, Top };

enum class LayerMethod {
  Auto,            // eigenmodes, matrix functions when eigenvalues are degenerate
  Modal,           // eigenmodes only
  MatrixFunction,  // principal square root and exponential of P Q
};

struct SolverOptions {
  LayerMethod method = LayerMethod::Auto;
  double degeneracy_gap = 1e-8;
  double min_rcond = 1e-14;
  ReferencePlane reference = ReferencePlane::Substrate;
};

ReflectionMatrix reflection_matrix(const GratingSpec& grating, const Wavevector& k, int truncation,
                                   const SolverOptions& options = {});

/// Same as above with permittivities already evaluated at this xi.
ReflectionMatrix reflection_matrix(const GratingSpec& grating, double eps_bar, double eps_substrate,
                                   const Wavevector& k, int truncation,
                                   const SolverOptions& options = {});

/// Closed-form reflection of a flat mirror: per order, rotate (e, h) to
/// (TE, TM), apply Fresnel, rotate back.
ReflectionMatrix plane_reflection_matrix(const MaterialModel& material, const Wavevector& k,
                                         double period, int truncation);

/// Closed form for flat gratings (bare surface or uniform film).
ReflectionMatrix flat_reflection_matrix(const GratingSpec& grating, double eps_bar,
                                        double eps_substrate, const Wavevector& k, int truncation,
                                        ReferencePlane reference = ReferencePlane::Substrate);

/// diag(G, G), G_mm = exp(-L sqrt(xi^2 + kz^2 + alpha_m^2)).
RVector propagation_K(const Wavevector& k, double distance, double period, int truncation);

/// Reflection of an upward wave on the upper grating, referenced to y = 0.
/// `R2` is the upper grating's matrix computed in its own frame as a lower
/// grating. In the (E_z, H_z) basis the mirror y -> L - y flips H_z, so the
/// result is K Phi(s) Pi R2 Pi Phi(s)^-1 K with Pi = diag(1, -1).
CMatrix upper_reflection(const ReflectionMatrix& R2, const RVector& K, double shift,
                         double period);

}  // namespace casimir
