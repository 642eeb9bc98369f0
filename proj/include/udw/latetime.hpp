#pragma once

#include <complex>

#include "udw/entanglement.hpp"
#include "udw/params.hpp"
#include "udw/quadrature.hpp"
#include "udw/specfun.hpp"

namespace udw {

// Stationary detector response
//   G(omega) = (1/M) / (Omega_t^2 - (omega + i gamma)^2 + mirror term),
// mirror term = 2 gamma e^{i omega L} / L in the half space. Im G > 0 on
// (0, Lambda) and G(0) = 1/(M Omega_r^2) in free space.
std::complex<double> response(const Geometry& geom, const PhysicalParams& p, double omega);

struct LateCovarianceResult {
    CovarianceMatrix cov;        // V_QP = 0 by stationarity
    EntanglementResult entropy;
    double quad_error = 0.0;     // summed quadrature error estimates
};

QuadratureSpec default_late_spec();

// Stationary covariance from the response function:
//   V_QQ = (1/pi) int_0^Lambda Im G(w) dw,
//   V_PP = (M^2/pi) int_0^Lambda w^2 Im G(w) dw.
// The same spec (breakpoints at Omega_t +- {1,10,100} gamma, log-spaced tail
// panels, sinc-period hint in the half space) drives both geometries.
LateCovarianceResult late_covariance_exact(const Geometry& geom, const PhysicalParams& p,
                                           const QuadratureSpec& spec = default_late_spec());

// Weak-damping closed forms (gamma/omega_r << 1), free space:
//   V_QQ = (1 - 2 gamma / (pi Omega_t)) / (2 M Omega_t),
//   V_PP = M [Omega_t/2 + (gamma/pi)(2 ln(Lambda/Omega_t) - Omega_t^2/Lambda^2 - 1)],
//   S_L  = (gamma)/(pi Omega_r) (2 ln(Lambda/Omega_t) - Omega_t^2/Lambda^2 - 2).
// Preconditions gamma/omega_r < 0.05; otherwise throws (the expansion loses
// its O(gamma^2) accuracy claim).
struct FreeClosedForm {
    double v_qq = 0.0;
    double v_pp = 0.0;
    double entropy = 0.0;
};
FreeClosedForm late_covariance_free_closed(const PhysicalParams& p);

// First-order mirror corrections at distance L (x = Omega_r L):
//   dV_QQ = -(gamma / (pi M Omega_r L)) Re[(i/Omega_r + L) e^{i x} Gamma(0, i x)] / Omega_r
//   dV_PP = -(M gamma / (pi Omega_r L)) Re[(-i + L Omega_r) e^{i x} Gamma(0, i x)]
//   dS_L  = -(2 gamma / (pi Omega_r)) Re[e^{i x} Gamma(0, i x)]
struct PerturbativeCorrections {
    double delta_v_qq = 0.0;
    double delta_v_pp = 0.0;
    double delta_entropy = 0.0;
};
PerturbativeCorrections perturbative_corrections(const PhysicalParams& p);

// S_half - S_free from two full-precision stationary covariances computed
// with the identical quadrature spec (entropies subtracted at the end).
double delta_entropy_exact(const PhysicalParams& p, const QuadratureSpec& spec = default_late_spec());

}  // namespace udw
