#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "udw/params.hpp"

namespace udw {

using complexd = std::complex<double>;

// Uniform-grid trajectory of one interaction-picture mode amplitude,
// starting at t = 0. derivs holds d(values)/dt on the same grid.
struct ModeTrajectory {
    enum class Kind { detector_a, field_plus };
    Kind kind = Kind::detector_a;
    double source_omega = 0.0;  // meaningful for field_plus
    double dt = 0.0;
    std::vector<complexd> values;
    std::vector<complexd> derivs;

    double t_max() const { return dt * double(values.size() - 1); }
    // Value at node closest to t (grid is uniform from 0).
    complexd at(double t) const;
    complexd deriv_at(double t) const;
};

// Partial-fraction coefficients of the driven zeroth-order mode:
//   M1 = 1 / (2 (Omega_t - omega - i gamma)),
//   M2 = 1 / (2 (-Omega_t - omega - i gamma)),
// so that 1 / (Omega_t^2 - (omega + i gamma)^2) = (M1 - M2) / Omega_t.
struct ZerothOrderCoeffs {
    complexd m1;
    complexd m2;
};

ZerothOrderCoeffs zeroth_coeffs(const PhysicalParams& p, double omega);

// Homogeneous detector amplitude q_a(t) with q_a(0) = 1, q_a'(0) = -i Omega_r:
//   q_a(t) = 1/2 (1 + (Omega_r + i gamma)/Omega_t) e^{-gamma t - i Omega_t t}
//          + 1/2 (1 - (Omega_r + i gamma)/Omega_t) e^{-gamma t + i Omega_t t}.
complexd homogeneous_solution(const PhysicalParams& p, double t);
complexd homogeneous_solution_deriv(const PhysicalParams& p, double t);

// Zeroth-order driven amplitude F(t) (factor lambda sin(k3 L / 2) / (M Omega_t)
// stripped; reattached during covariance assembly):
//   F(t) = (M1 - M2) e^{-i omega t}
//        + (M2 e^{+i Omega_t t} - M1 e^{-i Omega_t t}) e^{-gamma t},
// satisfying F(0) = F'(0) = 0 and F'' + 2 gamma F' + Omega_r^2 F = Omega_t e^{-i omega t}.
complexd zeroth_qplus(const PhysicalParams& p, double omega, double t);
complexd zeroth_qplus_deriv(const PhysicalParams& p, double omega, double t);

// Reflection (delay) expansion of the homogeneous amplitude in powers of the
// mirror feedback -(2 gamma / L) q(t - L). Order n vanishes identically for
// t < n L and is never computed there (gated before any evaluation). Returns
// per-order contributions 0..max_order at time t via nested adaptive
// Green's-function convolutions. max_order <= 4.
std::vector<complexd> reflection_orders_qa(const PhysicalParams& p, double t, int max_order);
// Sum of the contributions above.
complexd reflection_series_qa(const PhysicalParams& p, double t, int max_order);

// Delay-differential solve of one reduced mode amplitude s(t):
//   s'' + 2 gamma s' + Omega_r^2 s = -(2 gamma / L) s(t - L) theta(t - L) + drive,
// drive = e^{-i omega t} when source_omega is set (field_plus mode, s(0) =
// s'(0) = 0) or 0 for the homogeneous detector mode (q_a initial data).
// RK4 with cubic-Hermite interpolation of the delayed history; the step is
// snapped so the delay is an integer number of steps. Requires
// step <= min(1/(20 omega_r), L/20). mirror=false drops the delayed term
// (free-space evolution of the same mode).
ModeTrajectory dde_solve(const PhysicalParams& p, std::optional<double> source_omega,
                         double t_max, double step, bool mirror = true);

// One-time covariance snapshot. cov = a-part + v-part elementwise.
struct EarlyCovariance {
    double time = 0.0;
    CovarianceMatrix cov;
    double a_qq = 0.0, a_pp = 0.0, a_qp = 0.0;  // initial-data (homogeneous) part
    double v_qq = 0.0, v_pp = 0.0, v_qp = 0.0;  // field-induced part
};

// Use this order to request the full delay-resummed evolution; any order >= 1
// routes the mode grid through dde_solve as well.
inline constexpr int kFullOrder = 1;

// Covariance of the detector at time t after switch-on from the factorized
// ground state x vacuum. order = 0 evaluates the closed-form zeroth-order
// modes; order >= 1 solves the delay equation per grid frequency. Frequencies
// above an internal handoff W = 60 are handled by the closed-form transient
// tail in both cases (mirror corrections there are < 1e-8 of the moments).
EarlyCovariance early_covariance(const PhysicalParams& p, const Geometry& geom, double t,
                                 int order = kFullOrder);

// Batched version: one mode-grid pass serves all sample times (sorted,
// nonnegative). parallel=false runs the serial reference implementation.
std::vector<EarlyCovariance> early_covariance_sweep(const PhysicalParams& p,
                                                    const Geometry& geom,
                                                    const std::vector<double>& t_samples,
                                                    int order = kFullOrder,
                                                    bool parallel = true);

}  // namespace udw
