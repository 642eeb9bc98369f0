#include "udw/latetime.hpp"

#include <algorithm>
#include <cmath>

namespace udw {

namespace {
using cd = std::complex<double>;
const cd kI(0.0, 1.0);
}  // namespace

cd response(const Geometry& geom, const PhysicalParams& p, double omega) {
    const double wt = p.omega_damped;
    cd bracket = wt * wt - (omega + kI * p.gamma) * (omega + kI * p.gamma);
    if (geom.kind == Geometry::Kind::HalfSpaceDirichlet) {
        const double L = geom.mirror_distance;
        bracket += 2.0 * p.gamma / L * std::exp(kI * omega * L);
    }
    return 1.0 / (p.mass * bracket);
}

QuadratureSpec default_late_spec() {
    QuadratureSpec spec;
    spec.abs_tol = 1e-12;
    spec.rel_tol = 1e-12;
    spec.max_depth = 30;
    return spec;
}

namespace {

// Shared panelization for the stationary integrals: resonance edges at
// Omega_t +- {1, 10, 100} gamma plus octave points up to the cutoff so the
// logarithmic V_PP tail is resolved panel by panel.
QuadratureSpec stationary_spec(const PhysicalParams& p, const Geometry& geom,
                               const QuadratureSpec& user) {
    QuadratureSpec spec = user;
    const double wt = p.omega_damped;
    for (double k : {1.0, 10.0, 100.0}) {
        for (double s : {-1.0, 1.0}) {
            const double x = wt + s * k * p.gamma;
            if (x > 0.0 && x < p.cutoff) spec.forced_breakpoints.push_back(x);
        }
    }
    for (double x = 2.0 * (wt + 1.0); x < p.cutoff; x *= 2.0)
        spec.forced_breakpoints.push_back(x);
    if (!spec.oscillation_period_hint && geom.kind == Geometry::Kind::HalfSpaceDirichlet)
        spec.oscillation_period_hint = 2.0 * M_PI / geom.mirror_distance;
    return spec;
}

}  // namespace

LateCovarianceResult late_covariance_exact(const Geometry& geom, const PhysicalParams& p,
                                           const QuadratureSpec& user_spec) {
    const QuadratureSpec spec = stationary_spec(p, geom, user_spec);
    const auto im_g = [&](double w) { return response(geom, p, w).imag(); };
    const IntegrationResult qq =
        integrate([&](double w) { return im_g(w); }, 0.0, p.cutoff, spec);
    const IntegrationResult pp =
        integrate([&](double w) { return w * w * im_g(w); }, 0.0, p.cutoff, spec);

    LateCovarianceResult r;
    r.cov.v_qq = qq.value / M_PI;
    r.cov.v_pp = p.mass * p.mass * pp.value / M_PI;
    r.cov.v_qp = 0.0;  // stationary state
    r.quad_error = (qq.error_estimate + p.mass * p.mass * pp.error_estimate) / M_PI;
    r.entropy = entropy_from_covariance(r.cov);
    return r;
}

FreeClosedForm late_covariance_free_closed(const PhysicalParams& p) {
    if (!(p.gamma / p.omega_r < 0.05))
        throw std::invalid_argument(
            "late_covariance_free_closed: weak-damping form requires gamma/omega_r < 0.05");
    const double wt = p.omega_damped;
    const double lam = p.cutoff;
    FreeClosedForm f;
    f.v_qq = (1.0 - 2.0 * p.gamma / (M_PI * wt)) / (2.0 * p.mass * wt);
    f.v_pp = p.mass * (wt / 2.0 + p.gamma / M_PI *
                                      (2.0 * std::log(lam / wt) - wt * wt / (lam * lam) - 1.0));
    f.entropy =
        p.gamma / (M_PI * p.omega_r) * (2.0 * std::log(lam / wt) - wt * wt / (lam * lam) - 2.0);
    return f;
}

PerturbativeCorrections perturbative_corrections(const PhysicalParams& p) {
    const double L = p.image_distance;
    const double w0 = p.omega_r;
    const double x = w0 * L;
    const cd eg = std::exp(kI * x) * gamma0_imaginary(x);
    PerturbativeCorrections c;
    c.delta_v_qq = -p.gamma / (M_PI * p.mass * w0 * L) *
                   ((kI / (w0 * w0) + L / w0) * eg).real();
    c.delta_v_pp = -p.mass * p.gamma / (M_PI * w0 * L) * ((cd(0.0, -1.0) + L * w0) * eg).real();
    c.delta_entropy = -2.0 * p.gamma / (M_PI * w0) * eg.real();
    return c;
}

double delta_entropy_exact(const PhysicalParams& p, const QuadratureSpec& user_spec) {
    QuadratureSpec spec = user_spec;
    if (!spec.oscillation_period_hint)
        spec.oscillation_period_hint = 2.0 * M_PI / p.image_distance;
    const LateCovarianceResult free = late_covariance_exact(free_space(), p, spec);
    const LateCovarianceResult half = late_covariance_exact(half_space(p), p, spec);
    return half.entropy.linear_entropy - free.entropy.linear_entropy;
}

}  // namespace udw
