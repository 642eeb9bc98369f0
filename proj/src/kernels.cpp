#include "udw/kernels.hpp"

#include <cmath>

#include "udw/specfun.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace udw {

namespace {
constexpr double kFourPiSq = 4.0 * M_PI * M_PI;

// sin(x)/x with series branch near zero.
double sinc(double x) {
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0);
    }
    return std::sin(x) / x;
}

// (1 - cos x)/x, smooth through zero.
double one_minus_cos_over(double x) {
    if (std::abs(x) < 1e-4) return 0.5 * x * (1.0 - x * x / 12.0);
    return (1.0 - std::cos(x)) / x;
}
}  // namespace

double spectral_density(const Geometry& geom, const PhysicalParams& p, double omega) {
    if (!(omega >= 0.0)) throw std::invalid_argument("spectral_density: omega must be >= 0");
    const double base = omega / kFourPiSq;
    if (geom.kind == Geometry::Kind::FreeSpace) return base;
    const double x = omega * geom.mirror_distance;
    if (x < 1e-4) {
        // 1 - sinc x = x^2/6 (1 - x^2/20 (1 - x^2/42))
        const double x2 = x * x;
        return base * (x2 / 6.0) * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0));
    }
    return base * (1.0 - std::sin(x) / x);
}

double detector_green(const DampedOscillatorKernel& k, double lag) {
    if (lag <= 0.0) return 0.0;
    return std::exp(-k.gamma * lag) * std::sin(k.omega_damped * lag) / k.omega_damped;
}

KernelSet::KernelSet(const PhysicalParams& p, const Geometry& geom)
    : params_(p), geom_(geom), c_(p.coupling * p.coupling / kFourPiSq) {}

double KernelSet::mu(double tau) const {
    const double lam = params_.cutoff;
    const double s = tau < 0.0 ? -1.0 : 1.0;  // odd kernel
    const double at = std::abs(tau);
    double v;
    if (lam * at < 1e-4) {
        v = c_ * lam * lam * lam * at / 3.0;
    } else {
        v = c_ * (std::sin(lam * at) / (at * at) - lam * std::cos(lam * at) / at);
    }
    if (geom_.kind == Geometry::Kind::HalfSpaceDirichlet) {
        const double L = geom_.mirror_distance;
        const double um = L - at, up = L + at;
        const double f_m = std::abs(lam * um) < 1e-8 ? lam : std::sin(lam * um) / um;
        const double f_p = std::sin(lam * up) / up;
        v -= c_ / (2.0 * L) * (f_m - f_p);
    }
    return s * v;
}

double KernelSet::nu(double tau) const {
    const double lam = params_.cutoff;
    const double at = std::abs(tau);  // even kernel
    double v;
    if (lam * at < 1e-4) {
        const double x = lam * at;
        v = c_ * lam * lam * (0.5 - x * x / 8.0);
    } else {
        v = c_ * (lam * std::sin(lam * at) / at + (std::cos(lam * at) - 1.0) / (at * at));
    }
    if (geom_.kind == Geometry::Kind::HalfSpaceDirichlet) {
        const double L = geom_.mirror_distance;
        const double um = L - at, up = L + at;
        const double g_m = um == 0.0 ? 0.0 : one_minus_cos_over(lam * um) * lam;
        const double g_p = one_minus_cos_over(lam * up) * lam;
        v -= c_ / (2.0 * L) * (g_p + g_m);
    }
    return v;
}

double KernelSet::damping(double tau) const {
    const double lam = params_.cutoff;
    const double M = params_.mass;
    const double at = std::abs(tau);  // even kernel
    double v = c_ / M * lam * sinc(lam * at);
    if (geom_.kind == Geometry::Kind::HalfSpaceDirichlet) {
        const double L = geom_.mirror_distance;
        v -= c_ / (2.0 * L * M) * (sine_integral(lam * (L + at)) + sine_integral(lam * (L - at)));
    }
    return v;
}

namespace {

// Closed-form tails of int_T^inf cos(w tau) * {free, image} damping pieces:
//   A(X) = 1/2 [ (pi/2 - Si((lam+w) X)) + (pi/2 - Si((lam-w) X)) ]
//   B(X) = 1/2 [ Ci((lam+w) X) - Ci((lam-w) X) ]
// valid for 0 < w < lam, X > 0.
double tail_a(double lam, double w, double x) {
    return 0.5 * ((M_PI / 2 - sine_integral((lam + w) * x)) +
                  (M_PI / 2 - sine_integral((lam - w) * x)));
}

double tail_b(double lam, double w, double x) {
    return 0.5 * (cosine_integral((lam + w) * x) - cosine_integral((lam - w) * x));
}

// Re gamma_hat(w) = int_0^inf damping(tau) cos(w tau) dtau, finite window by
// quadrature plus exact oscillatory tails.
double re_gamma_hat(const KernelSet& ks, double w) {
    const PhysicalParams& p = ks.params();
    const Geometry& geom = ks.geometry();
    const double lam = p.cutoff;
    const double M = p.mass;
    const double c = p.coupling * p.coupling / kFourPiSq;
    const bool half = geom.kind == Geometry::Kind::HalfSpaceDirichlet;
    const double L = half ? geom.mirror_distance : 0.0;
    const double T = L + 3.0;

    QuadratureSpec qs;
    qs.abs_tol = 1e-14;
    qs.rel_tol = 1e-13;
    qs.max_depth = 12;
    qs.oscillation_period_hint = 2.0 * M_PI / (lam + w);
    if (half) qs.forced_breakpoints = {L};
    const double window =
        integrate([&](double tau) { return ks.damping(tau) * std::cos(w * tau); }, 0.0, T, qs)
            .value;

    double tail = c / M * tail_a(lam, w, T);
    if (half) {
        QuadratureSpec vs;
        vs.abs_tol = 1e-14;
        vs.rel_tol = 1e-13;
        vs.max_depth = 12;
        vs.oscillation_period_hint = 2.0 * M_PI / (lam + w);
        const double img =
            integrate(
                [&](double v) {
                    return std::cos(w * v) * tail_a(lam, w, T + v) +
                           std::sin(w * v) * tail_b(lam, w, T + v);
                },
                -L, L, vs)
                .value;
        tail -= c / (2.0 * L * M) * img;
    }
    return window + tail;
}

}  // namespace

double fdt_residual(const PhysicalParams& p, const Geometry& geom,
                    const std::vector<double>& omega_grid, bool parallel) {
    if (omega_grid.empty())
        throw std::invalid_argument("fdt_residual: omega grid must be nonempty");
    for (double w : omega_grid)
        if (!(w > 0.0) || !(w < p.cutoff))
            throw std::invalid_argument("fdt_residual: grid points must lie inside (0, cutoff)");
    const KernelSet ks(p, geom);
    const double lam2 = p.coupling * p.coupling;
    std::vector<double> res(omega_grid.size());
    const int n = int(omega_grid.size());
    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int i = 0; i < n; ++i) {
            const double w = omega_grid[i];
            res[i] = std::abs(lam2 * spectral_density(geom, p, w) -
                              2.0 / M_PI * w * p.mass * re_gamma_hat(ks, w));
        }
    } else {
        for (int i = 0; i < n; ++i) {
            const double w = omega_grid[i];
            res[i] = std::abs(lam2 * spectral_density(geom, p, w) -
                              2.0 / M_PI * w * p.mass * re_gamma_hat(ks, w));
        }
    }
    double worst = 0.0;
    for (double r : res) worst = std::max(worst, r);
    return worst;
}

std::vector<double> default_fdt_grid(const PhysicalParams& p, int n) {
    if (n < 1) throw std::invalid_argument("default_fdt_grid: n must be positive");
    std::vector<double> g(n);
    for (int i = 1; i <= n; ++i) g[i - 1] = p.cutoff * double(i) / double(n + 1);
    return g;
}

}  // namespace udw
