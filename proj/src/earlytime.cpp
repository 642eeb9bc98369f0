#include "udw/earlytime.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "udw/kernels.hpp"
#include "udw/quadrature.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace udw {

namespace {

using cd = complexd;
const cd kI(0.0, 1.0);

// Gauss-Legendre 8 on [-1, 1], positive half.
constexpr double kGl8X[4] = {0.1834346424956498, 0.5255324099163290,
                             0.7966664774136267, 0.9602898564975363};
constexpr double kGl8W[4] = {0.3626837833783620, 0.3137066458778873,
                             0.2223810344533745, 0.1012285362903763};
// Gauss-Legendre 10 on [-1, 1], positive half.
constexpr double kGl10X[5] = {0.1488743389816312, 0.4333953941292472, 0.6794095682990244,
                              0.8650633666889845, 0.9739065285171717};
constexpr double kGl10W[5] = {0.2955242247147529, 0.2692667193099963, 0.2190863625159820,
                              0.1494513491505806, 0.0666713443086881};

}  // namespace

complexd ModeTrajectory::at(double t) const {
    const long idx = std::clamp(std::lround(t / dt), 0L, long(values.size()) - 1L);
    return values[size_t(idx)];
}

complexd ModeTrajectory::deriv_at(double t) const {
    const long idx = std::clamp(std::lround(t / dt), 0L, long(derivs.size()) - 1L);
    return derivs[size_t(idx)];
}

ZerothOrderCoeffs zeroth_coeffs(const PhysicalParams& p, double omega) {
    const double wt = p.omega_damped;
    const cd den1 = 2.0 * (wt - omega - kI * p.gamma);
    const cd den2 = 2.0 * (-wt - omega - kI * p.gamma);
    return {1.0 / den1, 1.0 / den2};
}

complexd homogeneous_solution(const PhysicalParams& p, double t) {
    const double wt = p.omega_damped;
    const cd r = (p.omega_r + kI * p.gamma) / wt;
    const cd em = std::exp(cd(-p.gamma * t, -wt * t));
    const cd ep = std::exp(cd(-p.gamma * t, wt * t));
    return 0.5 * (1.0 + r) * em + 0.5 * (1.0 - r) * ep;
}

complexd homogeneous_solution_deriv(const PhysicalParams& p, double t) {
    const double wt = p.omega_damped;
    const cd r = (p.omega_r + kI * p.gamma) / wt;
    const cd em = std::exp(cd(-p.gamma * t, -wt * t));
    const cd ep = std::exp(cd(-p.gamma * t, wt * t));
    return 0.5 * (1.0 + r) * cd(-p.gamma, -wt) * em + 0.5 * (1.0 - r) * cd(-p.gamma, wt) * ep;
}

complexd zeroth_qplus(const PhysicalParams& p, double omega, double t) {
    const auto [m1, m2] = zeroth_coeffs(p, omega);
    const double wt = p.omega_damped;
    const cd drive = std::exp(cd(0.0, -omega * t));
    const cd decay = std::exp(cd(-p.gamma * t, 0.0));
    const cd ep = std::exp(cd(0.0, wt * t));
    return (m1 - m2) * drive + (m2 * ep - m1 / ep) * decay;
}

complexd zeroth_qplus_deriv(const PhysicalParams& p, double omega, double t) {
    const auto [m1, m2] = zeroth_coeffs(p, omega);
    const double wt = p.omega_damped;
    const cd drive = std::exp(cd(0.0, -omega * t));
    const cd decay = std::exp(cd(-p.gamma * t, 0.0));
    const cd ep = std::exp(cd(0.0, wt * t));
    return -kI * omega * (m1 - m2) * drive +
           (cd(-p.gamma, wt) * m2 * ep - cd(-p.gamma, -wt) * m1 / ep) * decay;
}

namespace {

// Real and imaginary parts share the quadrature panelization.
cd integrate_complex(const std::function<cd(double)>& f, double a, double b,
                     const QuadratureSpec& spec) {
    const double re = integrate([&](double x) { return f(x).real(); }, a, b, spec).value;
    const double im = integrate([&](double x) { return f(x).imag(); }, a, b, spec).value;
    return {re, im};
}

cd reflection_order_n(const PhysicalParams& p, double t, int n) {
    if (n == 0) return homogeneous_solution(p, t);
    const double L = p.image_distance;
    if (t <= double(n) * L) return 0.0;  // response gated by n delays
    const DampedOscillatorKernel g{p.gamma, p.omega_damped};
    const double coef = -2.0 * p.gamma / L;
    QuadratureSpec spec;
    spec.abs_tol = 1e-14;
    spec.rel_tol = 1e-10;
    spec.max_depth = 20;
    for (int j = 1; j < n; ++j) spec.forced_breakpoints.push_back(double(j) * L);
    // Lower orders vanish below (n-1) L, so the integrand support starts there.
    const double lo = double(n - 1) * L;
    return coef * integrate_complex(
                      [&](double s) {
                          return detector_green(g, t - L - s) * reflection_order_n(p, s, n - 1);
                      },
                      lo, t - L, spec);
}

}  // namespace

std::vector<complexd> reflection_orders_qa(const PhysicalParams& p, double t, int max_order) {
    if (max_order < 0 || max_order > 4)
        throw std::invalid_argument("reflection_orders_qa: max_order must be in [0, 4]");
    if (t < 0.0) throw std::invalid_argument("reflection_orders_qa: t must be >= 0");
    std::vector<cd> out(size_t(max_order) + 1);
    for (int n = 0; n <= max_order; ++n) out[size_t(n)] = reflection_order_n(p, t, n);
    return out;
}

complexd reflection_series_qa(const PhysicalParams& p, double t, int max_order) {
    cd sum = 0.0;
    for (const cd& v : reflection_orders_qa(p, t, max_order)) sum += v;
    return sum;
}

namespace {

struct DdeRun {
    double h = 0.0;
    int m = 0;  // delay in steps, L = m h
    std::vector<cd> q, p;
};

// RK4 with cubic-Hermite delayed history. The delay is snapped to an integer
// number of steps. Stage rules: start-of-step stage reads node k-m; the two
// midpoint stages read the Hermite midpoint of [k-m, k-m+1] (zero while
// t < L); the end stage reads node k+1-m, except that the homogeneous mode
// takes the left-segment value 0 exactly at t = L (the feedback switches on
// after the delay, not at it).
DdeRun dde_run(const PhysicalParams& par, bool homogeneous, double omega, double t_max,
               double step, bool mirror) {
    const double L = par.image_distance;
    int m = int(std::lround(L / step));
    m = std::max(m, 1);
    const double h = L / double(m);
    const int n = std::max(1, int(std::ceil(t_max / h - 1e-9)));

    DdeRun run;
    run.h = h;
    run.m = m;
    run.q.resize(size_t(n) + 1);
    run.p.resize(size_t(n) + 1);

    const double g2 = 2.0 * par.gamma;
    const double w2 = par.omega_r * par.omega_r;
    const double a = mirror ? 2.0 * par.gamma / L : 0.0;

    cd qk = homogeneous ? cd(1.0, 0.0) : cd(0.0, 0.0);
    cd pk = homogeneous ? cd(0.0, -par.omega_r) : cd(0.0, 0.0);
    run.q[0] = qk;
    run.p[0] = pk;

    auto drive = [&](double t) -> cd {
        return homogeneous ? cd(0.0, 0.0) : std::exp(cd(0.0, -omega * t));
    };
    auto accel = [&](const cd& q, const cd& p, const cd& delayed, const cd& drv) -> cd {
        return -g2 * p - w2 * q - a * delayed + drv;
    };

    for (int k = 0; k < n; ++k) {
        const double tk = h * double(k);
        cd d_start = (k >= m) ? run.q[size_t(k - m)] : cd(0.0, 0.0);
        cd d_mid;
        if (k < m) {
            d_mid = 0.0;
        } else {
            const size_t j = size_t(k - m);
            d_mid = 0.5 * (run.q[j] + run.q[j + 1]) + (h / 8.0) * (run.p[j] - run.p[j + 1]);
        }
        cd d_end;
        const int j_end = k + 1 - m;
        if (j_end < 0) {
            d_end = 0.0;
        } else if (j_end == 0) {
            d_end = homogeneous ? cd(0.0, 0.0) : run.q[0];
        } else {
            d_end = run.q[size_t(j_end)];
        }

        const cd drv0 = drive(tk);
        const cd drvm = drive(tk + 0.5 * h);
        const cd drv1 = drive(tk + h);

        const cd k1q = pk;
        const cd k1p = accel(qk, pk, d_start, drv0);
        const cd k2q = pk + 0.5 * h * k1p;
        const cd k2p = accel(qk + 0.5 * h * k1q, pk + 0.5 * h * k1p, d_mid, drvm);
        const cd k3q = pk + 0.5 * h * k2p;
        const cd k3p = accel(qk + 0.5 * h * k2q, pk + 0.5 * h * k2p, d_mid, drvm);
        const cd k4q = pk + h * k3p;
        const cd k4p = accel(qk + h * k3q, pk + h * k3p, d_end, drv1);

        qk += h / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
        pk += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        run.q[size_t(k) + 1] = qk;
        run.p[size_t(k) + 1] = pk;
    }
    return run;
}

// Cubic Hermite read of (value, derivative) at an off-node time.
std::pair<cd, cd> hermite_read(const DdeRun& run, const PhysicalParams& par, bool homogeneous,
                               double omega, bool mirror, double t) {
    const double h = run.h;
    const size_t last = run.q.size() - 1;
    double u = t / h;
    size_t j = size_t(std::max(0.0, std::floor(u)));
    if (j >= last) j = last - 1;
    const double th = u - double(j);
    if (th == 0.0) return {run.q[j], run.p[j]};
    const cd q0 = run.q[j], q1 = run.q[j + 1];
    const cd p0 = run.p[j], p1 = run.p[j + 1];
    const double t0 = th * th * (3.0 - 2.0 * th);
    const cd val = (1.0 - t0) * q0 + t0 * q1 +
                   (th * (1.0 - th) * (1.0 - th)) * h * p0 - (th * th * (1.0 - th)) * h * p1;
    // Derivative from the p-Hermite using the equation of motion at the nodes.
    const double g2 = 2.0 * par.gamma;
    const double w2 = par.omega_r * par.omega_r;
    const double a = mirror ? 2.0 * par.gamma / par.image_distance : 0.0;
    auto pdot = [&](size_t k) -> cd {
        const cd delayed = (k >= size_t(run.m)) ? run.q[k - size_t(run.m)] : cd(0.0, 0.0);
        const cd drv = homogeneous ? cd(0.0, 0.0)
                                   : std::exp(cd(0.0, -omega * h * double(k)));
        return -g2 * run.p[k] - w2 * run.q[k] - a * delayed + drv;
    };
    const cd pd0 = pdot(j), pd1 = pdot(j + 1);
    const cd der = (1.0 - t0) * p0 + t0 * p1 +
                   (th * (1.0 - th) * (1.0 - th)) * h * pd0 - (th * th * (1.0 - th)) * h * pd1;
    return {val, der};
}

}  // namespace

ModeTrajectory dde_solve(const PhysicalParams& p, std::optional<double> source_omega,
                         double t_max, double step, bool mirror) {
    if (!(t_max > 0.0)) throw std::invalid_argument("dde_solve: t_max must be positive");
    const double step_max = std::min(1.0 / (20.0 * p.omega_r), p.image_distance / 20.0);
    if (!(step > 0.0) || step > step_max * (1.0 + 1e-9))
        throw std::invalid_argument("dde_solve: step must satisfy step <= min(1/(20 omega_r), L/20)");
    const bool homogeneous = !source_omega.has_value();
    const double omega = source_omega.value_or(0.0);
    DdeRun run = dde_run(p, homogeneous, omega, t_max, step, mirror);
    ModeTrajectory tr;
    tr.kind = homogeneous ? ModeTrajectory::Kind::detector_a : ModeTrajectory::Kind::field_plus;
    tr.source_omega = omega;
    tr.dt = run.h;
    tr.values = std::move(run.q);
    tr.derivs = std::move(run.p);
    return tr;
}

namespace {

struct OmegaGrid {
    std::vector<double> nodes;
    std::vector<double> weights;
    double handoff = 0.0;  // closed-form transient tail covers (handoff, cutoff]
};

void add_gl8_panels(OmegaGrid& g, double lo, double hi, double width) {
    if (!(hi > lo)) return;
    const int n = std::max(1, int(std::ceil((hi - lo) / width)));
    for (int i = 0; i < n; ++i) {
        const double a = lo + (hi - lo) * double(i) / n;
        const double b = lo + (hi - lo) * double(i + 1) / n;
        const double c = 0.5 * (a + b), hh = 0.5 * (b - a);
        for (int k = 3; k >= 0; --k) {
            g.nodes.push_back(c - hh * kGl8X[k]);
            g.weights.push_back(hh * kGl8W[k]);
        }
        for (int k = 0; k < 4; ++k) {
            g.nodes.push_back(c + hh * kGl8X[k]);
            g.weights.push_back(hh * kGl8W[k]);
        }
    }
}

OmegaGrid build_omega_grid(const PhysicalParams& p) {
    const double wt = p.omega_damped;
    const double band = 10.0 * p.gamma;
    OmegaGrid g;
    g.handoff = std::min(p.cutoff, std::max(12.0 * p.omega_r, wt + 10.0));
    const double lo_edge = std::max(0.0, wt - band);
    const double hi_edge = std::min(g.handoff, wt + band);
    add_gl8_panels(g, 0.0, lo_edge, 0.15);
    add_gl8_panels(g, lo_edge, hi_edge, 0.5 * p.gamma);
    add_gl8_panels(g, hi_edge, g.handoff, 0.25);
    return g;
}

struct TailMoments {
    double qq = 0.0, pp = 0.0, qp = 0.0;
};

// Closed-form zeroth-order transient moments of the band (handoff, cutoff].
// Mirror feedback corrections up in that band are below 1e-8 of the moments.
TailMoments tail_moments(const PhysicalParams& p, const Geometry& geom, double handoff,
                         double t) {
    TailMoments tm;
    if (handoff >= p.cutoff) return tm;
    const bool half = geom.kind == Geometry::Kind::HalfSpaceDirichlet;
    const double rate = t + (half ? geom.mirror_distance : 0.0);
    const double period = 2.0 * M_PI / std::max(rate, 0.3);
    const double width = std::max(std::min(period / 3.0, 4.0), 0.02);
    const int n = std::max(1, int(std::ceil((p.cutoff - handoff) / width)));
    const double wt = p.omega_damped;
    double sq = 0.0, sp = 0.0, sqp = 0.0;
    for (int i = 0; i < n; ++i) {
        const double a = handoff + (p.cutoff - handoff) * double(i) / n;
        const double b = handoff + (p.cutoff - handoff) * double(i + 1) / n;
        const double c = 0.5 * (a + b), hh = 0.5 * (b - a);
        for (int k = -5; k < 5; ++k) {
            const int j = k < 0 ? -k - 1 : k;
            const double x = k < 0 ? c - hh * kGl10X[j] : c + hh * kGl10X[j];
            const double w = hh * kGl10W[j];
            const double dens = spectral_density(geom, p, x);
            const cd s = zeroth_qplus(p, x, t) / wt;
            const cd sd = zeroth_qplus_deriv(p, x, t) / wt;
            sq += w * dens * std::norm(s);
            sp += w * dens * std::norm(sd);
            sqp += w * dens * (std::conj(s) * sd).real();
        }
    }
    const double lam2 = p.coupling * p.coupling;
    tm.qq = lam2 / (p.mass * p.mass) * sq;
    tm.pp = lam2 * sp;
    tm.qp = lam2 / p.mass * sqp;
    return tm;
}

}  // namespace

std::vector<EarlyCovariance> early_covariance_sweep(const PhysicalParams& p,
                                                    const Geometry& geom,
                                                    const std::vector<double>& t_samples,
                                                    int order, bool parallel) {
    if (t_samples.empty()) return {};
    for (size_t i = 0; i < t_samples.size(); ++i) {
        if (!(t_samples[i] >= 0.0))
            throw std::invalid_argument("early_covariance_sweep: samples must be >= 0");
        if (i > 0 && t_samples[i] < t_samples[i - 1])
            throw std::invalid_argument("early_covariance_sweep: samples must be sorted");
    }
    if (order < 0) throw std::invalid_argument("early_covariance_sweep: order must be >= 0");

    const bool half = geom.kind == Geometry::Kind::HalfSpaceDirichlet;
    const bool use_dde = order >= 1;
    const double wt = p.omega_damped;
    const double t_end = t_samples.back();
    const size_t ns = t_samples.size();

    OmegaGrid grid = build_omega_grid(p);
    const size_t nw = grid.nodes.size();

    // Per-mode amplitudes and their time derivatives at the sample times.
    std::vector<cd> sval(nw * ns), sder(nw * ns);
    std::vector<cd> qa(ns), qad(ns);

    const double step = std::min({5e-3, p.image_distance / 20.0, 1.0 / (20.0 * p.omega_r)});

    if (use_dde && t_end > 0.0) {
        auto run_mode = [&](long idx) {
            if (idx < 0) {  // homogeneous detector mode
                if (half) {
                    DdeRun run = dde_run(p, true, 0.0, t_end, step, true);
                    for (size_t j = 0; j < ns; ++j) {
                        auto [v, d] = hermite_read(run, p, true, 0.0, true, t_samples[j]);
                        qa[j] = v;
                        qad[j] = d;
                    }
                } else {
                    for (size_t j = 0; j < ns; ++j) {
                        qa[j] = homogeneous_solution(p, t_samples[j]);
                        qad[j] = homogeneous_solution_deriv(p, t_samples[j]);
                    }
                }
                return;
            }
            const double w = grid.nodes[size_t(idx)];
            DdeRun run = dde_run(p, false, w, t_end, step, half);
            for (size_t j = 0; j < ns; ++j) {
                // dde_run integrates the unit-drive mode directly, so no
                // amplitude rescaling is needed here.
                auto [v, d] = hermite_read(run, p, false, w, half, t_samples[j]);
                sval[size_t(idx) * ns + j] = v;
                sder[size_t(idx) * ns + j] = d;
            }
        };
        if (parallel) {
#pragma omp parallel for schedule(dynamic)
            for (long i = -1; i < long(nw); ++i) run_mode(i);
        } else {
            for (long i = -1; i < long(nw); ++i) run_mode(i);
        }
    } else {
        auto run_mode = [&](long idx) {
            if (idx < 0) {
                for (size_t j = 0; j < ns; ++j) {
                    qa[j] = homogeneous_solution(p, t_samples[j]);
                    qad[j] = homogeneous_solution_deriv(p, t_samples[j]);
                }
                return;
            }
            const double w = grid.nodes[size_t(idx)];
            for (size_t j = 0; j < ns; ++j) {
                sval[size_t(idx) * ns + j] = zeroth_qplus(p, w, t_samples[j]) / wt;
                sder[size_t(idx) * ns + j] = zeroth_qplus_deriv(p, w, t_samples[j]) / wt;
            }
        };
        if (parallel) {
#pragma omp parallel for schedule(dynamic)
            for (long i = -1; i < long(nw); ++i) run_mode(i);
        } else {
            for (long i = -1; i < long(nw); ++i) run_mode(i);
        }
    }

    // Spectral weights, fixed evaluation order.
    std::vector<double> dens(nw);
    for (size_t i = 0; i < nw; ++i) dens[i] = spectral_density(geom, p, grid.nodes[i]);

    const double lam2 = p.coupling * p.coupling;
    std::vector<EarlyCovariance> out(ns);
    for (size_t j = 0; j < ns; ++j) {
        double sq = 0.0, cq = 0.0;
        double sp = 0.0, cp = 0.0;
        double sqp = 0.0, cqp = 0.0;
        auto kadd = [](double& sum, double& comp, double x) {
            const double y = x - comp;
            const double t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        };
        for (size_t i = 0; i < nw; ++i) {
            const double wI = grid.weights[i] * dens[i];
            kadd(sq, cq, wI * std::norm(sval[i * ns + j]));
            kadd(sp, cp, wI * std::norm(sder[i * ns + j]));
            kadd(sqp, cqp, wI * (std::conj(sval[i * ns + j]) * sder[i * ns + j]).real());
        }
        const TailMoments tm = tail_moments(p, geom, grid.handoff, t_samples[j]);

        EarlyCovariance ec;
        ec.time = t_samples[j];
        ec.a_qq = std::norm(qa[j]) / (2.0 * p.mass * p.omega_r);
        ec.a_pp = p.mass / (2.0 * p.omega_r) * std::norm(qad[j]);
        ec.a_qp = (std::conj(qa[j]) * qad[j]).real() / (2.0 * p.omega_r);
        ec.v_qq = lam2 / (p.mass * p.mass) * sq + tm.qq;
        ec.v_pp = lam2 * sp + tm.pp;
        ec.v_qp = lam2 / p.mass * sqp + tm.qp;
        ec.cov.v_qq = ec.a_qq + ec.v_qq;
        ec.cov.v_pp = ec.a_pp + ec.v_pp;
        ec.cov.v_qp = ec.a_qp + ec.v_qp;
        out[j] = ec;
    }
    return out;
}

EarlyCovariance early_covariance(const PhysicalParams& p, const Geometry& geom, double t,
                                 int order) {
    return early_covariance_sweep(p, geom, {t}, order)[0];
}

}  // namespace udw
