#include "udw/twodetector.hpp"

#include <cmath>
#include <stdexcept>

#include "udw/latetime.hpp"
#include "udw/quadrature.hpp"
#include "udw/specfun.hpp"

namespace udw {

namespace {
using cd = std::complex<double>;
const cd kI(0.0, 1.0);

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const size_t n = x.size();
    double xm = 0.0, ym = 0.0;
    for (size_t i = 0; i < n; ++i) {
        xm += x[i];
        ym += y[i];
    }
    xm /= double(n);
    ym /= double(n);
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < n; ++i) {
        num += (x[i] - xm) * (y[i] - ym);
        den += (x[i] - xm) * (x[i] - xm);
    }
    return num / den;
}
}  // namespace

PairSolution solve_pair(const PhysicalParams& p, double omega, double k3_fraction,
                        double t_max, double step) {
    if (!(t_max > 0.0)) throw std::invalid_argument("solve_pair: t_max must be positive");
    if (!(std::abs(k3_fraction) <= 1.0))
        throw std::invalid_argument("solve_pair: k3_fraction must lie in [-1, 1]");
    const double L = p.image_distance;
    const double step_max = std::min(1.0 / (20.0 * p.omega_r), L / 20.0);
    if (!(step > 0.0) || step > step_max * (1.0 + 1e-9))
        throw std::invalid_argument("solve_pair: step must satisfy step <= min(1/(20 omega_r), L/20)");

    int m = int(std::lround(L / step));
    m = std::max(m, 1);
    const double h = L / double(m);
    const int n = std::max(1, int(std::ceil(t_max / h - 1e-9)));

    PairSolution sol;
    sol.omega = omega;
    sol.k3_fraction = k3_fraction;
    sol.dt = h;
    sol.q_b.assign(size_t(n) + 1, 0.0);
    sol.p_b.assign(size_t(n) + 1, 0.0);
    sol.q_a.assign(size_t(n) + 1, 0.0);
    sol.p_a.assign(size_t(n) + 1, 0.0);

    const double g2 = 2.0 * p.gamma;
    const double w2 = p.omega_r * p.omega_r;
    const double a = 2.0 * p.gamma / L;
    const double theta = omega * k3_fraction * L / 2.0;
    const cd amp_b = p.coupling / p.mass * std::exp(kI * theta);
    const cd amp_a = -p.coupling / p.mass * std::exp(-kI * theta);

    cd qb = 0.0, pb = 0.0, qa = 0.0, pa = 0.0;

    auto hist_mid = [&](const std::vector<cd>& q, const std::vector<cd>& pd, int k) -> cd {
        if (k < m) return 0.0;
        const size_t j = size_t(k - m);
        return 0.5 * (q[j] + q[j + 1]) + (h / 8.0) * (pd[j] - pd[j + 1]);
    };
    auto hist_end = [&](const std::vector<cd>& q, int k) -> cd {
        const int j = k + 1 - m;
        return j < 0 ? cd(0.0, 0.0) : q[size_t(j)];
    };

    for (int k = 0; k < n; ++k) {
        const double tk = h * double(k);
        const cd db0 = (k >= m) ? sol.q_a[size_t(k - m)] : cd(0.0, 0.0);  // B reads A's past
        const cd da0 = (k >= m) ? sol.q_b[size_t(k - m)] : cd(0.0, 0.0);
        const cd dbm = hist_mid(sol.q_a, sol.p_a, k);
        const cd dam = hist_mid(sol.q_b, sol.p_b, k);
        const cd db1 = hist_end(sol.q_a, k);
        const cd da1 = hist_end(sol.q_b, k);

        const cd e0 = std::exp(cd(0.0, -omega * tk));
        const cd em = std::exp(cd(0.0, -omega * (tk + 0.5 * h)));
        const cd e1 = std::exp(cd(0.0, -omega * (tk + h)));

        auto acc = [&](const cd& q, const cd& pp, const cd& delayed, const cd& drv) -> cd {
            return -g2 * pp - w2 * q - a * delayed + drv;
        };

        const cd k1qb = pb, k1pb = acc(qb, pb, db0, amp_b * e0);
        const cd k1qa = pa, k1pa = acc(qa, pa, da0, amp_a * e0);
        const cd k2qb = pb + 0.5 * h * k1pb,
                 k2pb = acc(qb + 0.5 * h * k1qb, pb + 0.5 * h * k1pb, dbm, amp_b * em);
        const cd k2qa = pa + 0.5 * h * k1pa,
                 k2pa = acc(qa + 0.5 * h * k1qa, pa + 0.5 * h * k1pa, dam, amp_a * em);
        const cd k3qb = pb + 0.5 * h * k2pb,
                 k3pb = acc(qb + 0.5 * h * k2qb, pb + 0.5 * h * k2pb, dbm, amp_b * em);
        const cd k3qa = pa + 0.5 * h * k2pa,
                 k3pa = acc(qa + 0.5 * h * k2qa, pa + 0.5 * h * k2pa, dam, amp_a * em);
        const cd k4qb = pb + h * k3pb, k4pb = acc(qb + h * k3qb, pb + h * k3pb, db1, amp_b * e1);
        const cd k4qa = pa + h * k3pa, k4pa = acc(qa + h * k3qa, pa + h * k3pa, da1, amp_a * e1);

        qb += h / 6.0 * (k1qb + 2.0 * k2qb + 2.0 * k3qb + k4qb);
        pb += h / 6.0 * (k1pb + 2.0 * k2pb + 2.0 * k3pb + k4pb);
        qa += h / 6.0 * (k1qa + 2.0 * k2qa + 2.0 * k3qa + k4qa);
        pa += h / 6.0 * (k1pa + 2.0 * k2pa + 2.0 * k3pa + k4pa);
        sol.q_b[size_t(k) + 1] = qb;
        sol.p_b[size_t(k) + 1] = pb;
        sol.q_a[size_t(k) + 1] = qa;
        sol.p_a[size_t(k) + 1] = pa;
    }
    return sol;
}

double combination_residual(const PhysicalParams& p, const PairSolution& sol) {
    const double h = sol.dt;
    const double L = p.image_distance;
    const int m = int(std::lround(L / h));
    const int n = int(sol.q_b.size()) - 1;
    const int jlo = std::max(m, 2);
    const int jhi = std::min(int(std::lround(3.0 * L / h)), n - 2);
    if (jhi < jlo)
        throw std::invalid_argument("combination_residual: trajectory too short for [L, 3L]");

    const double g2 = 2.0 * p.gamma;
    const double w2 = p.omega_r * p.omega_r;
    const double a = 2.0 * p.gamma / L;
    const double theta = sol.omega * sol.k3_fraction * L / 2.0;
    const double amp = p.coupling / p.mass * std::sin(theta);

    auto s_at = [&](int j) -> cd {
        return (sol.q_b[size_t(j)] + sol.q_a[size_t(j)]) / (2.0 * kI);
    };
    double worst = 0.0;
    for (int j = jlo; j <= jhi; ++j) {
        const cd sm2 = s_at(j - 2), sm1 = s_at(j - 1), s0 = s_at(j), sp1 = s_at(j + 1),
                 sp2 = s_at(j + 2);
        const cd d1 = (-sp2 + 8.0 * sp1 - 8.0 * sm1 + sm2) / (12.0 * h);
        const cd d2 = (-sp2 + 16.0 * sp1 - 30.0 * s0 + 16.0 * sm1 - sm2) / (12.0 * h * h);
        const cd delayed = s_at(j - m);
        const cd drive = amp * std::exp(cd(0.0, -sol.omega * h * double(j)));
        const cd res = d2 + g2 * d1 + w2 * s0 + a * delayed - drive;
        worst = std::max(worst, std::abs(res));
    }
    return worst;
}

cd pair_late_closed(const PhysicalParams& p, double omega, double k3_fraction, double t) {
    const double L = p.image_distance;
    const double theta = omega * k3_fraction * L / 2.0;
    const cd bracket = p.omega_r * p.omega_r - omega * omega - 2.0 * kI * p.gamma * omega +
                       2.0 * p.gamma / L * std::exp(kI * omega * L);
    return p.coupling * std::sin(theta) * std::exp(cd(0.0, -omega * t)) / (p.mass * bracket);
}

OrderCountingReport order_counting_check(const PhysicalParams& p,
                                         const std::vector<double>& L_grid,
                                         const std::vector<double>& gamma_grid) {
    if (L_grid.size() < 2 || gamma_grid.size() < 2)
        throw std::invalid_argument("order_counting_check: need at least 2 grid points per axis");

    OrderCountingReport rep;
    std::vector<double> log_gamma(gamma_grid.size());
    for (size_t j = 0; j < gamma_grid.size(); ++j) log_gamma[j] = std::log(gamma_grid[j]);

    auto stationary_vqq = [&](const PhysicalParams& q, const Geometry& geom,
                              int sector) -> double {
        // sector 0: physical bracket for the given geometry; +-1: normal-mode
        // split of the pair problem, D0 +- (2 gamma / L) e^{i w L}.
        QuadratureSpec spec;
        spec.abs_tol = 1e-13;
        spec.rel_tol = 1e-13;
        const double wt = q.omega_damped;
        for (double k : {1.0, 10.0, 100.0})
            for (double s : {-1.0, 1.0}) {
                const double x = wt + s * k * q.gamma;
                if (x > 0.0 && x < q.cutoff) spec.forced_breakpoints.push_back(x);
            }
        for (double x = 2.0 * (wt + 1.0); x < q.cutoff; x *= 2.0)
            spec.forced_breakpoints.push_back(x);
        spec.oscillation_period_hint = 2.0 * M_PI / q.image_distance;
        const auto img = [&](double w) -> double {
            cd bracket = wt * wt - (w + kI * q.gamma) * (w + kI * q.gamma);
            if (sector == 0) {
                if (geom.kind == Geometry::Kind::HalfSpaceDirichlet)
                    bracket += 2.0 * q.gamma / geom.mirror_distance * std::exp(kI * w * geom.mirror_distance);
            } else {
                bracket += double(sector) * 2.0 * q.gamma / q.image_distance *
                           std::exp(kI * w * q.image_distance);
            }
            return (1.0 / (q.mass * bracket)).imag();
        };
        return integrate(img, 0.0, q.cutoff, spec).value / M_PI;
    };

    std::vector<double> mirror_slopes, pair_slopes;
    for (double L : L_grid) {
        std::vector<double> log_mirror, log_pair;
        for (double g : gamma_grid) {
            const PhysicalParams q = make_params(p.mass, p.omega_r, g, L, p.cutoff);
            const double v_free = stationary_vqq(q, free_space(), 0);
            const double v_half = stationary_vqq(q, half_space(L), 0);
            const double v_pair =
                0.5 * (stationary_vqq(q, free_space(), +1) + stationary_vqq(q, free_space(), -1));
            const double dm = std::abs(v_half - v_free);
            const double dp = std::abs(v_pair - v_free);
            rep.mirror_values.push_back(dm);
            rep.pair_values.push_back(dp);
            log_mirror.push_back(std::log(dm));
            log_pair.push_back(std::log(dp));
        }
        mirror_slopes.push_back(fit_slope(log_gamma, log_mirror));
        pair_slopes.push_back(fit_slope(log_gamma, log_pair));
    }
    double ms = 0.0, ps = 0.0;
    for (double v : mirror_slopes) ms += v;
    for (double v : pair_slopes) ps += v;
    rep.mirror_gamma_exponent = ms / double(mirror_slopes.size());
    rep.pair_gamma_exponent = ps / double(pair_slopes.size());

    std::vector<double> log_L, log_env;
    for (double L : L_grid) {
        const double env = std::abs(gamma0_imaginary(p.omega_r * L));
        rep.envelope_values.push_back(env);
        log_L.push_back(std::log(L));
        log_env.push_back(std::log(env));
    }
    rep.envelope_L_exponent = fit_slope(log_L, log_env);
    return rep;
}

}  // namespace udw
