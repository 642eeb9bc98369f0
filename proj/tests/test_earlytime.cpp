#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <vector>

#include "udw/earlytime.hpp"
#include "udw/entanglement.hpp"
#include "udw/params.hpp"

using namespace udw;
using cd = complexd;

namespace {

PhysicalParams base1() { return make_params(1.0, 5.0, 0.02, 1.0, 1000.0); }
PhysicalParams base2() { return make_params(1.0, 5.0, 0.02, 2.0, 1000.0); }

} // namespace

TEST_CASE("zeroth-order coefficients solve the partial-fraction split") {
    PhysicalParams p = base1();
    for (double w : {0.3, 3.0, 4.9, 5.2, 8.0}) {
        ZerothOrderCoeffs c = zeroth_coeffs(p, w);
        cd direct = 1.0 / (2.0 * (cd(p.omega_damped, 0.0) - cd(w, p.gamma)));
        CHECK(std::abs(c.m1 - direct) <= 1e-15 * std::abs(direct));
        // (m1 - m2)/omega_damped collapses to the driven-response denominator
        cd lhs = (c.m1 - c.m2) / p.omega_damped;
        cd rhs = 1.0 / cd(p.omega_r * p.omega_r - w * w, -2.0 * p.gamma * w);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(rhs));
    }
}

TEST_CASE("homogeneous solution: initial data and equation of motion") {
    PhysicalParams p = base1();
    cd q0 = homogeneous_solution(p, 0.0);
    cd d0 = homogeneous_solution_deriv(p, 0.0);
    CHECK(std::abs(q0 - cd(1.0, 0.0)) <= 1e-15);
    CHECK(std::abs(d0 - cd(0.0, -p.omega_r)) <= 1e-15);

    // independent RK4 integration of q'' + 2 gamma q' + omega_r^2 q = 0
    const double h = 1e-4;
    cd q(1.0, 0.0), v(0.0, -p.omega_r);
    auto acc = [&](cd qq, cd vv) { return -2.0 * p.gamma * vv - p.omega_r * p.omega_r * qq; };
    for (int k = 0; k < 25000; ++k) {
        cd k1q = v, k1v = acc(q, v);
        cd k2q = v + 0.5 * h * k1v, k2v = acc(q + 0.5 * h * k1q, v + 0.5 * h * k1v);
        cd k3q = v + 0.5 * h * k2v, k3v = acc(q + 0.5 * h * k2q, v + 0.5 * h * k2v);
        cd k4q = v + h * k3v, k4v = acc(q + h * k3q, v + h * k3v);
        q += h / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    }
    CHECK(std::abs(q - homogeneous_solution(p, 2.5)) <= 1e-8);
    CHECK(std::abs(v - homogeneous_solution_deriv(p, 2.5)) <= 1e-8);
}

TEST_CASE("driven mode: initial data, equation of motion, frozen values") {
    PhysicalParams p = base1();
    const double w = 3.0;
    CHECK(std::abs(zeroth_qplus(p, w, 0.0)) <= 1e-15);
    CHECK(std::abs(zeroth_qplus_deriv(p, w, 0.0)) <= 1e-15);

    // residual of F'' + 2 gamma F' + omega_r^2 F = omega_damped e^{-iwt}
    const double h = 1e-4;
    for (double t : {0.7, 1.3, 2.6}) {
        cd fm = zeroth_qplus(p, w, t - h), f0 = zeroth_qplus(p, w, t), fp = zeroth_qplus(p, w, t + h);
        cd f2 = (fp - 2.0 * f0 + fm) / (h * h);
        cd f1 = (fp - fm) / (2.0 * h);
        cd drive = p.omega_damped * std::exp(cd(0.0, -w * t));
        CHECK(std::abs(f2 + 2.0 * p.gamma * f1 + p.omega_r * p.omega_r * f0 - drive) <= 1e-6);
    }

    cd f = zeroth_qplus(p, w, 2.0);
    cd fd = zeroth_qplus_deriv(p, w, 2.0);
    CHECK(std::abs(f - cd(0.55269258204664, -0.00653039393955)) <= 1e-10 * std::abs(f));
    CHECK(std::abs(fd - cd(-0.54221642422143, -1.65807774613991)) <= 1e-10 * std::abs(fd));

    // Duhamel convolution oracle: F(t) = int_0^t e^{-g s} sin(wd s) e^{-iw(t-s)} ds
    const double hs = 1e-4;
    const double t = 2.0;
    const std::size_t n = std::size_t(std::llround(t / hs));
    cd conv = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
        double s = double(i) * hs;
        double coef = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        conv += coef * std::exp(-p.gamma * s) * std::sin(p.omega_damped * s) *
                std::exp(cd(0.0, -w * (t - s)));
    }
    conv *= hs / 3.0;
    CHECK(std::abs(conv - f) <= 1e-12);
}

TEST_CASE("driven mode relaxes to the steady oscillation") {
    PhysicalParams p = base1();
    const double w = p.omega_damped;
    ZerothOrderCoeffs c = zeroth_coeffs(p, w);
    const double t = 600.0;
    cd steady = (c.m1 - c.m2) * std::exp(cd(0.0, -w * t));
    CHECK(std::abs(zeroth_qplus(p, w, t) - steady) <= 1e-5 * std::abs(steady));
}

TEST_CASE("delay solver reproduces the closed forms before the first image arrives") {
    PhysicalParams p = base1();
    ModeTrajectory drv = dde_solve(p, 3.0, 1.0, 0.001, true);
    for (double t : {0.25, 0.5, 0.95})
        CHECK(std::abs(drv.at(t) - zeroth_qplus(p, 3.0, t) / p.omega_damped) <= 1e-8);

    ModeTrajectory hom = dde_solve(p, std::nullopt, 1.0, 0.001, true);
    double sup = 0.0;
    for (double t = 0.0; t <= 0.999; t += 0.013)
        sup = std::max(sup, std::abs(hom.at(t) - homogeneous_solution(p, hom.dt * std::lround(t / hom.dt))));
    CHECK(sup <= 1e-8);
}

TEST_CASE("delay term stays silent until one light-crossing time") {
    PhysicalParams p = base1();
    const double h = 0.005;
    const std::size_t m = std::size_t(std::llround(p.image_distance / h));
    ModeTrajectory on_d = dde_solve(p, 3.0, 1.2, h, true);
    ModeTrajectory off_d = dde_solve(p, 3.0, 1.2, h, false);
    ModeTrajectory on_h = dde_solve(p, std::nullopt, 1.2, h, true);
    ModeTrajectory off_h = dde_solve(p, std::nullopt, 1.2, h, false);
    for (std::size_t k = 0; k <= m; ++k) {
        CHECK(on_d.values[k] == off_d.values[k]);
        CHECK(on_h.values[k] == off_h.values[k]);
    }
    CHECK(on_d.values[m + 1] != off_d.values[m + 1]);
    CHECK(on_h.values[m + 1] != off_h.values[m + 1]);
}

TEST_CASE("image contributions switch on at integer multiples of the delay") {
    PhysicalParams p = base1();
    auto at05 = reflection_orders_qa(p, 0.5, 3);
    CHECK(at05[1] == cd(0.0, 0.0));
    CHECK(at05[2] == cd(0.0, 0.0));
    CHECK(at05[3] == cd(0.0, 0.0));
    CHECK(std::abs(at05[0] - homogeneous_solution(p, 0.5)) <= 1e-14);

    CHECK(reflection_orders_qa(p, 1.0, 3)[1] == cd(0.0, 0.0)); // boundary t = L
    auto at15 = reflection_orders_qa(p, 1.5, 3);
    CHECK(std::abs(at15[1]) > 0.0);
    CHECK(at15[2] == cd(0.0, 0.0));
    CHECK(reflection_orders_qa(p, 2.0, 3)[2] == cd(0.0, 0.0));
    auto at25 = reflection_orders_qa(p, 2.5, 3);
    CHECK(std::abs(at25[2]) > 0.0);
    CHECK(at25[3] == cd(0.0, 0.0));
}

TEST_CASE("reflection series agrees with the delay solver") {
    PhysicalParams p = base1();
    ModeTrajectory tr = dde_solve(p, std::nullopt, 3.0, 0.001, true);
    double sup = 0.0;
    for (double t = 0.0; t <= 2.95; t += 0.05)
        sup = std::max(sup, std::abs(reflection_series_qa(p, t, 3) - tr.at(t)));
    CHECK(sup <= 1e-8);
}

TEST_CASE("small damping: driven amplitude approaches the undamped response") {
    PhysicalParams p = make_params(1.0, 5.0, 0.005, 10.0, 1000.0);
    ModeTrajectory tr = dde_solve(p, 2.0, 1400.0, 0.01, false);
    const double target = 1.0 / (p.omega_r * p.omega_r - 4.0);
    CHECK(std::abs(std::abs(tr.at(1395.0)) - target) <= 2e-3 * target);
}

TEST_CASE("trajectory sampling clamps to the stored grid") {
    PhysicalParams p = base1();
    ModeTrajectory tr = dde_solve(p, 3.0, 0.5, 0.005, true);
    CHECK(tr.at(0.0113) == tr.values[2]);
    CHECK(tr.deriv_at(0.0113) == tr.derivs[2]);
    CHECK(tr.at(99.0) == tr.values.back());
}

TEST_CASE("initial covariance is the pure oscillator ground state") {
    PhysicalParams p = base2();
    EarlyCovariance e = early_covariance(p, half_space(2.0), 0.0, 1);
    CHECK(std::abs(e.v_qq) <= 1e-25);
    CHECK(std::abs(e.v_pp) <= 1e-25);
    CHECK(std::abs(e.v_qp) <= 1e-25);
    CHECK(e.a_qq == doctest::Approx(1.0 / (2.0 * p.mass * p.omega_r)).epsilon(1e-15));
    CHECK(e.a_pp == doctest::Approx(p.mass * p.omega_r / 2.0).epsilon(1e-15));
    CHECK(std::abs(e.a_qp) <= 1e-25);
    CHECK(covariance_det(e.cov) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(entropy_from_covariance(e.cov).linear_entropy <= 1e-10);
}

TEST_CASE("sweep rows match single-point evaluations exactly") {
    PhysicalParams p = base2();
    Geometry g = half_space(2.0);
    auto sw = early_covariance_sweep(p, g, {1.2}, 1, true);
    EarlyCovariance one = early_covariance(p, g, 1.2, 1);
    CHECK(sw[0].cov.v_qq == one.cov.v_qq);
    CHECK(sw[0].cov.v_pp == one.cov.v_pp);
    CHECK(sw[0].cov.v_qp == one.cov.v_qp);
    CHECK(sw[0].a_qq == one.a_qq);
    CHECK(sw[0].v_pp == one.v_pp);
    CHECK(sw[0].v_qp == one.v_qp);

    // any sub-grid of samples reproduces its rows bit-exactly
    auto full = early_covariance_sweep(p, g, {0.3, 0.9, 1.4}, 1, true);
    auto sub = early_covariance_sweep(p, g, {0.9}, 1, true);
    CHECK(full[1].cov.v_qq == sub[0].cov.v_qq);
    CHECK(full[1].cov.v_pp == sub[0].cov.v_pp);
    CHECK(full[1].cov.v_qp == sub[0].cov.v_qp);
}

TEST_CASE("parallel and serial sweeps are bit-identical") {
    PhysicalParams p = base2();
    Geometry g = half_space(2.0);
    auto a = early_covariance_sweep(p, g, {0.3, 0.9}, 1, true);
    auto b = early_covariance_sweep(p, g, {0.3, 0.9}, 1, false);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].cov.v_qq == b[i].cov.v_qq);
        CHECK(a[i].cov.v_pp == b[i].cov.v_pp);
        CHECK(a[i].cov.v_qp == b[i].cov.v_qp);
    }
}

TEST_CASE("cross covariance equals half the position-variance rate") {
    PhysicalParams p = base2();
    Geometry g = half_space(2.0);
    auto sw = early_covariance_sweep(p, g, {1.19, 1.20, 1.21, 2.39, 2.40, 2.41}, 1, true);
    for (int base : {0, 3}) {
        double rate = (sw[base + 2].cov.v_qq - sw[base].cov.v_qq) / 0.02;
        CHECK(std::abs(sw[base + 1].cov.v_qp - 0.5 * p.mass * rate) <= 5e-5);
    }
}

TEST_CASE("zeroth order captures the dynamics before the first reflection") {
    PhysicalParams p = base2();
    Geometry g = half_space(2.0);
    auto s0 = early_covariance_sweep(p, g, {0.75}, 0, true);
    auto s1 = early_covariance_sweep(p, g, {0.75}, 1, true);
    CHECK(std::abs(s0[0].cov.v_qq - s1[0].cov.v_qq) <= 1e-8);
    CHECK(std::abs(s0[0].cov.v_pp - s1[0].cov.v_pp) <= 1e-6);
    CHECK(std::abs(s0[0].cov.v_qp - s1[0].cov.v_qp) <= 1e-7);
}

TEST_CASE("entropy transient at L = 2: frozen values") {
    PhysicalParams p = base2();
    Geometry g = half_space(2.0);
    auto sw = early_covariance_sweep(p, g, {0.25, 0.5, 0.75, 1.0, 1.5}, 1, true);
    const double pins[5] = {0.0223047744, 0.0209647688, 0.0205160062, 0.0209414366, 0.0207458942};
    for (int i = 0; i < 5; ++i) {
        double s = entropy_from_covariance(sw[i].cov).linear_entropy;
        CHECK(std::abs(s - pins[i]) <= 1e-9);
        CHECK(s > 0.0);
        CHECK(covariance_det(sw[i].cov) >= 0.25);
    }
}

TEST_CASE("input validation") {
    PhysicalParams p = base1();
    CHECK_THROWS_AS(dde_solve(p, 3.0, 0.0, 0.001, true), std::invalid_argument);
    CHECK_THROWS_AS(dde_solve(p, 3.0, 1.0, 0.2, true), std::invalid_argument);
    CHECK_THROWS_AS(reflection_orders_qa(p, 1.0, 5), std::invalid_argument);
    CHECK_THROWS_AS(reflection_orders_qa(p, -0.1, 2), std::invalid_argument);
    Geometry g = half_space(1.0);
    CHECK_THROWS_AS(early_covariance_sweep(p, g, {1.0, 0.5}, 1, true), std::invalid_argument);
    CHECK_THROWS_AS(early_covariance_sweep(p, g, {-1.0}, 1, true), std::invalid_argument);
    CHECK_THROWS_AS(early_covariance_sweep(p, g, {1.0}, -1, true), std::invalid_argument);
}
