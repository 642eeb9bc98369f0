#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "udw/entanglement.hpp"

using udw::CovarianceMatrix;
using udw::entropy_from_covariance;

TEST_CASE("ground state is pure") {
    auto r = entropy_from_covariance({0.1, 2.5, 0.0});
    CHECK(r.purity == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(r.linear_entropy == doctest::Approx(0.0).epsilon(1e-15));
    CHECK_FALSE(r.clamped);
}

TEST_CASE("det = 1 gives purity one half") {
    auto r = entropy_from_covariance({1.0, 1.0, 0.0});
    CHECK(r.purity == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(r.linear_entropy == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("entropy is invariant under symplectic squeezing") {
    // (Q, P) -> (s Q, P/s) preserves det and therefore the entropy.
    auto a = entropy_from_covariance({0.4, 0.625, 0.0});
    CHECK(a.linear_entropy == doctest::Approx(0.0).epsilon(1e-14));
    auto b = entropy_from_covariance({0.13, 3.0, 0.1});
    auto c = entropy_from_covariance({0.13 * 4.0, 3.0 / 4.0, 0.1});
    CHECK(b.linear_entropy == doctest::Approx(c.linear_entropy).epsilon(1e-14));
}

TEST_CASE("entropy grows with the determinant") {
    double prev = -1.0;
    for (double vpp : {2.5, 2.6, 3.0, 10.0}) {
        auto r = entropy_from_covariance({0.1, vpp, 0.0});
        CHECK(r.linear_entropy > prev);
        CHECK(r.purity <= 1.0);
        prev = r.linear_entropy;
    }
}

TEST_CASE("roundoff window clamps and flags") {
    const double vqq = 0.1 * (1.0 - 5e-7);  // det = 0.25 (1 - 5e-7)
    auto r = entropy_from_covariance({vqq, 2.5, 0.0});
    CHECK(r.clamped);
    CHECK(r.purity == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(r.linear_entropy == 0.0);
}

TEST_CASE("violations beyond the window throw") {
    const double vqq = 0.1 * (1.0 - 2e-6);
    CHECK_THROWS_AS(entropy_from_covariance({vqq, 2.5, 0.0}), std::runtime_error);
    CHECK_THROWS_AS(entropy_from_covariance({0.01, 2.5, 0.0}), std::runtime_error);
}

TEST_CASE("custom tolerance widens the window") {
    const double vqq = 0.1 * (1.0 - 5e-4);
    auto r = entropy_from_covariance({vqq, 2.5, 0.0}, 1e-3);
    CHECK(r.clamped);
    CHECK_THROWS_AS(entropy_from_covariance({vqq, 2.5, 0.0}, 1e-6), std::runtime_error);
}

TEST_CASE("invalid diagonals are rejected") {
    CHECK_THROWS_AS(entropy_from_covariance({0.0, 2.5, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(entropy_from_covariance({0.1, -1.0, 0.0}), std::invalid_argument);
}
