#pragma once

#include "udw/params.hpp"

namespace udw {

struct EntanglementResult {
    double purity = 1.0;         // P = 1 / (2 sqrt(det V))
    double linear_entropy = 0.0; // S_L = 1 - P
    bool clamped = false;        // det V fell inside the roundoff window below 1/4
};

// Linear entropy of the reduced Gaussian detector state. det V must satisfy
// det V >= 1/4 (vacuum saturates). Values inside [1/4 (1 - tol), 1/4) are
// treated as roundoff, clamped to 1/4 and flagged; anything lower throws.
EntanglementResult entropy_from_covariance(const CovarianceMatrix& cov,
                                           double uncertainty_tol = kUncertaintyTolerance);

}  // namespace udw
