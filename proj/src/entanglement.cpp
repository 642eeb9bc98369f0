#include "udw/entanglement.hpp"

#include <cmath>
#include <stdexcept>

namespace udw {

EntanglementResult entropy_from_covariance(const CovarianceMatrix& cov, double uncertainty_tol) {
    if (!(uncertainty_tol >= 0.0))
        throw std::invalid_argument("entropy_from_covariance: tolerance must be >= 0");
    double det = covariance_det(cov);
    EntanglementResult r;
    if (det < 0.25) {
        if (det < 0.25 * (1.0 - uncertainty_tol))
            throw std::runtime_error(
                "entropy_from_covariance: det V < 1/4 beyond roundoff window, "
                "state violates the uncertainty relation");
        det = 0.25;  // roundoff below the vacuum floor
        r.clamped = true;
    }
    r.purity = 1.0 / (2.0 * std::sqrt(det));
    r.linear_entropy = 1.0 - r.purity;
    return r;
}

}  // namespace udw
