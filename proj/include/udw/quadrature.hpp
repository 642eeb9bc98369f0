#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace udw {

// Controls for the adaptive Gauss-Kronrod integrator.
struct QuadratureSpec {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    int max_depth = 30;  // bisection depth per top-level panel, must be >= 4
    // Interior points the panelization must respect (integrable kinks,
    // resonance edges, sinc zeros...). Points outside (a,b) are ignored.
    std::vector<double> forced_breakpoints;
    // If set, top-level panels are pre-split to at most half this length so
    // the error estimator sees oscillations instead of aliasing them.
    std::optional<double> oscillation_period_hint;
};

struct IntegrationResult {
    double value = 0.0;
    double error_estimate = 0.0;
    long panels = 0;  // number of terminal GK15 panels evaluated
};

class QuadratureError : public std::runtime_error {
  public:
    QuadratureError(const std::string& what, double worst_a, double worst_b, double worst_err)
        : std::runtime_error(what), worst_lo(worst_a), worst_hi(worst_b), worst_error(worst_err) {}
    double worst_lo;
    double worst_hi;
    double worst_error;
};

// Adaptive Gauss(7)/Kronrod(15) integration of f over [a, b]. Runs on the
// calling thread only and sums panels in a fixed order, so identical inputs
// give bit-identical results regardless of thread count elsewhere.
IntegrationResult integrate(const std::function<double(double)>& f, double a, double b,
                            const QuadratureSpec& spec = {});

}  // namespace udw
