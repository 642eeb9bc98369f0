#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace udw {

// Units: hbar = c = 1 throughout.

// Detector/field parameters. `coupling` and `omega_damped` are derived from
// the independent inputs and kept in sync by make_params().
struct PhysicalParams {
    double mass = 1.0;            // detector mass M
    double omega_r = 5.0;         // renormalized oscillator frequency
    double gamma = 0.02;          // damping rate, gamma = coupling^2/(8 pi M)
    double image_distance = 1.0;  // mirror distance L (half space only)
    double cutoff = 1000.0;       // UV cutoff Lambda on field frequencies
    double coupling = 0.0;        // lambda = sqrt(8 pi M gamma)
    double omega_damped = 0.0;    // sqrt(omega_r^2 - gamma^2)
};

inline PhysicalParams make_params(double mass, double omega_r, double gamma,
                                  double image_distance, double cutoff) {
    if (!(mass > 0.0)) throw std::invalid_argument("make_params: mass must be positive");
    if (!(omega_r > 0.0)) throw std::invalid_argument("make_params: omega_r must be positive");
    if (!(gamma > 0.0)) throw std::invalid_argument("make_params: gamma must be positive");
    if (!(gamma < omega_r))
        throw std::invalid_argument("make_params: underdamped regime requires gamma < omega_r");
    if (!(image_distance > 0.0))
        throw std::invalid_argument("make_params: image_distance must be positive");
    if (!(cutoff > 10.0 * omega_r))
        throw std::invalid_argument("make_params: cutoff must exceed 10*omega_r");
    PhysicalParams p;
    p.mass = mass;
    p.omega_r = omega_r;
    p.gamma = gamma;
    p.image_distance = image_distance;
    p.cutoff = cutoff;
    p.coupling = std::sqrt(8.0 * M_PI * mass * gamma);
    p.omega_damped = std::sqrt(omega_r * omega_r - gamma * gamma);
    return p;
}

// Boundary condition for the field.
struct Geometry {
    enum class Kind { FreeSpace, HalfSpaceDirichlet };
    Kind kind = Kind::FreeSpace;
    double mirror_distance = 0.0;  // valid for HalfSpaceDirichlet only
};

inline Geometry free_space() { return Geometry{Geometry::Kind::FreeSpace, 0.0}; }

inline Geometry half_space(double mirror_distance) {
    if (!(mirror_distance > 0.0))
        throw std::invalid_argument("half_space: mirror distance must be positive");
    return Geometry{Geometry::Kind::HalfSpaceDirichlet, mirror_distance};
}

inline Geometry half_space(const PhysicalParams& p) { return half_space(p.image_distance); }

// Symmetric one-mode covariance matrix in (Q, P) with <QP+PQ>/2 off-diagonal.
struct CovarianceMatrix {
    double v_qq = 0.0;
    double v_pp = 0.0;
    double v_qp = 0.0;
};

inline double covariance_det(const CovarianceMatrix& c) {
    if (!(c.v_qq > 0.0) || !(c.v_pp > 0.0))
        throw std::invalid_argument("covariance_det: diagonal entries must be positive");
    return c.v_qq * c.v_pp - c.v_qp * c.v_qp;
}

// Default tolerance used when validating det V >= 1/4 against roundoff.
inline constexpr double kUncertaintyTolerance = 1e-6;

}  // namespace udw
