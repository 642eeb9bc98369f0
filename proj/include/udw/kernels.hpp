#pragma once

#include <vector>

#include "udw/params.hpp"
#include "udw/quadrature.hpp"

namespace udw {

// Effective 1D spectral density I(omega) of the field seen by the detector:
//   free space:  omega / (4 pi^2)
//   half space:  omega / (4 pi^2) * (1 - sinc(omega L)), Dirichlet mirror.
// A Taylor branch covers omega*L < 1e-4 where 1 - sinc cancels badly.
double spectral_density(const Geometry& geom, const PhysicalParams& p, double omega);

// Homogeneous response of the damped detector, used as a Green's function:
//   G(lag) = exp(-gamma lag) sin(omega_damped lag) / omega_damped, lag >= 0.
struct DampedOscillatorKernel {
    double gamma = 0.0;
    double omega_damped = 0.0;
};

double detector_green(const DampedOscillatorKernel& k, double lag);

// Stationary two-point kernels of the free field coupled through I(omega):
//   dissipation mu(tau)  = lambda^2 int_0^Lambda I(w) sin(w tau) dw
//   noise       nu(tau)  = lambda^2 int_0^Lambda I(w) cos(w tau) dw
//   damping     g(tau)   = lambda^2/M int_0^Lambda I(w)/w cos(w tau) dw
// with mu = -M dg/dtau. All three evaluate in closed form (Si for the
// mirror part of the damping kernel).
class KernelSet {
  public:
    KernelSet(const PhysicalParams& p, const Geometry& geom);

    double mu(double tau) const;
    double nu(double tau) const;
    double damping(double tau) const;

    const PhysicalParams& params() const { return params_; }
    const Geometry& geometry() const { return geom_; }

  private:
    PhysicalParams params_;
    Geometry geom_;
    double c_;  // lambda^2 / (4 pi^2)
};

inline KernelSet make_kernels(const PhysicalParams& p, const Geometry& geom) {
    return KernelSet(p, geom);
}

// Fluctuation-dissipation check: max over the grid of
//   | lambda^2 I(w) - (2/pi) w M Re gamma_hat(w) |
// where Re gamma_hat is the cosine transform of the damping kernel, computed
// by quadrature on a finite window plus closed-form Si/Ci tails.
double fdt_residual(const PhysicalParams& p, const Geometry& geom,
                    const std::vector<double>& omega_grid, bool parallel = true);

// Default FDT grid: 50 points strictly inside (0, Lambda).
std::vector<double> default_fdt_grid(const PhysicalParams& p, int n = 50);

}  // namespace udw
