#ifndef QMIRROR_OPTICS_HPP
#define QMIRROR_OPTICS_HPP

// Static-mirror scattering from the bilinear oscillator-field model: complex
// transmission/reflection amplitudes, reflectivity curves and the
// reflective-to-transparent crossover frequency.

#include "qmirror/params.hpp"

namespace qmirror {

struct ScatteringPoint {
    double omega;
    cplx transmission; // T(w)
    cplx reflection;   // R(w)
};

// F(w; w0, Wp) = (w/Wp) [1 - (w/w0)^2]; |T|^2 = F^2/(1+F^2), |R|^2 = 1/(1+F^2).
double f_factor(double omega, double omega0, double omega_p);

// Complex amplitudes, T = 2 m w (w0^2-w^2) / (2 m w (w0^2-w^2) - i lambda^2 c),
// R = T - 1. The denominator never vanishes for real w.
ScatteringPoint scattering(double omega, const PhysicalParams& p);

struct CrossoverResult {
    std::vector<double> roots; // every positive root of F^2 = 1, ascending
    double omega_star;         // the documented crossover (largest root)
};

// Roots of F^2(w) = 1 located by geometric grid scan plus bisection to
// relative 1e-10. scan_max <= 0 picks a bound that covers the Wp^(1/3)
// branch. Throws PhysicsError if no bracket is found.
CrossoverResult crossover_frequency(const PhysicalParams& p, double scan_max = 0.0);

std::vector<ScatteringPoint> spectral_scan(const GridSpec& grid, const PhysicalParams& p);

} // namespace qmirror

#endif
