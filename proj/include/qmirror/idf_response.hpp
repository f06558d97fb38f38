#ifndef QMIRROR_IDF_RESPONSE_HPP
#define QMIRROR_IDF_RESPONSE_HPP

// The internal oscillator dressed by the (-) bath: retarded susceptibility,
// causal impulse response, free thermal correlators, and the driven two-time
// correlator that feeds the mirror kernels.
//
// The equation of motion carries the memory term (2/m) int_{t0}^{t} ds
// mu_-(t-s) q(s), so the frequency-domain damping is the one-sided
// (retarded) transform of mu_-. For the band-limited, infrared-rolled 1/w
// dissipation spectrum that transform has a closed form (see memory_symbol),
// evaluated at z = w + i eta with eta > 0 and Richardson-extrapolated to the
// real axis. Note chi(w + i0) = mu~_-(w)/2 in the infinite-band limit: the
// naive substitution of the two-sided transform would double the damping and
// break agreement with direct time integration of the equation of motion.

#include <span>
#include "qmirror/env_kernels.hpp"

namespace qmirror {

struct Susceptibility {
    std::vector<double> omega;
    std::vector<cplx> g;         // G~_q(w)
    double eta_used = 0;
    double gamma_ref = 0;        // damping of the analytic reference oscillator
    double min_denominator = 0;  // resonance margin encountered on the grid
    double causality_defect = -1; // filled by impulse_response
};

// Retarded memory symbol K(z) = (2/m) * one-sided FT of mu_-; Im z > 0.
cplx memory_symbol(cplx z, const Config& cfg);

// G~_q on the grid; throws PhysicsError("resonance on grid ...") if the
// denominator gets below 1e-12 w0^2 at a sample.
Susceptibility susceptibility(const Config& cfg);

struct ImpulseResponse {
    std::vector<double> t;  // includes a negative-time window; not zeroed
    std::vector<double> g;  // G_q(t)
    double causality_defect; // max |G(t<0)| / max |G(t>0)|
};

// Inverse transform split as analytic damped-oscillator reference plus a
// band-limited correction, so the t < 0 leakage measures the true causality
// defect instead of band-truncation ringing.
ImpulseResponse impulse_response(Susceptibility& susc, const Config& cfg);

// <q_h(t) q_h(s)> of the undamped thermal oscillator,
// (hbar / 2 m w0) [z(w0) cos(w0 dt) - i sin(w0 dt)].
cplx free_idf_correlator(double dt, const PhysicalParams& p);

// Stationary driven correlator spectrum
//   C~_q(w) = (hbar/m^2) G~_q(w) [nu~_-(w) + i mu~_-(w)] G~_q(-w),
// real and nonnegative; at T = 0 supported on w > 0 only.
SpectralTable driven_correlator_spectrum(const Susceptibility& susc,
                                         const KernelPair& minus,
                                         const Config& cfg);

// C_q(t) = (1/2pi) int C~_q(w) e^{-iwt} dw on an arbitrary lag grid.
std::vector<cplx> correlator_time(const SpectralTable& ctilde,
                                  std::span<const double> t);

} // namespace qmirror

#endif
