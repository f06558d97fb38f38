#ifndef QMIRROR_COEFFICIENTS_HPP
#define QMIRROR_COEFFICIENTS_HPP

// Time-dependent master-equation coefficients from the stationary mirror
// kernels with a sharp switch-on at t0, plus their stationary limits from
// spectral evaluation at the trap frequency.
//
// Reported values follow the paper's printed bookkeeping, in which
//   D_PP(t)  = -hbar int_0^T cos(W tau) nu_M(tau) dtau,
//   D_XP(t)  = +(hbar/M W) int_0^T sin(W tau) nu_M(tau) dtau,
//   Gamma(t) = +(hbar/M W) int_0^T sin(W tau) mu_M(tau) dtau,
//   dW2^2(t) = -(2 hbar/M) int_0^T cos(W tau) mu_M(tau) dtau,
// (kernel tables already carry lambda_bar^2) and stationary values
//   D_PP^s = -(hbar/2) nu~_M(W),  Gamma^s = -i (hbar/2MW) mu~_M(W),
// so that D_PP^s = M W z(W) Gamma^s holds exactly through the mirror FDR.
// Both stationary values come out negative: the Wigner generator's diffusion
// term is -hbar D_PP d^2/dp^2, and re-deriving the reduction shows the
// printed Gamma carries the opposite sign relative to the physical drift.
// The physical generator map used by the phase-space stepper is therefore
//   D_p = -hbar D_PP,  gamma_drift = -Gamma,  C = +hbar D_XP,
//   dW2^2_phys = -dW2^2,
// which restores damping (gamma_drift > 0) and heating (D_p > 0) and
// reproduces the equilibrium balance Var(p) -> (hbar M W / 2) z(W).

#include "qmirror/mirror_kernels.hpp"

namespace qmirror {

struct StationaryValues {
    double d_pp_s = 0;  // printed convention, < 0 for physical noise
    double gamma_s = 0; // printed convention, < 0 for physical damping
    double d_pp_imag_residue = 0;
    double gamma_imag_residue = 0;
};

struct CoefficientTrace {
    std::vector<double> t; // elapsed time since switch-on, t - t0
    std::vector<double> gamma, d_pp, d_xp, domega2_sq;
    std::vector<double> omega_ren_sq; // Omega^2 + dW1^2 + dW2^2(t)
    double delta_omega1_sq = 0;
    StationaryValues stat;

    // Physical-generator accessors (see the convention note above).
    double drift_at(std::size_t i) const { return -gamma[i]; }
    double momentum_diffusion_at(double hbar, std::size_t i) const { return -hbar * d_pp[i]; }
};

// Lag integrals over the switch-on window [0, horizon]; the kernel table
// must cover the horizon (lag-range-exceeded otherwise).
CoefficientTrace coefficient_traces(const MirrorKernels& mk, const Config& cfg,
                                    double horizon);

// Spectral values at the trap frequency (local cubic interpolation); throws
// if Omega lies outside the tabulated band.
StationaryValues stationary_limits(const MirrorKernels& mk, const Config& cfg);

// | D_PP^s - M W z(W) Gamma^s | / | D_PP^s |
double dsgs_residual(const StationaryValues& s, const Config& cfg);

// Cubic 4-point interpolation in a uniformly sampled table.
cplx interp_spectral(const SpectralTable& tab, double w);

} // namespace qmirror

#endif
