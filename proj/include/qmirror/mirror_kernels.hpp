#ifndef QMIRROR_MIRROR_KERNELS_HPP
#define QMIRROR_MIRROR_KERNELS_HPP

// Stationary noise/dissipation spectra of the mirror from the two-frequency
// pair-creation convolution
//   nu~_M(w) = pref int dw'/2pi [nu~_+(w-w') nu~_-(w') - mu~_+(w-w') mu~_-(w')]
//              G~_q(w') G~_q(-w'),
//   mu~_M(w) = pref int dw'/2pi [mu~_+(w-w') nu~_-(w') + nu~_+(w-w') mu~_-(w')]
//              G~_q(w') G~_q(-w'),
// with pref = 2 c^2 lambda^2 / m^2 = L lambda_bar^2 / m^2. The tables absorb
// the coupling weight lambda_bar^2, so the master-equation prefactors one
// level up carry a bare hbar.
//
// The equivalent pair-density form uses n(w,w') = -pref [z(w-w')z(w')+1]
// mu~_+ mu~_- G G and m(w,w') = -i pref [z(w')+z(w-w')] mu~_+ mu~_- G G;
// the coth addition identity then gives n = -z(w) m pointwise and the FDR
// nu~_M = i z mu~_M. n is nonnegative, and at T = 0 its support for w > 0 is
// exactly 0 < w' < w: each output frequency is fed by photon pairs whose
// frequencies sum to it.

#include "qmirror/idf_response.hpp"

namespace qmirror {

struct PairDensity {
    std::vector<double> omega;  // shared axis for w (rows) and w' (columns)
    std::vector<double> n, m;   // row-major [i * N + j]
    double prefactor = 0;       // 2 c^2 lambda^2 / m^2
    double identity_residual = 0; // max |n + z(w) m| / max |n|
    double imag_leakage = 0;      // imaginary residue of the G(w')G(-w') factor
};

struct MirrorKernels {
    KernelPair pair;                 // bath = "mirror"; spectral + time kernels
    std::vector<double> fdr_residual; // per-sample |nu~_sp - i z mu~_td| / max|nu~_sp|
    double fdr_residual_max = 0;      // max over the audit window |w| <= band/2
    SpectralTable nu_td, mu_td;       // spectra recomputed through the time-domain
                                      // product route (independent quadrature path)
    double route_rms = 0;             // rms(nu_sp - nu_td)/rms(nu_sp) in the window
    bool convergence_checked = false;
    double convergence_shift = 0;     // max in-band shift vs the N/2 grid, rel. peak
};

PairDensity pair_density(const Susceptibility& susc, const KernelPair& plus,
                         const KernelPair& minus, const Config& cfg);

// Quadrature over w' (midpoint on the symmetric half-offset grid).
MirrorKernels mirror_spectra(const PairDensity& pd, const Config& cfg);

// Band-limited inverse transforms onto the lag grid; parity residuals kept.
void mirror_time_kernels(MirrorKernels& mk, const Config& cfg);

// Time-domain product route: nu_M(t) = (2 c^2 lambda^2 / hbar)
// [nu_+(t) Re C_q(t) - mu_+(t) Im C_q(t)] (and the Im/Re swap for mu_M),
// transformed back to frequency with Simpson-order Filon quadrature. Fills
// nu_td/mu_td, the FDR residual profile and the route agreement number.
void mirror_fdr_audit(MirrorKernels& mk, const KernelPair& plus,
                      const SpectralTable& ctilde, const Config& cfg);

} // namespace qmirror

#endif
