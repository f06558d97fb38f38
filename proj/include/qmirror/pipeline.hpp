#ifndef QMIRROR_PIPELINE_HPP
#define QMIRROR_PIPELINE_HPP

// Builds the full kernel chain for one configuration: bath spectra ->
// susceptibility -> driven correlator -> pair density -> mirror kernels ->
// master-equation coefficients. Everything downstream of the Config is
// deterministic and immutable once built.

#include "qmirror/wigner.hpp"

namespace qmirror {

struct PipelineOptions {
    bool fdr_audit = true;          // time-domain-route audit spectra
    bool with_impulse = true;       // wide-band impulse response + causality audit
    bool check_convergence = false; // rebuild at N/2 and compare (throws > 1%)
    double trace_horizon = 0;       // <= 0 selects min(50/Omega, table horizon)
};

struct Pipeline {
    Config cfg;
    DerivedScales scales;
    KernelPair plus, minus;
    Susceptibility susc;
    ImpulseResponse impulse;
    SpectralTable ctilde;
    PairDensity pd;
    MirrorKernels mirror;
    CoefficientTrace trace;
};

Pipeline build_pipeline(const Config& cfg, const PipelineOptions& opt = {});

// Shift of the mirror noise spectrum between two resolutions on the
// resolved window below the idf resonance, relative to the spectral peak
// (the quadrature-convergence measure).
double mirror_convergence_shift(const MirrorKernels& fine, const MirrorKernels& coarse,
                                double idf_frequency);

} // namespace qmirror

#endif
