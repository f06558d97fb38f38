#include "qmirror/pipeline.hpp"

#include <cmath>

namespace qmirror {

double mirror_convergence_shift(const MirrorKernels& fine, const MirrorKernels& coarse,
                                double idf_frequency) {
    // compare on the resolved window below the idf resonance, matching the
    // fluctuation-dissipation audit
    const auto& w = fine.pair.nu.omega;
    const double band = std::min(0.5 * std::abs(w.back()), 0.9 * idf_frequency);
    double peak = 0.0;
    for (const auto& v : fine.pair.nu.value) peak = std::max(peak, std::abs(v));
    if (peak == 0.0) return 0.0;
    double shift = 0.0;
    const double coarse_lo = coarse.pair.nu.omega.front();
    const double coarse_hi = coarse.pair.nu.omega.back();
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (std::abs(w[i]) > band) continue;
        if (w[i] < coarse_lo || w[i] > coarse_hi) continue;
        const cplx c = interp_spectral(coarse.pair.nu, w[i]);
        shift = std::max(shift, std::abs(fine.pair.nu.value[i] - c) / peak);
    }
    return shift;
}

Pipeline build_pipeline(const Config& cfg, const PipelineOptions& opt) {
    Pipeline pl;
    pl.cfg = cfg;
    pl.scales = derive_scales(cfg.phys);
    pl.plus = plus_bath_spectra(cfg);
    pl.minus = minus_bath_spectra(cfg);
    pl.susc = susceptibility(cfg);
    if (opt.with_impulse) pl.impulse = impulse_response(pl.susc, cfg);
    pl.ctilde = driven_correlator_spectrum(pl.susc, pl.minus, cfg);
    pl.pd = pair_density(pl.susc, pl.plus, pl.minus, cfg);
    pl.mirror = mirror_spectra(pl.pd, cfg);
    mirror_time_kernels(pl.mirror, cfg);
    if (opt.fdr_audit) mirror_fdr_audit(pl.mirror, pl.plus, pl.ctilde, cfg);

    if (opt.check_convergence) {
        Config half = cfg;
        half.grid.freq_samples = cfg.grid.freq_samples / 2;
        if (half.grid.freq_samples >= 64) {
            PipelineOptions sub;
            sub.fdr_audit = false;
            sub.with_impulse = false;
            sub.check_convergence = false;
            sub.trace_horizon = -1; // skip trace in the sub-build
            Pipeline coarse = build_pipeline(half, sub);
            pl.mirror.convergence_checked = true;
            pl.mirror.convergence_shift =
                mirror_convergence_shift(pl.mirror, coarse.mirror, cfg.phys.idf_frequency);
            if (pl.mirror.convergence_shift > 0.01)
                throw PhysicsError(
                    "non-convergence: halving the frequency resolution shifts the "
                    "mirror spectra by " +
                    std::to_string(pl.mirror.convergence_shift) + " of the peak");
        }
    }

    if (opt.trace_horizon >= 0) {
        double horizon = opt.trace_horizon;
        if (horizon == 0)
            horizon = std::min(50.0 / cfg.phys.trap_frequency, pl.mirror.pair.t.back());
        pl.trace = coefficient_traces(pl.mirror, cfg, horizon);
    }
    return pl;
}

} // namespace qmirror
