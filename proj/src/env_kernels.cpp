#include "qmirror/env_kernels.hpp"

#include <cmath>
#include "qmirror/filon.hpp"

namespace qmirror {

double thermal_factor(double omega, const PhysicalParams& p) {
    if (p.temperature <= 0.0) return sgn(omega);
    if (omega == 0.0)
        throw PhysicsError("thermal_factor: w = 0 at T > 0 (grid must exclude the origin)");
    return coth(p.hbar * omega / (2.0 * p.boltzmann * p.temperature));
}

double infrared_edge(const PhysicalParams& p) {
    return pi * p.light_speed / p.quantization_length;
}

double ir_scale(const Config& cfg) {
    return std::max(cfg.ir_rolloff, infrared_edge(cfg.phys));
}

namespace {

double dos_knob(double omega, const Config& cfg) {
    if (cfg.density_exponent == 0.0) return 1.0;
    return std::pow(std::abs(omega) / cfg.phys.idf_frequency, cfg.density_exponent);
}

// Shared tabulation + inverse transform + audit bookkeeping.
KernelPair build_pair(const Config& cfg, Bath bath) {
    const auto& p = cfg.phys;
    const auto w = cfg.grid.omega_grid();
    const double w_ir = ir_scale(cfg);

    KernelPair k;
    k.bath = bath == Bath::Plus ? "plus" : "minus";
    k.nu.omega = w;
    k.mu.omega = w;
    k.nu.value.resize(w.size());
    k.mu.value.resize(w.size());
    k.support_min = w_ir;
    k.support_max = cfg.grid.freq_cutoff;

    const double c = p.light_speed;
    const double lam2 = p.coupling * p.coupling;
    if (bath == Bath::Plus) {
        k.prefactor_derived = 1.0 / (4.0 * c);
        // paper form z w/(4c) vs mode-sum limit z w/(4c^3), per unit L
        k.prefactor_paper_ratio = c * c;
    } else {
        k.prefactor_derived = c * lam2 / 2.0;
        k.prefactor_paper_ratio = c * c; // paper quotes c^3 lambda^2 / 2
    }

    double fdr_max = 0.0, nu_max = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) {
        const double x = w[j];
        const double z = thermal_factor(x, p);
        const double dos = dos_knob(x, cfg);
        cplx nu, mu;
        if (bath == Bath::Plus) {
            nu = cplx(z * x / (4.0 * c) * dos, 0.0);
            mu = cplx(0.0, -x / (4.0 * c) * dos);
        } else {
            const double s = x * x / (x * x + w_ir * w_ir); // infrared rolloff
            nu = cplx(c * lam2 * z * s / (2.0 * x) * dos, 0.0);
            mu = cplx(0.0, -c * lam2 * s / (2.0 * x) * dos);
        }
        k.nu.value[j] = nu;
        k.mu.value[j] = mu;
        const cplx res = nu - cplx(0.0, 1.0) * z * mu;
        fdr_max = std::max(fdr_max, std::abs(res));
        nu_max = std::max(nu_max, std::abs(nu));
    }
    k.fdr_residual_max = nu_max > 0 ? fdr_max / nu_max : 0.0;

    // Band-limited time kernels, f(t) = (1/2pi) int nu~(w) e^{-iwt} dw.
    k.t = cfg.grid.time_grid();
    const cplx pref(1.0 / (2.0 * pi), 0.0);
    const auto nu_t = oscillatory_transform(w, k.nu.value, k.t, -1, pref);
    const auto mu_t = oscillatory_transform(w, k.mu.value, k.t, -1, pref);
    k.nu_t.resize(k.t.size());
    k.mu_t.resize(k.t.size());
    double peak = 0.0, leak = 0.0;
    for (std::size_t i = 0; i < k.t.size(); ++i) {
        k.nu_t[i] = nu_t[i].real();
        k.mu_t[i] = mu_t[i].real();
        peak = std::max({peak, std::abs(k.nu_t[i]), std::abs(k.mu_t[i])});
        leak = std::max({leak, std::abs(nu_t[i].imag()), std::abs(mu_t[i].imag())});
    }
    k.parity_residual = peak > 0 ? leak / peak : 0.0;
    return k;
}

} // namespace

KernelPair plus_bath_spectra(const Config& cfg) { return build_pair(cfg, Bath::Plus); }
KernelPair minus_bath_spectra(const Config& cfg) { return build_pair(cfg, Bath::Minus); }

ModeSumValue mode_sum_kernel(double t, Bath bath, const PhysicalParams& p,
                             int n_modes, double band_max, double ir_rolloff) {
    const double dw = 2.0 * pi * p.light_speed / p.quantization_length;
    if (band_max > 0 && n_modes * dw < band_max)
        throw PhysicsError("mode_sum_kernel: n_modes covers only " +
                           std::to_string(n_modes * dw) + " of the requested band");
    const double c2 = p.light_speed * p.light_speed;
    const double lb2 = derive_scales(p).scaled_coupling_sq;
    double nu = 0.0, mu = 0.0;
    for (int n = 1; n <= n_modes; ++n) {
        const double wn = n * dw;
        if (band_max > 0 && wn > band_max) break;
        const double z = thermal_factor(wn, p);
        if (bath == Bath::Plus) {
            nu += wn / (2.0 * c2) * z * std::cos(wn * t);
            mu -= wn / (2.0 * c2) * std::sin(wn * t);
        } else {
            const double s = ir_rolloff > 0
                                 ? wn * wn / (wn * wn + ir_rolloff * ir_rolloff)
                                 : 1.0;
            nu += lb2 * s / (2.0 * wn) * z * std::cos(wn * t);
            mu -= lb2 * s / 2.0 * std::sin(wn * t) / wn;
        }
    }
    return {nu, mu};
}

} // namespace qmirror
