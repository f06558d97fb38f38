#include "qmirror/coefficients.hpp"

#include <cmath>
#include "qmirror/filon.hpp"

namespace qmirror {

cplx interp_spectral(const SpectralTable& tab, double w) {
    const std::size_t n = tab.size();
    if (n < 4) throw PhysicsError("interp_spectral: table too small");
    const double w0 = tab.omega.front();
    const double dw = tab.omega[1] - tab.omega[0];
    const double s = (w - w0) / dw;
    if (s < 0.0 || s > double(n - 1))
        throw PhysicsError("interp_spectral: frequency outside the tabulated band");
    std::size_t i1 = static_cast<std::size_t>(std::floor(s));
    if (i1 > 0) --i1;                     // stencil start
    if (i1 + 3 >= n) i1 = n - 4;
    const double u = s - double(i1);      // in [0, 3]
    cplx acc(0.0, 0.0);
    for (int k = 0; k < 4; ++k) {
        double lk = 1.0;
        for (int l = 0; l < 4; ++l)
            if (l != k) lk *= (u - l) / double(k - l);
        acc += lk * tab.value[i1 + k];
    }
    return acc;
}

CoefficientTrace coefficient_traces(const MirrorKernels& mk, const Config& cfg,
                                    double horizon) {
    const auto& k = mk.pair;
    if (k.t.empty()) throw PhysicsError("coefficient_traces: time kernels not built");
    if (horizon > k.t.back() + 1e-12)
        throw PhysicsError("lag-range-exceeded: horizon " + std::to_string(horizon) +
                           " beyond kernel table " + std::to_string(k.t.back()));
    const auto& p = cfg.phys;
    const double W = p.trap_frequency;
    const double hb = p.hbar;
    const double M = p.mirror_mass;

    std::size_t n_keep = k.t.size();
    while (n_keep > 1 && k.t[n_keep - 1] > horizon) --n_keep;

    const auto pre_nu = filon_prefix(k.t, k.nu_t, W);
    const auto pre_mu = filon_prefix(k.t, k.mu_t, W);

    CoefficientTrace tr;
    tr.delta_omega1_sq = cfg.delta_omega1_sq;
    tr.t.assign(k.t.begin(), k.t.begin() + n_keep);
    tr.gamma.resize(n_keep);
    tr.d_pp.resize(n_keep);
    tr.d_xp.resize(n_keep);
    tr.domega2_sq.resize(n_keep);
    tr.omega_ren_sq.resize(n_keep);
    for (std::size_t i = 0; i < n_keep; ++i) {
        tr.d_pp[i] = -hb * pre_nu[i].real();
        tr.d_xp[i] = hb / (M * W) * pre_nu[i].imag();
        tr.gamma[i] = hb / (M * W) * pre_mu[i].imag();
        tr.domega2_sq[i] = -2.0 * hb / M * pre_mu[i].real();
        tr.omega_ren_sq[i] = W * W + tr.delta_omega1_sq + tr.domega2_sq[i];
    }
    tr.stat = stationary_limits(mk, cfg);
    return tr;
}

StationaryValues stationary_limits(const MirrorKernels& mk, const Config& cfg) {
    const auto& p = cfg.phys;
    const double W = p.trap_frequency;
    const cplx nu = interp_spectral(mk.pair.nu, W);
    const cplx mu = interp_spectral(mk.pair.mu, W);
    StationaryValues s;
    s.d_pp_s = -0.5 * p.hbar * nu.real();
    s.d_pp_imag_residue = std::abs(0.5 * p.hbar * nu.imag());
    // -i (hbar / 2 M W) mu~_M(W); mu~_M is purely imaginary up to round-off
    const cplx g = cplx(0.0, -1.0) * (p.hbar / (2.0 * p.mirror_mass * W)) * mu;
    s.gamma_s = g.real();
    s.gamma_imag_residue = std::abs(g.imag());
    return s;
}

double dsgs_residual(const StationaryValues& s, const Config& cfg) {
    const auto& p = cfg.phys;
    const double z = thermal_factor(p.trap_frequency, p);
    if (s.d_pp_s == 0.0) return 0.0; // decoupled limit
    return std::abs(s.d_pp_s - p.mirror_mass * p.trap_frequency * z * s.gamma_s) /
           std::abs(s.d_pp_s);
}

} // namespace qmirror
