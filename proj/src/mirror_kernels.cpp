#include "qmirror/mirror_kernels.hpp"

#include <cmath>
#include "qmirror/filon.hpp"

namespace qmirror {

namespace {

// (+) spectra by formula; x runs over differences w - w', which reach past
// the tabulated band, where the band-limited spectrum vanishes. The only
// special point is x = 0, where z(x) x has the finite thermal limit
// 2 k_B T / hbar.
struct BathEval {
    double c, lam2, w_ir, w_hi, dos_exp, w0;
    const PhysicalParams* phys;

    double dos(double x) const {
        return dos_exp == 0.0 ? 1.0 : std::pow(std::abs(x) / w0, dos_exp);
    }
    cplx nu_plus(double x) const {
        if (std::abs(x) > w_hi) return {0.0, 0.0};
        if (x == 0.0)
            return {phys->temperature > 0 ? phys->boltzmann * phys->temperature /
                                                (2.0 * phys->hbar * c) * dos(x)
                                          : 0.0,
                    0.0};
        return {thermal_factor(x, *phys) * x / (4.0 * c) * dos(x), 0.0};
    }
    cplx mu_plus(double x) const {
        if (std::abs(x) > w_hi) return {0.0, 0.0};
        return {0.0, -x / (4.0 * c) * dos(x)};
    }
};

} // namespace

PairDensity pair_density(const Susceptibility& susc, const KernelPair& plus,
                         const KernelPair& minus, const Config& cfg) {
    const auto& p = cfg.phys;
    const auto& w = susc.omega;
    const std::size_t n = w.size();
    if (plus.nu.size() != n || minus.nu.size() != n)
        throw PhysicsError("pair_density: inputs tabulated on different grids");

    PairDensity pd;
    pd.omega = w;
    pd.n.assign(n * n, 0.0);
    pd.m.assign(n * n, 0.0);
    pd.prefactor = 2.0 * p.light_speed * p.light_speed * p.coupling * p.coupling /
                   (p.idf_mass * p.idf_mass);

    BathEval bath{p.light_speed, p.coupling * p.coupling, ir_scale(cfg),
                  cfg.grid.freq_cutoff, cfg.density_exponent, p.idf_frequency, &p};

    // G(w') G(-w'): real and positive up to round-off; the residue is kept.
    std::vector<cplx> gg(n);
    double leak = 0.0, ggmax = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        gg[j] = susc.g[j] * susc.g[n - 1 - j];
        leak = std::max(leak, std::abs(gg[j].imag()));
        ggmax = std::max(ggmax, std::abs(gg[j]));
    }
    pd.imag_leakage = ggmax > 0 ? leak / ggmax : 0.0;

    const std::int64_t ni = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < ni; ++i) {
        const double wi = w[i];
        for (std::size_t j = 0; j < n; ++j) {
            const cplx nm = minus.nu.value[j];
            const cplx mm = minus.mu.value[j];
            if (nm == cplx(0.0, 0.0) && mm == cplx(0.0, 0.0)) continue;
            const double x = wi - w[j];
            const cplx np = bath.nu_plus(x);
            const cplx mp = bath.mu_plus(x);
            if (np == cplx(0.0, 0.0) && mp == cplx(0.0, 0.0)) continue;
            const cplx g2 = gg[j];
            const cplx nval = pd.prefactor * (np * nm - mp * mm) * g2;
            const cplx mval = cplx(0.0, -1.0) * pd.prefactor * (mp * nm + np * mm) * g2;
            pd.n[i * n + j] = nval.real();
            pd.m[i * n + j] = mval.real();
        }
    }

    // n(w,w') = -z(w) m(w,w') is the identity behind the mirror FDR.
    double res = 0.0, nmax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double z = thermal_factor(w[i], p);
        for (std::size_t j = 0; j < n; ++j) {
            res = std::max(res, std::abs(pd.n[i * n + j] + z * pd.m[i * n + j]));
            nmax = std::max(nmax, std::abs(pd.n[i * n + j]));
        }
    }
    pd.identity_residual = nmax > 0 ? res / nmax : 0.0;
    return pd;
}

MirrorKernels mirror_spectra(const PairDensity& pd, const Config& cfg) {
    (void)cfg;
    const std::size_t n = pd.omega.size();
    MirrorKernels mk;
    mk.pair.bath = "mirror";
    mk.pair.nu.omega = pd.omega;
    mk.pair.mu.omega = pd.omega;
    mk.pair.nu.value.resize(n);
    mk.pair.mu.value.resize(n);
    mk.pair.support_min = 0.0;
    mk.pair.support_max = std::abs(pd.omega.back());
    mk.pair.prefactor_derived = pd.prefactor;
    mk.pair.prefactor_paper_ratio = 1.0;

    const double dw = pd.omega[1] - pd.omega[0];
    const double weight = dw / (2.0 * pi);
    const std::int64_t ni = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < ni; ++i) {
        double ns = 0.0, ms = 0.0;
        const double* nrow = &pd.n[i * n];
        const double* mrow = &pd.m[i * n];
        for (std::size_t j = 0; j < n; ++j) {
            ns += nrow[j];
            ms += mrow[j];
        }
        mk.pair.nu.value[i] = cplx(ns * weight, 0.0);
        mk.pair.mu.value[i] = cplx(0.0, ms * weight);
    }
    return mk;
}

void mirror_time_kernels(MirrorKernels& mk, const Config& cfg) {
    auto& k = mk.pair;
    k.t = cfg.grid.time_grid();
    const cplx pref(1.0 / (2.0 * pi), 0.0);
    const auto nu_t = oscillatory_transform(k.nu.omega, k.nu.value, k.t, -1, pref);
    const auto mu_t = oscillatory_transform(k.mu.omega, k.mu.value, k.t, -1, pref);
    k.nu_t.resize(k.t.size());
    k.mu_t.resize(k.t.size());
    double peak = 0.0, leakage = 0.0;
    for (std::size_t i = 0; i < k.t.size(); ++i) {
        k.nu_t[i] = nu_t[i].real();
        k.mu_t[i] = mu_t[i].real();
        peak = std::max({peak, std::abs(k.nu_t[i]), std::abs(k.mu_t[i])});
        leakage = std::max({leakage, std::abs(nu_t[i].imag()), std::abs(mu_t[i].imag())});
    }
    k.parity_residual = peak > 0 ? leakage / peak : 0.0;
}

void mirror_fdr_audit(MirrorKernels& mk, const KernelPair& plus,
                      const SpectralTable& ctilde, const Config& cfg) {
    const auto& p = cfg.phys;
    const auto& w = mk.pair.nu.omega;
    const std::size_t n = w.size();

    mk.nu_td.omega = w;
    mk.mu_td.omega = w;
    mk.nu_td.value.assign(n, cplx(0, 0));
    mk.mu_td.value.assign(n, cplx(0, 0));
    mk.fdr_residual.assign(n, 0.0);

    if (p.coupling == 0.0) { // decoupled limit: everything is identically zero
        mk.fdr_residual_max = 0.0;
        mk.route_rms = 0.0;
        return;
    }

    // The comparison is made on Gaussian-smoothed spectra: the e^{-t^2/2T^2}
    // window kills the slowly decaying tails of the band-limited time
    // kernels, and its frequency kernel is exponentially local, so the odd
    // dissipation spectrum is not polluted across w = 0. The audit window
    // stays below the idf resonance, which is always narrower than the grid
    // step in the dynamically stable regime.
    const double band = std::abs(w.back());
    const double s_w = 0.005 * band;       // smoothing width in frequency
    const double t_w = 1.0 / s_w;          // matching Gaussian time window
    const double window = std::min(0.5 * band, 0.9 * p.idf_frequency);
    const double w_min = 4.0 * s_w;        // keep clear of the parity point
    const double t_max = 6.5 * t_w;
    const double dt = 0.015 * (8.0 / band);
    std::size_t nt = static_cast<std::size_t>(t_max / dt) + 1;
    if (nt % 2 == 0) ++nt; // Simpson wants an odd node count
    std::vector<double> t(nt);
    for (std::size_t i = 0; i < nt; ++i) t[i] = i * dt;

    const cplx inv_pref(1.0 / (2.0 * pi), 0.0);
    const auto cq = oscillatory_transform(ctilde.omega, ctilde.value, t, -1, inv_pref);
    const auto np_t = oscillatory_transform(plus.nu.omega, plus.nu.value, t, -1, inv_pref);
    const auto mp_t = oscillatory_transform(plus.mu.omega, plus.mu.value, t, -1, inv_pref);

    const double pref_td =
        2.0 * p.light_speed * p.light_speed * p.coupling * p.coupling / p.hbar;
    std::vector<double> nu_prod(nt), mu_prod(nt);
    for (std::size_t i = 0; i < nt; ++i) {
        const double damp = std::exp(-0.5 * t[i] * t[i] / (t_w * t_w));
        const double re_c = cq[i].real(), im_c = cq[i].imag();
        const double np = np_t[i].real(), mp = mp_t[i].real();
        nu_prod[i] = damp * pref_td * (np * re_c - mp * im_c);
        mu_prod[i] = damp * pref_td * (np * im_c + mp * re_c);
    }

    const std::int64_t ni = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < ni; ++i) {
        if (std::abs(w[i]) > window || std::abs(w[i]) < w_min) continue;
        // even/odd extension: 2 Re / 2i Im of the one-sided damped transform
        const cplx fn = filon_integral_simpson(t, nu_prod, w[i]);
        const cplx fm = filon_integral_simpson(t, mu_prod, w[i]);
        mk.nu_td.value[i] = cplx(2.0 * fn.real(), 0.0);
        mk.mu_td.value[i] = cplx(0.0, 2.0 * fm.imag());
    }

    double numax = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        if (std::abs(w[i]) <= window)
            numax = std::max(numax, std::abs(mk.pair.nu.value[i]));

    double res_max = 0.0, rms_num = 0.0, rms_den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(w[i]) > window || std::abs(w[i]) < w_min) continue;
        const double z = thermal_factor(w[i], p);
        const double nu_sp = gauss_smooth(mk.pair.nu, false, w[i], s_w);
        const cplx res = cplx(nu_sp, 0.0) - cplx(0.0, 1.0) * z * mk.mu_td.value[i];
        const double r = numax > 0 ? std::abs(res) / numax : 0.0;
        mk.fdr_residual[i] = r;
        res_max = std::max(res_max, r);
        const double d = nu_sp - mk.nu_td.value[i].real();
        rms_num += d * d;
        rms_den += nu_sp * nu_sp;
    }
    mk.fdr_residual_max = res_max;
    mk.route_rms = rms_den > 0 ? std::sqrt(rms_num / rms_den) : 0.0;
}

} // namespace qmirror
