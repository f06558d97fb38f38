#include "qmirror/idf_response.hpp"

#include <cmath>
#include "qmirror/filon.hpp"

namespace qmirror {

namespace {

cplx chi_closed_form(cplx z, double w_ir, double w_hi, double c, double lam2) {
    // chi(z) = -(c lam^2 / 2pi) int_0^{w_hi} S(x) dx / (x^2 - z^2) with the
    // infrared rolloff S(x) = x^2/(x^2 + w_ir^2). Partial fractions give
    //   S/(x^2-z^2) = A/(x^2+w_ir^2) + B/(x^2-z^2),
    //   A = w_ir^2/(w_ir^2+z^2), B = z^2/(w_ir^2+z^2),
    // and both pieces integrate in closed form. The retarded branch comes
    // from Im z > 0; for exactly real z the cut limit of atanh is taken
    // analytically, which keeps the response causal to machine precision
    // instead of leaving an O(eta^2) extrapolation floor.
    const double int_a = std::atan(w_hi / w_ir) / w_ir;
    if (std::abs(z) < 1e-12 * w_ir) // static limit: only the A-piece survives
        return -c * lam2 / (2.0 * pi) * int_a;
    const cplx z2 = z * z;
    const cplx denom = w_ir * w_ir + z2;
    const cplx a = w_ir * w_ir / denom;
    const cplx b = z2 / denom;
    cplx atanh_ret;
    if (z.imag() == 0.0) {
        const double w = z.real();
        if (std::abs(w) < w_hi)
            atanh_ret = cplx(0.5 * std::log((w_hi + w) / (w_hi - w)), -0.5 * pi);
        else
            atanh_ret = cplx(std::atanh(w_hi / w), 0.0);
    } else {
        atanh_ret = std::atanh(w_hi / z);
    }
    const cplx int_b = -atanh_ret / z;
    return -c * lam2 / (2.0 * pi) * (a * int_a + b * int_b);
}

cplx chi_numeric(cplx z, double w_ir, double w_hi, double c, double lam2,
                 const Config& cfg) {
    // Density-of-states knob active: no closed form, midpoint quadrature.
    const int n = 65536;
    const double h = w_hi / n;
    cplx sum(0.0, 0.0);
    const cplx z2 = z * z;
    for (int k = 0; k < n; ++k) {
        const double x = (k + 0.5) * h;
        const double s = x * x / (x * x + w_ir * w_ir);
        const double dos = std::pow(x / cfg.phys.idf_frequency, cfg.density_exponent);
        sum += s * dos / (x * x - z2);
    }
    return -c * lam2 / (2.0 * pi) * sum * h;
}

} // namespace

cplx memory_symbol(cplx z, const Config& cfg) {
    const auto& p = cfg.phys;
    const double lam2 = p.coupling * p.coupling;
    if (lam2 == 0.0) return {0.0, 0.0};
    const double w_ir = ir_scale(cfg);
    const double w_hi = cfg.grid.freq_cutoff;
    const cplx chi = cfg.density_exponent == 0.0
                         ? chi_closed_form(z, w_ir, w_hi, p.light_speed, lam2)
                         : chi_numeric(z, w_ir, w_hi, p.light_speed, lam2, cfg);
    return 2.0 / p.idf_mass * chi;
}

Susceptibility susceptibility(const Config& cfg) {
    const auto& p = cfg.phys;
    const double w0 = p.idf_frequency;
    const double eta = cfg.eta();

    // Static dressing by the field modes shifts the oscillator down by
    // (c lambda^2 / pi m) atan(w_hi/w_ir) / w_ir; past w0^2 the dressed
    // frequency turns imaginary and no stationary retarded response exists.
    const double w_ir0 = ir_scale(cfg);
    const double dressing = p.light_speed * p.coupling * p.coupling *
                            std::atan(cfg.grid.freq_cutoff / w_ir0) /
                            (pi * p.idf_mass * w_ir0);
    if (dressing >= w0 * w0)
        throw PhysicsError(
            "internal oscillator statically unstable: the infrared field dressing " +
            std::to_string(dressing) + " exceeds w0^2; reduce the coupling or raise "
            "ir_rolloff");

    Susceptibility s;
    s.omega = cfg.grid.omega_grid();
    s.g.resize(s.omega.size());
    s.eta_used = eta;
    s.gamma_ref = p.light_speed * p.coupling * p.coupling / (4.0 * p.idf_mass * w0 * w0);
    s.min_denominator = std::numeric_limits<double>::max();

    const std::int64_t n = static_cast<std::int64_t>(s.omega.size());
    double min_den = s.min_denominator;
#pragma omp parallel for schedule(static) reduction(min : min_den)
    for (std::int64_t j = 0; j < n; ++j) {
        const double w = s.omega[j];
        // The closed form carries the retarded cut limit exactly; the
        // density-of-states knob has no closed form, so there the branch is
        // enforced at w + i eta with a Richardson step eta -> eta/2.
        cplx k;
        if (cfg.density_exponent == 0.0) {
            k = memory_symbol(cplx(w, 0.0), cfg);
        } else {
            const cplx k1 = memory_symbol(cplx(w, eta), cfg);
            const cplx k2 = memory_symbol(cplx(w, 0.5 * eta), cfg);
            k = 2.0 * k2 - k1;
        }
        const cplx den = cplx(w0 * w0 - w * w, 0.0) + k;
        min_den = std::min(min_den, std::abs(den));
        s.g[j] = 1.0 / den;
    }
    s.min_denominator = min_den;
    if (s.min_denominator < 1e-12 * w0 * w0)
        throw PhysicsError("resonance on grid: |denominator| below 1e-12 w0^2; "
                           "adjust the frequency grid offset (freq_samples or freq_cutoff)");
    return s;
}

ImpulseResponse impulse_response(Susceptibility& susc, const Config& cfg) {
    const auto& p = cfg.phys;
    const double w0 = p.idf_frequency;
    const double gamma = susc.gamma_ref;
    const double wd = std::sqrt(std::max(w0 * w0 - gamma * gamma, 1e-300));

    ImpulseResponse r;
    const double dt = cfg.grid.dt();
    const int n_neg = cfg.grid.time_samples / 8;
    r.t.resize(cfg.grid.time_samples + n_neg);
    for (std::size_t i = 0; i < r.t.size(); ++i)
        r.t[i] = (static_cast<double>(i) - n_neg) * dt;

    // G~_q is split into exactly causal closed-form pieces plus a small
    // remainder whose inverse transform is done numerically:
    //   reference  1/(w0^2 - w^2 - 2 i gamma w)      -> theta(t) e^{-g t} sin(wd t)/wd
    //   tail combo 1/(g-iw)^2 - 1/(2g-iw)^2          -> theta(t) t (e^{-g t} - e^{-2g t})
    // The combo matches the remainder's 1/w^3 asymptotics (the reference's
    // linear-in-w damping is unphysical at large w), leaving an O(w^-4) tail;
    // integrating the remainder over a wide band then keeps the t < 0
    // leakage orders of magnitude below the 1e-6 causality budget.
    auto remainder = [&](double w) -> cplx {
        if (p.coupling == 0.0) return {0.0, 0.0};
        cplx k;
        if (cfg.density_exponent == 0.0) {
            k = memory_symbol(cplx(w, 0.0), cfg);
        } else {
            const cplx k1 = memory_symbol(cplx(w, susc.eta_used), cfg);
            const cplx k2 = memory_symbol(cplx(w, 0.5 * susc.eta_used), cfg);
            k = 2.0 * k2 - k1;
        }
        const cplx g_q = 1.0 / (cplx(w0 * w0 - w * w, 0.0) + k);
        const cplx ref = 1.0 / cplx(w0 * w0 - w * w, -2.0 * gamma * w);
        const cplx a1(gamma, -w), a2(2.0 * gamma, -w);
        const cplx combo = 1.0 / (a1 * a1) - 1.0 / (a2 * a2);
        return g_q - ref - combo;
    };

    r.g.assign(r.t.size(), 0.0);
    std::vector<cplx> corr(r.t.size(), cplx(0.0, 0.0));
    if (p.coupling > 0.0) {
        // piecewise-uniform wide-band grid: the remainder needs the dressed
        // resonance resolved on the gamma scale (the references only match
        // the pole to leading order), moderate resolution across the rest of
        // the band, and a coarse far tail where everything is smooth
        const double band = cfg.grid.freq_cutoff;
        const double w_wide = std::max(25.0 * w0, 3.0 * band);
        const double ghat = std::max(gamma, 1e-4 * w0);
        // graded zones: the residue mismatch of the references decays like
        // gamma/(w - w0), so it needs ~gamma resolution out to hundreds of
        // linewidths
        const double res1_lo = std::max(0.3 * w0, w0 - 30.0 * ghat);
        const double res1_hi = std::min(0.5 * (w0 + band), w0 + 30.0 * ghat);
        const double res2_lo = std::max(0.25 * w0, w0 - 300.0 * ghat);
        const double res2_hi = std::min(0.6 * (w0 + band), w0 + 300.0 * ghat);
        const double w_ir = ir_scale(cfg);
        const double ir_hi = std::min(20.0 * w_ir, 0.5 * res2_lo);

        auto add_segment = [&](double lo, double hi, double target_step) {
            if (hi <= lo) return;
            int n = std::max(2, static_cast<int>(std::ceil((hi - lo) / target_step)));
            if (n % 2 != 0) ++n; // odd node count for the Simpson-order rule
            std::vector<double> xs(n + 1);
            std::vector<cplx> fs(n + 1);
            const double h = (hi - lo) / n;
            for (int k = 0; k <= n; ++k) xs[k] = lo + k * h;
            const std::int64_t m = static_cast<std::int64_t>(xs.size());
#pragma omp parallel for schedule(static)
            for (std::int64_t j = 0; j < m; ++j) fs[j] = remainder(xs[j]);
            const auto part =
                oscillatory_transform_simpson(xs, fs, r.t, -1, cplx(1.0 / (2.0 * pi), 0.0));
            for (std::size_t i = 0; i < corr.size(); ++i) corr[i] += part[i];
        };
        const double d_mid = 0.004 * w0;
        const double d_res1 = ghat / 16.0;
        const double d_res2 = ghat / 3.0;
        const double d_ir = w_ir / 50.0;  // infrared rolloff structure
        const double edge = 0.06 * w0;    // log singularity of Re K at the band edge
        auto half = [&](double sgn) {
            add_segment(sgn > 0 ? ir_hi : -res2_lo, sgn > 0 ? res2_lo : -ir_hi, d_mid);
            add_segment(sgn > 0 ? res2_lo : -res1_lo, sgn > 0 ? res1_lo : -res2_lo, d_res2);
            add_segment(sgn > 0 ? res1_lo : -res1_hi, sgn > 0 ? res1_hi : -res1_lo, d_res1);
            add_segment(sgn > 0 ? res1_hi : -res2_hi, sgn > 0 ? res2_hi : -res1_hi, d_res2);
            add_segment(sgn > 0 ? res2_hi : -(band - edge), sgn > 0 ? band - edge : -res2_hi,
                        d_mid);
            // integrable log singularity of Re K exactly at the band edge:
            // resolve both sides, skip an O(1e-4) sliver around it
            const double dlt = 2e-4 * w0;
            add_segment(sgn > 0 ? band - edge : -(band - dlt),
                        sgn > 0 ? band - dlt : -(band - edge), 0.002 * w0);
            add_segment(sgn > 0 ? band + dlt : -(band + edge),
                        sgn > 0 ? band + edge : -(band + dlt), 0.002 * w0);
            add_segment(sgn > 0 ? band + edge : -w_wide, sgn > 0 ? w_wide : -(band + edge),
                        0.08 * w0);
        };
        half(-1.0);
        add_segment(-ir_hi, ir_hi, d_ir);
        half(+1.0);
    }

    double max_neg = 0.0, max_pos = 0.0;
    for (std::size_t i = 0; i < r.t.size(); ++i) {
        const double t = r.t[i];
        double v = corr[i].real();
        if (t >= 0) {
            v += std::exp(-gamma * t) * std::sin(wd * t) / wd;
            if (p.coupling > 0.0)
                v += t * (std::exp(-gamma * t) - std::exp(-2.0 * gamma * t));
        }
        r.g[i] = v;
        if (t < 0)
            max_neg = std::max(max_neg, std::abs(v));
        else
            max_pos = std::max(max_pos, std::abs(v));
    }
    r.causality_defect = max_pos > 0 ? max_neg / max_pos : 0.0;
    susc.causality_defect = r.causality_defect;
    return r;
}

cplx free_idf_correlator(double dt, const PhysicalParams& p) {
    const double w0 = p.idf_frequency;
    const double z = p.temperature > 0 ? coth(p.hbar * w0 / (2.0 * p.boltzmann * p.temperature))
                                       : 1.0;
    const double amp = p.hbar / (2.0 * p.idf_mass * w0);
    return amp * cplx(z * std::cos(w0 * dt), -std::sin(w0 * dt));
}

SpectralTable driven_correlator_spectrum(const Susceptibility& susc,
                                         const KernelPair& minus,
                                         const Config& cfg) {
    if (susc.omega.size() != minus.nu.omega.size())
        throw PhysicsError("driven_correlator_spectrum: grids differ");
    const auto& p = cfg.phys;
    SpectralTable c;
    c.omega = susc.omega;
    c.value.resize(c.omega.size());
    const std::size_t n = c.omega.size();
    const double pref = p.hbar / (p.idf_mass * p.idf_mass);
    for (std::size_t j = 0; j < n; ++j) {
        const cplx g_pos = susc.g[j];
        const cplx g_neg = susc.g[n - 1 - j]; // -w_j is the mirrored sample
        c.value[j] = pref * g_pos * (minus.nu.value[j] + cplx(0.0, 1.0) * minus.mu.value[j]) * g_neg;
    }
    return c;
}

std::vector<cplx> correlator_time(const SpectralTable& ctilde, std::span<const double> t) {
    return oscillatory_transform(ctilde.omega, ctilde.value, t, -1,
                                 cplx(1.0 / (2.0 * pi), 0.0));
}

} // namespace qmirror
