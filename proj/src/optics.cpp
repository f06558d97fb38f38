#include "qmirror/optics.hpp"

#include <algorithm>
#include <cmath>

namespace qmirror {

double f_factor(double omega, double omega0, double omega_p) {
    const double r = omega / omega0;
    return (omega / omega_p) * (1.0 - r * r);
}

ScatteringPoint scattering(double omega, const PhysicalParams& p) {
    const double w0 = p.idf_frequency;
    const double num = 2.0 * p.idf_mass * omega * (w0 * w0 - omega * omega);
    const cplx den(num, -p.coupling * p.coupling * p.light_speed);
    ScatteringPoint s;
    s.omega = omega;
    s.transmission = num / den;
    s.reflection = cplx(0.0, p.coupling * p.coupling * p.light_speed) / den;
    return s;
}

namespace {

double bisect_f2(double lo, double hi, double w0, double wp) {
    auto g = [&](double w) { double f = f_factor(w, w0, wp); return f * f - 1.0; };
    double glo = g(lo);
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        double gm = g(mid);
        if ((gm < 0) == (glo < 0)) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
        if (hi - lo < 1e-10 * mid) break;
    }
    return 0.5 * (lo + hi);
}

} // namespace

CrossoverResult crossover_frequency(const PhysicalParams& p, double scan_max) {
    const double w0 = p.idf_frequency;
    const double wp = derive_scales(p).plasma_frequency;
    if (scan_max <= 0) {
        // Cover both the narrow-band roots near w0 and the transparent-side
        // root, which scales like Wp^(1/3) for Wp >> w0.
        scan_max = 4.0 * std::max({w0, wp, w0 * std::cbrt(wp / w0)});
    }
    const double lo = 1e-3 * w0;
    const int nscan = 4000;
    const double ratio = std::pow(scan_max / lo, 1.0 / nscan);

    CrossoverResult res;
    auto g = [&](double w) { double f = f_factor(w, w0, wp); return f * f - 1.0; };
    double a = lo, ga = g(a);
    for (int i = 1; i <= nscan; ++i) {
        double b = lo * std::pow(ratio, i);
        double gb = g(b);
        if ((ga < 0) != (gb < 0)) res.roots.push_back(bisect_f2(a, b, w0, wp));
        a = b;
        ga = gb;
    }
    if (res.roots.empty())
        throw PhysicsError("crossover_frequency: no F^2 = 1 bracket below " +
                           std::to_string(scan_max));
    std::sort(res.roots.begin(), res.roots.end());
    // The documented crossover is the transparent-side root, above which the
    // mirror stays transmissive; that is always the largest one.
    res.omega_star = res.roots.back();
    return res;
}

std::vector<ScatteringPoint> spectral_scan(const GridSpec& grid, const PhysicalParams& p) {
    const auto w = grid.omega_grid();
    std::vector<ScatteringPoint> out(w.size());
    const std::int64_t n = static_cast<std::int64_t>(w.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t j = 0; j < n; ++j) out[j] = scattering(w[j], p);
    return out;
}

} // namespace qmirror
