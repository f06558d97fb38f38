#include "qmirror/filon.hpp"

#include <cmath>

namespace qmirror {

namespace {

// E(theta) = int_0^1 e^{i theta s} ds = e^{i theta/2} sinc(theta/2); stable
// for any theta.
cplx moment_e(double theta) {
    double h = 0.5 * theta;
    double s = (std::abs(h) < 1e-8) ? 1.0 - h * h / 6.0 : std::sin(h) / h;
    return std::polar(s, h);
}

} // namespace

void filon_interval_weights(double theta, cplx& a, cplx& b) {
    const cplx e = moment_e(theta);
    if (std::abs(theta) < 0.5) {
        // B = sum_n (i theta)^n / (n! (n+2))
        cplx term(0.5, 0.0), sum = term;
        const cplx it(0.0, theta);
        for (int n = 1; n <= 24; ++n) {
            term *= it * (double(n) + 1.0) / (double(n) * (double(n) + 2.0));
            sum += term;
            if (std::abs(term) < 1e-20) break;
        }
        b = sum;
    } else {
        b = (std::polar(1.0, theta) - e) / cplx(0.0, theta);
    }
    a = e - b;
}

template <typename T>
static cplx filon_integral_impl(std::span<const double> x, std::span<const T> f, double w) {
    const std::size_t n = x.size();
    if (n < 2) return {0.0, 0.0};
    const double h = x[1] - x[0];
    cplx a, b;
    filon_interval_weights(w * h, a, b);
    // sum_k e^{i w x_k} (f_k a + f_{k+1} b); accumulate the phase by
    // recurrence, re-anchoring periodically to keep it exact.
    cplx acc(0.0, 0.0);
    const cplx rot = std::polar(1.0, w * h);
    cplx phase = std::polar(1.0, w * x[0]);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if ((k & 1023u) == 1023u) phase = std::polar(1.0, w * x[k]);
        acc += phase * (cplx(f[k]) * a + cplx(f[k + 1]) * b);
        phase *= rot;
    }
    return acc * h;
}

cplx filon_integral(std::span<const double> x, std::span<const cplx> f, double w) {
    return filon_integral_impl(x, f, w);
}
cplx filon_integral(std::span<const double> x, std::span<const double> f, double w) {
    return filon_integral_impl(x, f, w);
}

std::vector<cplx> oscillatory_transform_serial(std::span<const double> x,
                                               std::span<const cplx> f,
                                               std::span<const double> y,
                                               int sign, cplx prefactor) {
    std::vector<cplx> out(y.size());
    for (std::size_t j = 0; j < y.size(); ++j)
        out[j] = prefactor * filon_integral(x, f, sign * y[j]);
    return out;
}

std::vector<cplx> oscillatory_transform(std::span<const double> x,
                                        std::span<const cplx> f,
                                        std::span<const double> y,
                                        int sign, cplx prefactor) {
    std::vector<cplx> out(y.size());
    const std::int64_t m = static_cast<std::int64_t>(y.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t j = 0; j < m; ++j)
        out[j] = prefactor * filon_integral(x, f, sign * y[j]);
    return out;
}

template <typename T>
static cplx filon_simpson_impl(std::span<const double> x, std::span<const T> f, double w) {
    const std::size_t n = x.size();
    if (n < 3) return filon_integral_impl(x, f, w);
    if (n % 2 == 0)
        throw std::invalid_argument("filon_integral_simpson: node count must be odd");
    const double h = x[1] - x[0];
    const double theta = w * h;

    // Moments of 1, s, s^2 against e^{i theta s} over s in [-1, 1].
    double j0, j1, j2;
    if (std::abs(theta) < 0.4) {
        const double t2 = theta * theta;
        j0 = 1.0 - t2 / 6.0 * (1.0 - t2 / 20.0 * (1.0 - t2 / 42.0 * (1.0 - t2 / 72.0)));
        j1 = theta / 3.0 * (1.0 - t2 / 10.0 * (1.0 - t2 / 28.0 * (1.0 - t2 / 54.0)));
        j2 = 1.0 / 3.0 - t2 / 10.0 + t2 * t2 / 168.0 - t2 * t2 * t2 / 6480.0;
    } else {
        const double s = std::sin(theta), c = std::cos(theta);
        j0 = s / theta;
        j1 = (s - theta * c) / (theta * theta);
        j2 = ((theta * theta - 2.0) * s + 2.0 * theta * c) / (theta * theta * theta);
    }
    // Weights of the three nodes of each interval pair.
    const cplx wm = cplx(j2, -j1), w0 = cplx(2.0 * (j0 - j2), 0.0), wp = cplx(j2, j1);

    cplx acc(0.0, 0.0);
    for (std::size_t k = 0; k + 2 < n; k += 2) {
        const cplx phase = std::polar(1.0, w * x[k + 1]); // pair midpoint
        acc += phase * (cplx(f[k]) * wm + cplx(f[k + 1]) * w0 + cplx(f[k + 2]) * wp);
    }
    return acc * h;
}

cplx filon_integral_simpson(std::span<const double> x, std::span<const double> f, double w) {
    return filon_simpson_impl(x, f, w);
}

std::vector<cplx> oscillatory_transform_simpson(std::span<const double> x,
                                                std::span<const cplx> f,
                                                std::span<const double> y,
                                                int sign, cplx prefactor) {
    std::vector<cplx> out(y.size());
    const std::int64_t m = static_cast<std::int64_t>(y.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t j = 0; j < m; ++j)
        out[j] = prefactor * filon_simpson_impl(x, f, sign * y[j]);
    return out;
}

double lorentz_smooth(const SpectralTable& tab, bool imag_part, double w, double s) {
    // exact per linear interval; a plain midpoint sum over the smoothing
    // kernel would itself cost ~(h/s)^2 accuracy
    double acc = 0.0;
    const std::size_t n = tab.size();
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double a = tab.omega[k], b = tab.omega[k + 1];
        const double fa = imag_part ? tab.value[k].imag() : tab.value[k].real();
        const double fb = imag_part ? tab.value[k + 1].imag() : tab.value[k + 1].real();
        const double slope = (fb - fa) / (b - a);
        const double ta = std::atan((w - a) / s), tb = std::atan((w - b) / s);
        const double la = std::log((w - a) * (w - a) + s * s);
        const double lb = std::log((w - b) * (w - b) + s * s);
        acc += (fa + slope * (w - a)) * (ta - tb) + slope * s * 0.5 * (lb - la);
    }
    return acc / pi;
}

double gauss_smooth(const SpectralTable& tab, bool imag_part, double w, double s) {
    double acc = 0.0;
    const std::size_t n = tab.size();
    const double inv = 1.0 / (s * std::sqrt(2.0));
    const double pdfn = 1.0 / (s * std::sqrt(2.0 * pi));
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double a = tab.omega[k], b = tab.omega[k + 1];
        // negligible kernel mass more than eight widths away
        if (b < w - 8.0 * s || a > w + 8.0 * s) continue;
        const double fa = imag_part ? tab.value[k].imag() : tab.value[k].real();
        const double fb = imag_part ? tab.value[k + 1].imag() : tab.value[k + 1].real();
        const double slope = (fb - fa) / (b - a);
        const double cdf = 0.5 * (std::erf((b - w) * inv) - std::erf((a - w) * inv));
        const double pdf_a = pdfn * std::exp(-(a - w) * (a - w) / (2.0 * s * s));
        const double pdf_b = pdfn * std::exp(-(b - w) * (b - w) / (2.0 * s * s));
        acc += (fa + slope * (w - a)) * cdf + slope * s * s * (pdf_a - pdf_b);
    }
    return acc;
}

std::vector<cplx> filon_prefix(std::span<const double> x, std::span<const double> f, double w) {
    const std::size_t n = x.size();
    std::vector<cplx> out(n, cplx(0.0, 0.0));
    if (n < 2) return out;
    const double h = x[1] - x[0];
    cplx a, b;
    filon_interval_weights(w * h, a, b);
    cplx acc(0.0, 0.0);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const cplx phase = std::polar(1.0, w * x[k]);
        acc += h * phase * (f[k] * a + f[k + 1] * b);
        out[k + 1] = acc;
    }
    return out;
}

} // namespace qmirror
