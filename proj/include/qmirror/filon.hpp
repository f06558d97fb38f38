#ifndef QMIRROR_FILON_HPP
#define QMIRROR_FILON_HPP

// Oscillatory quadrature on uniform grids: the integrand is interpolated
// piecewise-linearly and the e^{i w x} factor is integrated exactly, so the
// error is O(h^2 f'') uniformly in the oscillation frequency. Plain
// trapezoid would pick up an O((w h)^2) penalty, which is fatal for the
// long-time inverse transforms used here.

#include <span>
#include "qmirror/common.hpp"

namespace qmirror {

// Interval weights: integral over [x0,x0+h] of linear interpolant times
// e^{i w x} equals h*e^{i w x0}*(f0*A(theta) + f1*B(theta)), theta = w*h.
void filon_interval_weights(double theta, cplx& a, cplx& b);

// Integral of the piecewise-linear interpolant of f times e^{i w x} over the
// node span [x.front(), x.back()]. Nodes must be uniformly spaced.
cplx filon_integral(std::span<const double> x, std::span<const cplx> f, double w);
cplx filon_integral(std::span<const double> x, std::span<const double> f, double w);

// g(y_j) = prefactor * integral f(x) e^{i sign x y_j} dx, for every y_j.
// OpenMP-parallel over output points; *_serial is the reference used by the
// consistency tests and the benchmark.
std::vector<cplx> oscillatory_transform(std::span<const double> x,
                                        std::span<const cplx> f,
                                        std::span<const double> y,
                                        int sign, cplx prefactor);
std::vector<cplx> oscillatory_transform_serial(std::span<const double> x,
                                               std::span<const cplx> f,
                                               std::span<const double> y,
                                               int sign, cplx prefactor);

// Prefix integrals I_k = integral_{x_0}^{x_k} f(x) e^{i w x} dx, k = 0..n-1.
std::vector<cplx> filon_prefix(std::span<const double> x, std::span<const double> f, double w);

// Quadratic-interpolant (Simpson-order) variants, O(h^4 f'''') uniformly in
// w. Require an odd number of uniformly spaced nodes.
cplx filon_integral_simpson(std::span<const double> x, std::span<const double> f, double w);
std::vector<cplx> oscillatory_transform_simpson(std::span<const double> x,
                                                std::span<const cplx> f,
                                                std::span<const double> y,
                                                int sign, cplx prefactor);

// Smoothing of a piecewise-linear spectral table, exact per interval.
// Lorentzian: (1/pi) int f_lin(u) s du / ((w-u)^2 + s^2)   (e^{-s|t|} window)
// Gaussian:   int f_lin(u) N(u; w, s) du                   (e^{-t^2 s^2/2} window)
double lorentz_smooth(const SpectralTable& tab, bool imag_part, double w, double s);
double gauss_smooth(const SpectralTable& tab, bool imag_part, double w, double s);

} // namespace qmirror

#endif
