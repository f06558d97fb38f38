#ifndef QMIRROR_COMMON_HPP
#define QMIRROR_COMMON_HPP

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace qmirror {

using cplx = std::complex<double>;
inline constexpr double pi = 3.14159265358979323846;

// Configuration / validation failures; the message names the offending field.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Physics-level failures (resonance on grid, non-convergence, stability bound
// violations). Exit code 1 at the CLI.
struct PhysicsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Sampled complex-valued function of frequency on a symmetric grid.
struct SpectralTable {
    std::vector<double> omega;
    std::vector<cplx> value;

    std::size_t size() const { return omega.size(); }
};

// coth(x) without cancellation near 0 and without overflow for large |x|.
inline double coth(double x) {
    if (x == 0.0) throw PhysicsError("coth evaluated at 0");
    double ax = std::abs(x);
    if (ax < 1e-4) return 1.0 / x + x / 3.0 - x * x * x / 45.0;
    if (ax > 19.0) return x > 0 ? 1.0 : -1.0;
    return 1.0 / std::tanh(x);
}

inline double sgn(double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }

} // namespace qmirror

#endif
