#ifndef QMIRROR_PARAMS_HPP
#define QMIRROR_PARAMS_HPP

#include <string>
#include <vector>
#include "qmirror/common.hpp"

namespace qmirror {

// Model constants. Natural units (hbar = c = k_B = 1, frequencies in units
// of the internal-oscillator frequency) are the default configuration; all
// fields are fully dimensional if the config says so.
//
// The default coupling sits inside the dynamical-stability window of the
// bilinear model: the infrared field dressing shifts the internal
// oscillator down by roughly c lambda^2 / (2 m w_IR), which must stay
// below w0^2 for the dressed oscillator to remain bound (w_IR is the
// infrared rolloff scale, see ir_rolloff below). Scattering-only use (the
// optics module) is fine at any coupling.
struct PhysicalParams {
    double mirror_mass = 1.0;        // M
    double trap_frequency = 0.25;    // Omega
    double idf_mass = 1.0;           // m
    double idf_frequency = 1.0;      // omega_0
    double coupling = 0.2;           // lambda
    double light_speed = 1.0;        // c
    double quantization_length = 810.0; // L
    double temperature = 0.0;        // T (>= 0), in energy/k_B
    double hbar = 1.0;
    double boltzmann = 1.0;
};

struct DerivedScales {
    double plasma_frequency;   // Omega_p = c lambda^2 / (2 m omega_0^2)
    double scaled_coupling_sq; // lambda_bar^2 = 2 c^2 lambda^2 / L
    double thermal_beta;       // 1/(k_B T); +inf at T = 0
    double density_of_states;  // D = c L / (2 pi)
};

struct GridSpec {
    double freq_cutoff = 8.0; // Lambda
    int freq_samples = 2048;  // N_omega, even
    double time_horizon = 1600.0;
    int time_samples = 32768;
    double x_min = -16.0, x_max = 16.0;
    double p_min = -2.2, p_max = 2.2;
    int nx = 256, np = 256;

    double domega() const { return 2.0 * freq_cutoff / freq_samples; }
    // Symmetric half-offset grid: omega_j = (j + 1/2 - N/2) domega. Never
    // contains omega = 0; -omega_j is the sample N-1-j.
    std::vector<double> omega_grid() const;
    std::vector<double> time_grid() const; // 0 .. time_horizon, N_t samples
    double dt() const { return time_horizon / (time_samples - 1); }
};

struct Config {
    PhysicalParams phys;
    GridSpec grid;
    double delta_omega1_sq = 0.0; // configured constant, never derived here
    double retardation_eta = 0.0; // <= 0 selects the default Lambda * 1e-4
    double density_exponent = 0.0; // (|w|/w0)^s knob on the bath spectra
    // Infrared regulator scale of the (-) bath rolloff; the effective scale
    // is max(ir_rolloff, pi c / L) so it never drops below the first field
    // mode. Must stay a few grid steps wide to be representable.
    double ir_rolloff = 0.06;

    double eta() const {
        return retardation_eta > 0 ? retardation_eta : grid.freq_cutoff * 1e-4;
    }
};

// Parse a flat key = value document. Unknown keys are rejected by name;
// missing keys and invalid values name the offending field.
Config load_config(const std::string& text);
Config load_config_file(const std::string& path);

// Canonical serialization; load_config(serialize_config(c)) reproduces every
// value bit-identically.
std::string serialize_config(const Config& c);

DerivedScales derive_scales(const PhysicalParams& p);

} // namespace qmirror

#endif
