#include "qmirror/params.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace qmirror {

std::vector<double> GridSpec::omega_grid() const {
    std::vector<double> w(freq_samples);
    const double d = domega();
    for (int j = 0; j < freq_samples; ++j)
        w[j] = (j + 0.5 - freq_samples / 2.0) * d;
    return w;
}

std::vector<double> GridSpec::time_grid() const {
    std::vector<double> t(time_samples);
    const double d = dt();
    for (int i = 0; i < time_samples; ++i) t[i] = i * d;
    return t;
}

DerivedScales derive_scales(const PhysicalParams& p) {
    DerivedScales s;
    s.plasma_frequency = p.light_speed * p.coupling * p.coupling /
                         (2.0 * p.idf_mass * p.idf_frequency * p.idf_frequency);
    s.scaled_coupling_sq = 2.0 * p.light_speed * p.light_speed * p.coupling * p.coupling /
                           p.quantization_length;
    s.thermal_beta = p.temperature > 0
                         ? 1.0 / (p.boltzmann * p.temperature)
                         : std::numeric_limits<double>::infinity();
    s.density_of_states = p.light_speed * p.quantization_length / (2.0 * pi);
    return s;
}

namespace {

struct KeyTable {
    std::map<std::string, double*> d;
    std::map<std::string, int*> i;

    void bind(Config& c) {
        d = {
            {"mirror_mass", &c.phys.mirror_mass},
            {"trap_frequency", &c.phys.trap_frequency},
            {"idf_mass", &c.phys.idf_mass},
            {"idf_frequency", &c.phys.idf_frequency},
            {"coupling", &c.phys.coupling},
            {"light_speed", &c.phys.light_speed},
            {"quantization_length", &c.phys.quantization_length},
            {"temperature", &c.phys.temperature},
            {"hbar", &c.phys.hbar},
            {"boltzmann", &c.phys.boltzmann},
            {"freq_cutoff", &c.grid.freq_cutoff},
            {"time_horizon", &c.grid.time_horizon},
            {"x_min", &c.grid.x_min},
            {"x_max", &c.grid.x_max},
            {"p_min", &c.grid.p_min},
            {"p_max", &c.grid.p_max},
            {"delta_omega1_sq", &c.delta_omega1_sq},
            {"retardation_eta", &c.retardation_eta},
            {"density_exponent", &c.density_exponent},
            {"ir_rolloff", &c.ir_rolloff},
        };
        i = {
            {"freq_samples", &c.grid.freq_samples},
            {"time_samples", &c.grid.time_samples},
            {"nx", &c.grid.nx},
            {"np", &c.grid.np},
        };
    }
};

// Keys that must appear in every config; the remaining keys have defaults.
const char* required_keys[] = {
    "mirror_mass", "trap_frequency", "idf_mass", "idf_frequency", "coupling",
    "light_speed", "quantization_length", "temperature", "hbar", "boltzmann",
    "freq_cutoff", "freq_samples", "time_horizon", "time_samples",
};

void check_positive(double v, const std::string& name) {
    if (!(v > 0.0))
        throw ConfigError(name == "coupling" ? "coupling must be positive"
                                             : name + " must be positive");
}

} // namespace

void validate(const Config& c) {
    const auto& p = c.phys;
    check_positive(p.mirror_mass, "mirror_mass");
    check_positive(p.trap_frequency, "trap_frequency");
    check_positive(p.idf_mass, "idf_mass");
    check_positive(p.idf_frequency, "idf_frequency");
    // coupling = 0 is the decoupled-limit regression configuration; only
    // negative values are rejected.
    if (p.coupling < 0) throw ConfigError("coupling must be positive");
    check_positive(p.light_speed, "light_speed");
    check_positive(p.quantization_length, "quantization_length");
    if (p.temperature < 0) throw ConfigError("temperature must be >= 0");
    check_positive(p.hbar, "hbar");
    check_positive(p.boltzmann, "boltzmann");

    const auto& g = c.grid;
    check_positive(g.freq_cutoff, "freq_cutoff");
    if (c.ir_rolloff <= 0) throw ConfigError("ir_rolloff must be positive");
    if (g.freq_samples <= 0 || g.freq_samples % 2 != 0)
        throw ConfigError("freq_samples (N_omega) must be a positive even number");
    if (g.time_samples < 2) throw ConfigError("time_samples must be >= 2");
    check_positive(g.time_horizon, "time_horizon");
    if (g.nx < 8 || g.np < 8) throw ConfigError("nx/np must be >= 8");
    if (g.x_max <= g.x_min) throw ConfigError("x_max must exceed x_min");
    if (g.p_max <= g.p_min) throw ConfigError("p_max must exceed p_min");

    // Mode spacing must resolve the requested spectral resolution.
    const double mode_spacing = 2.0 * pi * p.light_speed / p.quantization_length;
    if (mode_spacing > g.domega())
        throw ConfigError(
            "quantization_length too small: mode spacing 2 pi c / L = " +
            std::to_string(mode_spacing) + " exceeds the frequency grid step " +
            std::to_string(g.domega()));

    // Time sampling must resolve the band (Nyquist-type consistency).
    if (g.freq_cutoff * g.dt() >= pi)
        throw ConfigError("time_samples too small: freq_cutoff * dt must stay below pi");
}

Config load_config(const std::string& text) {
    Config c; // defaults
    KeyTable keys;
    keys.bind(c);

    std::map<std::string, bool> seen;
    std::vector<std::string> unknown;

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto notspace = line.find_first_not_of(" \t\r");
        if (notspace == std::string::npos) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t\r");
            auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");

        if (auto it = keys.d.find(key); it != keys.d.end()) {
            char* end = nullptr;
            double v = std::strtod(val.c_str(), &end);
            if (end == val.c_str() || *end != '\0')
                throw ConfigError(key + ": cannot parse number '" + val + "'");
            *it->second = v;
        } else if (auto ii = keys.i.find(key); ii != keys.i.end()) {
            char* end = nullptr;
            long v = std::strtol(val.c_str(), &end, 10);
            if (end == val.c_str() || *end != '\0')
                throw ConfigError(key + ": cannot parse integer '" + val + "'");
            *ii->second = static_cast<int>(v);
        } else {
            unknown.push_back(key);
            continue;
        }
        if (seen[key]) throw ConfigError(key + ": duplicate key");
        seen[key] = true;
    }

    if (!unknown.empty()) {
        std::string msg = "unknown keys:";
        for (const auto& k : unknown) msg += " " + k;
        throw ConfigError(msg);
    }
    for (const char* k : required_keys)
        if (!seen[k]) throw ConfigError(std::string("missing key: ") + k);

    validate(c);
    return c;
}

Config load_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return load_config(ss.str());
}

std::string serialize_config(const Config& c) {
    char buf[64];
    auto num = [&buf](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    std::ostringstream out;
    out << "mirror_mass = " << num(c.phys.mirror_mass) << "\n"
        << "trap_frequency = " << num(c.phys.trap_frequency) << "\n"
        << "idf_mass = " << num(c.phys.idf_mass) << "\n"
        << "idf_frequency = " << num(c.phys.idf_frequency) << "\n"
        << "coupling = " << num(c.phys.coupling) << "\n"
        << "light_speed = " << num(c.phys.light_speed) << "\n"
        << "quantization_length = " << num(c.phys.quantization_length) << "\n"
        << "temperature = " << num(c.phys.temperature) << "\n"
        << "hbar = " << num(c.phys.hbar) << "\n"
        << "boltzmann = " << num(c.phys.boltzmann) << "\n"
        << "freq_cutoff = " << num(c.grid.freq_cutoff) << "\n"
        << "freq_samples = " << c.grid.freq_samples << "\n"
        << "time_horizon = " << num(c.grid.time_horizon) << "\n"
        << "time_samples = " << c.grid.time_samples << "\n"
        << "x_min = " << num(c.grid.x_min) << "\n"
        << "x_max = " << num(c.grid.x_max) << "\n"
        << "p_min = " << num(c.grid.p_min) << "\n"
        << "p_max = " << num(c.grid.p_max) << "\n"
        << "nx = " << c.grid.nx << "\n"
        << "np = " << c.grid.np << "\n"
        << "delta_omega1_sq = " << num(c.delta_omega1_sq) << "\n"
        << "retardation_eta = " << num(c.retardation_eta) << "\n"
        << "density_exponent = " << num(c.density_exponent) << "\n"
        << "ir_rolloff = " << num(c.ir_rolloff) << "\n";
    return out.str();
}

} // namespace qmirror
