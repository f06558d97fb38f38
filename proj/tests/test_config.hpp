#ifndef QMIRROR_TEST_CONFIG_HPP
#define QMIRROR_TEST_CONFIG_HPP

#include "qmirror/params.hpp"

namespace qmirror::test {

// Reduced grid for the unit suites: a coarser band with a matching (smaller)
// quantization length, a wider infrared rolloff so the coarse grid resolves
// it, and a coupling rescaled to a comparable point of the stability
// window. Acceptance runs the full-size configuration.
inline Config small_config() {
    Config c;
    c.grid.freq_samples = 512;
    c.grid.time_horizon = 400.0;
    c.grid.time_samples = 8192;
    c.phys.quantization_length = 210.0;
    c.phys.coupling = 0.35;
    c.ir_rolloff = 0.12; // four grid cells on the coarse unit-test band
    return c;
}

} // namespace qmirror::test

#endif
