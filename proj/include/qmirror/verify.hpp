#ifndef QMIRROR_VERIFY_HPP
#define QMIRROR_VERIFY_HPP

// The physics verification suite behind `qmirror verify`: one entry per
// invariant with the measured residual and its tolerance. Failures are report
// entries, not exceptions.

#include "qmirror/pipeline.hpp"

namespace qmirror {

struct VerifyEntry {
    std::string name;
    double measured;
    double tolerance;
    bool pass;
    std::string note;
};

struct VerifyReport {
    std::vector<VerifyEntry> entries;
    bool all_pass() const {
        for (const auto& e : entries)
            if (!e.pass) return false;
        return true;
    }
};

VerifyReport verify_suite(const Config& cfg);

} // namespace qmirror

#endif
