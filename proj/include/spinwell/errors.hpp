// Error types mapped to process exit codes by the CLI:
//   ConfigError     -> 2 (bad config file, bad key, failed validation)
//   NumericalAbort  -> 3 (blow-up guard tripped during time stepping)
// Tolerance failures in check/convergence commands exit 1 without throwing.
#pragma once

#include <stdexcept>
#include <string>

namespace spinwell {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NumericalAbort : std::runtime_error {
    long step;
    double time;
    double norm;
    NumericalAbort(const std::string& msg, long step_, double time_, double norm_)
        : std::runtime_error(msg), step(step_), time(time_), norm(norm_) {}
};

} // namespace spinwell
