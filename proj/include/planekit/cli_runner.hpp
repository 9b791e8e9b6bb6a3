#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace planekit::cli {

/// Exit codes partition outcomes: success, malformed input, mathematical
/// rejection (screen failure, non-quadratic input, indefinite result), and
/// iteration budget exhaustion.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitRejected = 2;
inline constexpr int kExitNoConvergence = 3;

struct RunConfig {
    std::string command;   // synth | check | geom | patch
    std::string method;    // averaging | contraction | algebraic | all
    std::string input_path;
    std::string output_path;
    double tolerance = 1e-10;
    std::uint64_t seed = 0;
    std::optional<std::size_t> closure_limit; // overrides the spec file's cap
    std::size_t dimension = 3;                // for --builtin evaluators
    std::string builtin;                      // quartic | sphere
};

int run_synth(const RunConfig& cfg);
int run_check(const RunConfig& cfg);
int run_geom(const RunConfig& cfg);
int run_patch(const RunConfig& cfg);

/// Dispatch on cfg.command.
int run(const RunConfig& cfg);

} // namespace planekit::cli
