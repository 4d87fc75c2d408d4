#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dikin/config.hpp"
#include "dikin/geometry.hpp"
#include "dikin/rng.hpp"
#include "dikin/walk.hpp"

namespace dikin {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitNumeric = 2;
inline constexpr int kExitViolation = 3;

struct CommandOptions {
  std::string config_path;
  std::optional<std::string> out_dir;  // overrides [output] dir
  std::optional<std::uint64_t> seed;   // overrides [walk] seed
  std::vector<std::string> suite;      // diagnose only; empty = config or all
};

int cmd_sample(const CommandOptions& opts, std::ostream& err);
int cmd_diagnose(const CommandOptions& opts, std::ostream& err);
int cmd_dp_erm(const CommandOptions& opts, std::ostream& err);
int cmd_bench(const CommandOptions& opts, std::ostream& err);

/// Lemma ids understood by diagnose, in run order.
const std::vector<std::string>& diagnostic_suite_ids();

/// Polytope used by bench: the box [-1, 1]^d (when m >= 2d) plus random
/// unit-normal facets at distance 1 from the origin.
Polytope bench_polytope(Index m, Index d, Rng& rng);

/// Mean wall-clock nanoseconds per transition of a uniform-target chain,
/// median over `repeats` timed runs of `steps` transitions each.
double measure_ns_per_step(const Polytope& P, const WalkConfig& cfg, std::uint64_t steps,
                           int repeats, Rng& rng);

/// Parses argv and dispatches: dikin <sample|diagnose|dp-erm|bench> [config]
/// [--config PATH] [--out DIR] [--seed N] [--suite ids].
int run_cli(int argc, char** argv);

}  // namespace dikin
