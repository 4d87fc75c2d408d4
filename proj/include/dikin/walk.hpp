#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "dikin/barrier.hpp"
#include "dikin/geometry.hpp"
#include "dikin/rng.hpp"
#include "dikin/targets.hpp"

namespace dikin {

enum class AcceptanceVariant {
  /// log[pi(z) rho_z(theta) / (pi(theta) rho_theta(z))]; exact detailed balance.
  ExactMH,
  /// Same, but the two squared local-norm terms are not halved.
  PaperLiteral,
};

std::string to_string(AcceptanceVariant v);
AcceptanceVariant parse_variant(const std::string& name);

/// Multipliers in alpha = 1/(c_alpha d), eta = 1/(c_eta d L^2) (or
/// 1/(c_eta d beta)) and T = c_T (2 m / alpha + R^2 / eta) log(w / delta).
/// Defaults are the theoretical values; desk-scale runs override them.
struct WalkConstants {
  double c_alpha = 1e5;
  double c_eta = 1e4;
  double c_T = 1e9;

  void validate() const;
};

struct WalkConfig {
  SoftThresholdParams params;
  std::uint64_t steps = 1;
  /// Probability weight in front of min(ratio, 1); 1/2 makes the chain lazy.
  double laziness = 0.5;
  AcceptanceVariant variant = AcceptanceVariant::ExactMH;
  std::uint64_t seed = 0;
  WalkConstants constants;

  void validate() const;
};

/// For LipschitzSmooth the more conservative (smaller) step is taken:
/// eta_inv = c_eta * d * max(L^2, beta).
SoftThresholdParams default_hyperparameters(Index d, const SmoothnessClass& cls,
                                            const WalkConstants& constants = {});

/// ceil(c_T (2 m / alpha + eta_inv R^2) log(w / delta)); throws Overflow when
/// the count does not fit in 64 bits.
std::uint64_t step_count(Index m, const SoftThresholdParams& params, double R, double warmness,
                         double delta, double c_T);

struct Warmness {
  double value;
  bool overflow;  // value is +inf
};

/// exp(d log(R/r) + M) for the uniform-ball warm start.
Warmness warmness_bound(Index d, double R, double r, double M);

/// Uniform draw from the ball; redrawn if rounding lands it on the boundary.
Vector warm_start_uniform_ball(const InnerBall& ball, const Polytope& P, Rng& rng);

struct ChainState {
  BarrierAt at;
  double f_value;
  std::uint64_t step_index = 0;

  const Vector& theta() const noexcept { return at.theta(); }
};

ChainState make_state(const Polytope& P, const TargetSpec& target, const SoftThresholdParams& params,
                      const Vector& theta);

enum class StepKind { Accepted, RejectedOutside, RejectedMH, RejectedLazy };
std::string to_string(StepKind k);

struct StepOutcome {
  StepKind kind;
  Vector proposal;
  std::optional<double> log_ratio;
};

/// Log acceptance ratio for moving from state to z (z_at built at z).
double acceptance_log_ratio(const ChainState& state, const BarrierAt& z_at, double f_z,
                            AcceptanceVariant variant);

/// One transition driven by explicit noise xi ~ N(0, I) and a uniform u in
/// [0, 1). Accepts iff z is interior and u < laziness * min(1, e^ratio).
/// A rejection with u >= laziness is reported as RejectedLazy.
StepOutcome step_from_draws(ChainState& state, const Polytope& P, const TargetSpec& target,
                            const WalkConfig& cfg, const Vector& xi, double u);

StepOutcome step(ChainState& state, const Polytope& P, const TargetSpec& target,
                 const WalkConfig& cfg, Rng& rng);

struct StepNormStats {
  double mean = 0.0;  // mean Euclidean proposal length
  double max = 0.0;
};

struct RunReport {
  Matrix samples;  // one row per retained state, first row is theta0
  std::uint64_t steps = 0;
  std::uint64_t thin = 1;
  std::uint64_t accepted = 0;
  std::uint64_t rejected_outside = 0;
  std::uint64_t rejected_mh = 0;
  std::uint64_t rejected_lazy = 0;
  /// Mean of laziness * min(1, e^ratio) * 1{z interior} over all proposals.
  double mean_accept_prob = 0.0;
  StepNormStats step_norms;
  WalkConfig config;
};

/// Runs cfg.steps transitions from theta0, keeping theta0 and every thin-th
/// state after it. Deterministic in (inputs, rng state).
RunReport run_chain(const Vector& theta0, const TargetSpec& target, const Polytope& P,
                    const WalkConfig& cfg, std::uint64_t thin, Rng& rng);

}  // namespace dikin
