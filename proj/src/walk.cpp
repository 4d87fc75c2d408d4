#include "dikin/walk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "dikin/error.hpp"

namespace dikin {

std::string to_string(AcceptanceVariant v) {
  return v == AcceptanceVariant::ExactMH ? "exact" : "literal";
}

AcceptanceVariant parse_variant(const std::string& name) {
  if (name == "exact" || name == "ExactMH") return AcceptanceVariant::ExactMH;
  if (name == "literal" || name == "PaperLiteral") return AcceptanceVariant::PaperLiteral;
  throw Error(ErrorCode::InvalidArgument, "unknown acceptance variant '" + name + "'");
}

std::string to_string(StepKind k) {
  switch (k) {
    case StepKind::Accepted: return "Accepted";
    case StepKind::RejectedOutside: return "RejectedOutside";
    case StepKind::RejectedMH: return "RejectedMH";
    case StepKind::RejectedLazy: return "RejectedLazy";
  }
  return "Unknown";
}

void WalkConstants::validate() const {
  for (double c : {c_alpha, c_eta, c_T}) {
    if (!(c > 0.0) || !std::isfinite(c)) {
      throw Error(ErrorCode::InvalidArgument, "walk constants must be positive and finite");
    }
  }
}

void WalkConfig::validate() const {
  params.validate();
  constants.validate();
  if (!(laziness > 0.0 && laziness <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "laziness must lie in (0, 1]");
  }
}

SoftThresholdParams default_hyperparameters(Index d, const SmoothnessClass& cls,
                                            const WalkConstants& constants) {
  if (d < 1) throw Error(ErrorCode::InvalidArgument, "dimension must be >= 1");
  constants.validate();
  validate(cls);
  const double dd = static_cast<double>(d);
  const double curvature = std::visit(
      [](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, Lipschitz>) {
          return c.L * c.L;
        } else if constexpr (std::is_same_v<T, Smooth>) {
          return c.beta;
        } else {
          return std::max(c.L * c.L, c.beta);
        }
      },
      cls);
  return {1.0 / (constants.c_alpha * dd), constants.c_eta * dd * curvature};
}

std::uint64_t step_count(Index m, const SoftThresholdParams& params, double R, double warmness,
                         double delta, double c_T) {
  params.validate();
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "m must be >= 1");
  if (!(R > 0.0)) throw Error(ErrorCode::InvalidArgument, "R must be positive");
  if (!(warmness >= 1.0)) throw Error(ErrorCode::InvalidArgument, "warmness must be >= 1");
  if (!(delta > 0.0 && delta < 1.0)) throw Error(ErrorCode::InvalidArgument, "delta must lie in (0, 1)");
  if (!(c_T > 0.0)) throw Error(ErrorCode::InvalidArgument, "c_T must be positive");
  const double rate = 2.0 * static_cast<double>(m) / params.alpha + params.eta_inv * R * R;
  const double value = std::ceil(c_T * rate * std::log(warmness / delta));
  // 2^64 is exactly representable; anything at or above it does not fit.
  if (!std::isfinite(value) || value >= 0x1.0p64) {
    throw Error(ErrorCode::Overflow, "step count exceeds 64-bit range");
  }
  return static_cast<std::uint64_t>(value);
}

Warmness warmness_bound(Index d, double R, double r, double M) {
  if (!(r > 0.0) || !(R >= r)) throw Error(ErrorCode::InvalidArgument, "need R >= r > 0");
  if (!(M >= 0.0)) throw Error(ErrorCode::InvalidArgument, "M must be nonnegative");
  const double w = std::exp(static_cast<double>(d) * std::log(R / r) + M);
  return {w, std::isinf(w)};
}

Vector warm_start_uniform_ball(const InnerBall& ball, const Polytope& P, Rng& rng) {
  const Index d = ball.center.size();
  if (ball.radius == 0.0) return ball.center;
  for (;;) {
    Vector dir = rng.normal_vector(d);
    const double n = dir.norm();
    if (n == 0.0) continue;
    const double rho = ball.radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(d));
    Vector x = ball.center + (rho / n) * dir;
    if (contains_interior(P, x)) return x;
  }
}

ChainState make_state(const Polytope& P, const TargetSpec& target, const SoftThresholdParams& params,
                      const Vector& theta) {
  if (!contains_interior(P, theta)) throw Error(ErrorCode::InvalidStart, "start point is not interior");
  ChainState state{barrier_at(P, theta, params), target(theta), 0};
  if (!std::isfinite(state.f_value)) throw Error(ErrorCode::InvalidStart, "f is not finite at start");
  return state;
}

double acceptance_log_ratio(const ChainState& state, const BarrierAt& z_at, double f_z,
                            AcceptanceVariant variant) {
  const Vector diff = z_at.theta() - state.theta();
  const double fwd = local_norm(state.at, diff);  // |z - theta|_{Phi(theta)}
  const double bwd = local_norm(z_at, diff);      // |theta - z|_{Phi(z)}
  const double norm_weight = variant == AcceptanceVariant::ExactMH ? 0.5 : 1.0;
  return (state.f_value - f_z) + 0.5 * (z_at.log_det_Phi() - state.at.log_det_Phi()) +
         norm_weight * (fwd * fwd - bwd * bwd);
}

StepOutcome step_from_draws(ChainState& state, const Polytope& P, const TargetSpec& target,
                            const WalkConfig& cfg, const Vector& xi, double u) {
  StepOutcome out{StepKind::RejectedOutside, proposal_from_noise(state.at, xi), std::nullopt};
  if (!contains_interior(P, out.proposal)) return out;

  BarrierAt z_at = barrier_at(P, out.proposal, cfg.params);
  const double f_z = target(out.proposal);
  if (std::isnan(f_z)) throw Error(ErrorCode::InvalidArgument, "target returned NaN");
  const double log_ratio = acceptance_log_ratio(state, z_at, f_z, cfg.variant);
  out.log_ratio = log_ratio;
  const double accept_prob = cfg.laziness * std::min(1.0, std::exp(log_ratio));
  if (u < accept_prob) {
    state.at = std::move(z_at);
    state.f_value = f_z;
    ++state.step_index;
    out.kind = StepKind::Accepted;
  } else {
    out.kind = u >= cfg.laziness ? StepKind::RejectedLazy : StepKind::RejectedMH;
  }
  return out;
}

StepOutcome step(ChainState& state, const Polytope& P, const TargetSpec& target,
                 const WalkConfig& cfg, Rng& rng) {
  const Vector xi = rng.normal_vector(state.at.d());
  const Vector z = proposal_from_noise(state.at, xi);
  if (!contains_interior(P, z)) return {StepKind::RejectedOutside, z, std::nullopt};
  return step_from_draws(state, P, target, cfg, xi, rng.uniform());
}

RunReport run_chain(const Vector& theta0, const TargetSpec& target, const Polytope& P,
                    const WalkConfig& cfg, std::uint64_t thin, Rng& rng) {
  cfg.validate();
  if (thin < 1) throw Error(ErrorCode::InvalidArgument, "thin must be >= 1");
  ChainState state = make_state(P, target, cfg.params, theta0);

  const Index d = P.d();
  const std::uint64_t kept = 1 + cfg.steps / thin;
  std::vector<double> buffer;
  buffer.reserve(static_cast<std::size_t>(kept * static_cast<std::uint64_t>(d)));
  auto record = [&](const Vector& x) { buffer.insert(buffer.end(), x.data(), x.data() + d); };
  record(state.theta());

  RunReport report;
  report.steps = cfg.steps;
  report.thin = thin;
  report.config = cfg;
  double accept_sum = 0.0, norm_sum = 0.0;
  for (std::uint64_t i = 1; i <= cfg.steps; ++i) {
    const Vector theta = state.theta();
    StepOutcome out = step(state, P, target, cfg, rng);
    const Vector delta = out.proposal - theta;
    const double len = delta.norm();
    norm_sum += len;
    report.step_norms.max = std::max(report.step_norms.max, len);
    switch (out.kind) {
      case StepKind::Accepted:
        ++report.accepted;
        break;
      case StepKind::RejectedOutside:
        ++report.rejected_outside;
        break;
      case StepKind::RejectedMH:
        ++report.rejected_mh;
        break;
      case StepKind::RejectedLazy:
        ++report.rejected_lazy;
        break;
    }
    if (out.log_ratio) accept_sum += cfg.laziness * std::min(1.0, std::exp(*out.log_ratio));
    if (i % thin == 0) record(state.theta());
  }
  if (cfg.steps > 0) {
    const double n = static_cast<double>(cfg.steps);
    report.mean_accept_prob = accept_sum / n;
    report.step_norms.mean = norm_sum / n;
  }
  report.samples = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      buffer.data(), static_cast<Index>(buffer.size()) / d, d);
  return report;
}

}  // namespace dikin
