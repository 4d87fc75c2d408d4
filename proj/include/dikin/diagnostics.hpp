#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dikin/barrier.hpp"
#include "dikin/geometry.hpp"
#include "dikin/rng.hpp"
#include "dikin/targets.hpp"
#include "dikin/walk.hpp"

namespace dikin {

/// Outcome of auditing one inequality over many random trials.
///
/// worst_margin is the largest amount by which the checked inequality failed
/// (negative when every trial held with room to spare); a trial counts as a
/// violation when its margin exceeds `tolerance`. Reports with
/// asserted == false are informational and never fail.
struct LemmaCheckReport {
  std::string lemma_id;
  Index trials = 0;
  Index violations = 0;
  double worst_margin = -std::numeric_limits<double>::infinity();
  double tolerance = 0.0;
  std::uint64_t seed = 0;
  nlohmann::json config = nlohmann::json::object();
  bool asserted = true;

  void record(double margin);
  bool passed() const { return !asserted || violations == 0; }
};

nlohmann::json to_json(const LemmaCheckReport& report);

// Reversibility: both sides of
// pi(theta) rho_theta(z) q(theta,z) = pi(z) rho_z(theta) q(z,theta) in log
// space, margin |exp(lhs - rhs) - 1|. Pairs: theta radial, z a proposal
// from theta that landed inside K.
LemmaCheckReport detailed_balance_check(const TargetSpec& target, const Polytope& P,
                                        const SoftThresholdParams& params,
                                        AcceptanceVariant variant, Index pairs, Rng& rng,
                                        double laziness = 0.5);

/// Single-pair margin used by detailed_balance_check.
double detailed_balance_margin(const TargetSpec& target, const Polytope& P,
                               const SoftThresholdParams& params, AcceptanceVariant variant,
                               double laziness, const Vector& theta, const Vector& z);

/// Margin of the eigenvalue interval test for a single pair; nullopt when the
/// pair fails the gate sqrt(alpha) |u - v|_{Phi(u)} <= 1/2.
std::optional<double> lemma_pd_margin(const Polytope& P, const SoftThresholdParams& params,
                                      const Vector& u, const Vector& v);

/// Eigenvalues of Phi(v)^{-1/2} Phi(u) Phi(v)^{-1/2} must lie in
/// [(1 - s)^2, (1 + s)^2], s = sqrt(alpha) |u - v|_{Phi(u)}. v is drawn inside
/// the gate around a radial u.
LemmaCheckReport lemma_pd_check(const Polytope& P, const SoftThresholdParams& params, Index pairs,
                                Rng& rng, double tolerance = 1e-8);

/// sigma(u, v)^2 >= |u - v|^2_{Phi(u)} / (2 m / alpha + 2 eta_inv R^2).
/// Half the pairs are independent radial points, half are local moves.
LemmaCheckReport cross_ratio_bound_check(const Polytope& P, const SoftThresholdParams& params,
                                         double R, Index pairs, Rng& rng,
                                         double tolerance = 1e-9);

/// Per anchor, the fraction of proposals whose full acceptance ratio
/// (including 1{z in K}) is >= 3/10 must be >= 1/3 - 3 standard errors.
LemmaCheckReport acceptance_event_rate(const TargetSpec& target, const Polytope& P,
                                       const WalkConfig& cfg, Index points,
                                       Index proposals_per_point, Rng& rng);

/// Per anchor, P(pi(z)/pi(theta) >= 99/100) against 99/100 for Lipschitz
/// targets and 49/100 for smooth-only targets, with 3 standard errors slack.
LemmaCheckReport density_ratio_check(const TargetSpec& target, const Polytope& P,
                                     const SoftThresholdParams& params, Index points, Index draws,
                                     Rng& rng);

/// Per anchor, P(det Phi(z) / det Phi(theta) >= 48/50) and
/// P(|z-theta|^2_{Phi(z)} - |z-theta|^2_{Phi(theta)} <= 2/50), each against
/// 98/100 with 3 standard errors slack. Exterior proposals count as failures.
LemmaCheckReport determinant_ratio_check(const Polytope& P, const SoftThresholdParams& params,
                                         Index points, Index draws, Rng& rng);

/// With z = theta + sqrt(alpha) H^{-1/2} xi: P(|z - theta|_H <= 1/2 and
/// |xi| <= 10 sqrt(d)) >= 99/100 - 3 standard errors, per anchor.
LemmaCheckReport remain_in_ellipsoid_check(const Polytope& P, const SoftThresholdParams& params,
                                           Index points, Index draws, Rng& rng);

/// P(|z - theta|_2 > threshold_scale * sqrt(40 d eta)) <= 1/100 + 3
/// standard errors at each anchor.
LemmaCheckReport step_norm_tail_check(const Polytope& P, const SoftThresholdParams& params,
                                      double eta, Index points, Index draws, Rng& rng,
                                      double threshold_scale = 1.0);

/// h^T grad g <= sqrt((4 nu' + 4 alpha_quad R^2) h^T hess g h) with
/// g = log-barrier + (alpha_quad / 2) |x|^2.
double self_concordance_margin(const Polytope& P, double alpha_quad, double R, double nu_prime,
                               const Vector& x, const Vector& h);
LemmaCheckReport self_concordance_check(const Polytope& P, double alpha_quad, double R,
                                        double nu_prime, Index samples, Rng& rng,
                                        double tolerance = 1e-8);

/// Normalized e^{-f} masses on a regular grid over [lo, hi] (d <= 2).
///
/// Each cell is integrated with a composite midpoint rule on 16 sub-points
/// (4 x 4 in two dimensions), counting only sub-points strictly inside K, so
/// cells crossing the boundary are clipped.
class GridOracle {
 public:
  static constexpr int kSubPoints = 16;

  GridOracle(const Polytope& P, const TargetSpec& target, Vector lo, Vector hi, Index resolution);

  Index dim() const noexcept { return lo_.size(); }
  Index resolution() const noexcept { return resolution_; }
  Index cells() const noexcept { return static_cast<Index>(masses_.size()); }
  const std::vector<double>& masses() const noexcept { return masses_; }
  double cell_volume() const noexcept { return cell_volume_; }

  /// Flat index of the cell containing x (row-major), nullopt outside [lo, hi].
  std::optional<Index> cell_of(const Vector& x) const;
  std::vector<Index> cell_coords(Index flat) const;
  Vector cell_center(Index flat) const;

  /// n cell centres drawn from the oracle's multinomial.
  Matrix draw(Index n, Rng& rng) const;

 private:
  Vector lo_, hi_;
  Index resolution_;
  double cell_volume_;
  std::vector<double> masses_;
  std::vector<double> cumulative_;
};

/// 1/2 sum_cells |empirical - oracle|, with samples outside the grid counted
/// against zero oracle mass. Needs at least 10 samples per cell.
double grid_tv_estimate(const Matrix& samples, const GridOracle& oracle);

/// Per-coordinate effective sample size by Geyer's initial positive sequence,
/// clamped to [1, N]. A constant coordinate reports 1.
Vector ess(const Matrix& samples);

/// sup |F_empirical - F| for one-dimensional samples.
double kolmogorov_distance(std::vector<double> samples, const std::function<double(double)>& cdf);

}  // namespace dikin
