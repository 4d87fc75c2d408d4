#include "dikin/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/FFT>

#include "dikin/error.hpp"

namespace dikin {

void LemmaCheckReport::record(double margin) {
  ++trials;
  worst_margin = std::max(worst_margin, margin);
  if (!(margin <= tolerance)) ++violations;
}

nlohmann::json to_json(const LemmaCheckReport& r) {
  nlohmann::json j;
  j["lemma_id"] = r.lemma_id;
  j["trials"] = r.trials;
  j["violations"] = r.violations;
  j["worst_margin"] = r.worst_margin;
  j["tolerance"] = r.tolerance;
  j["seed"] = r.seed;
  j["config"] = r.config;
  j["asserted"] = r.asserted;
  j["passed"] = r.passed();
  return j;
}

namespace {

nlohmann::json params_json(const SoftThresholdParams& p) {
  return {{"alpha", p.alpha}, {"eta_inv", p.eta_inv}};
}

LemmaCheckReport make_report(std::string id, double tolerance, const Rng& rng,
                             nlohmann::json config) {
  LemmaCheckReport r;
  r.lemma_id = std::move(id);
  r.tolerance = tolerance;
  r.seed = rng.seed();
  config["rng"] = {{"name", Rng::kName}, {"version", Rng::kVersion}, {"stream", rng.stream()}};
  r.config = std::move(config);
  return r;
}

Vector interior_proposal(const BarrierAt& at, const Polytope& P, Rng& rng) {
  for (int attempt = 0; attempt < 10000; ++attempt) {
    Vector z = sample_proposal(at, rng);
    if (contains_interior(P, z)) return z;
  }
  throw Error(ErrorCode::InvalidArgument, "no interior proposal in 10000 draws");
}

double binomial_stderr(double p, Index n) {
  return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

bool has_lipschitz(const SmoothnessClass& cls) {
  return !std::holds_alternative<Smooth>(cls);
}

}  // namespace

double detailed_balance_margin(const TargetSpec& target, const Polytope& P,
                               const SoftThresholdParams& params, AcceptanceVariant variant,
                               double laziness, const Vector& theta, const Vector& z) {
  const ChainState from = make_state(P, target, params, theta);
  const ChainState to = make_state(P, target, params, z);
  const double fwd = acceptance_log_ratio(from, to.at, to.f_value, variant);
  const double bwd = acceptance_log_ratio(to, from.at, from.f_value, variant);
  const double log_lazy = std::log(laziness);
  const double lhs =
      -from.f_value + proposal_log_density(from.at, z) + log_lazy + std::min(0.0, fwd);
  const double rhs =
      -to.f_value + proposal_log_density(to.at, theta) + log_lazy + std::min(0.0, bwd);
  return std::abs(std::expm1(lhs - rhs));
}

LemmaCheckReport detailed_balance_check(const TargetSpec& target, const Polytope& P,
                                        const SoftThresholdParams& params,
                                        AcceptanceVariant variant, Index pairs, Rng& rng,
                                        double laziness) {
  const std::string id =
      variant == AcceptanceVariant::ExactMH ? "detailed_balance" : "detailed_balance_literal";
  LemmaCheckReport r = make_report(id, 1e-10, rng,
                                   {{"params", params_json(params)},
                                    {"variant", to_string(variant)},
                                    {"laziness", laziness},
                                    {"target", target.name},
                                    {"pairs", pairs}});
  r.asserted = variant == AcceptanceVariant::ExactMH;
  for (Index t = 0; t < pairs; ++t) {
    const Vector theta = radial_interior_point(P, rng);
    const Vector z = interior_proposal(barrier_at(P, theta, params), P, rng);
    r.record(detailed_balance_margin(target, P, params, variant, laziness, theta, z));
  }
  return r;
}

std::optional<double> lemma_pd_margin(const Polytope& P, const SoftThresholdParams& params,
                                      const Vector& u, const Vector& v) {
  const BarrierAt at_u = barrier_at(P, u, params);
  const BarrierAt at_v = barrier_at(P, v, params);
  const double s = std::sqrt(params.alpha) * local_norm(at_u, u - v);
  if (!(s <= 0.5)) return std::nullopt;
  // Whiten Phi(u) by the Cholesky factor of Phi(v); same spectrum as the
  // symmetric square-root form.
  const auto L = at_v.llt().matrixL();
  Matrix M = L.solve(at_u.Phi());
  M = L.solve(M.transpose()).transpose();
  M = 0.5 * (M + M.transpose());
  const Vector eig = Eigen::SelfAdjointEigenSolver<Matrix>(M, Eigen::EigenvaluesOnly).eigenvalues();
  const double lo = (1.0 - s) * (1.0 - s);
  const double hi = (1.0 + s) * (1.0 + s);
  return std::max(lo - eig.minCoeff(), eig.maxCoeff() - hi);
}

LemmaCheckReport lemma_pd_check(const Polytope& P, const SoftThresholdParams& params, Index pairs,
                                Rng& rng, double tolerance) {
  LemmaCheckReport r = make_report("lemma_pd", tolerance, rng,
                                   {{"params", params_json(params)}, {"pairs", pairs}});
  const double root_alpha = std::sqrt(params.alpha);
  Index resampled = 0;
  while (r.trials < pairs) {
    const Vector u = radial_interior_point(P, rng);
    const BarrierAt at_u = barrier_at(P, u, params);
    const Vector xi = rng.normal_vector(P.d());
    const double xi_norm = xi.norm();
    if (xi_norm == 0.0) continue;
    // |w|_{Phi(u)} = |xi|, so this places s = sqrt(alpha)|u-v|_{Phi(u)}
    // uniformly in [0, 1/2).
    const double t = rng.uniform() * 0.5 / (root_alpha * xi_norm);
    const Vector v = u + t * (proposal_from_noise(at_u, xi) - u);
    if (!contains_interior(P, v)) {
      ++resampled;
      continue;
    }
    const auto margin = lemma_pd_margin(P, params, u, v);
    if (!margin) {
      ++resampled;
      continue;
    }
    r.record(*margin);
  }
  r.config["resampled"] = resampled;
  return r;
}

LemmaCheckReport cross_ratio_bound_check(const Polytope& P, const SoftThresholdParams& params,
                                         double R, Index pairs, Rng& rng, double tolerance) {
  const double denom = 2.0 * static_cast<double>(P.m()) / params.alpha + 2.0 * params.eta_inv * R * R;
  LemmaCheckReport r = make_report(
      "cross_ratio", tolerance, rng,
      {{"params", params_json(params)}, {"R", R}, {"pairs", pairs}, {"denominator", denom}});
  for (Index t = 0; t < pairs; ++t) {
    const Vector u = radial_interior_point(P, rng);
    const BarrierAt at_u = barrier_at(P, u, params);
    Vector v = (t % 2 == 0) ? radial_interior_point(P, rng) : interior_proposal(at_u, P, rng);
    if (u == v) {
      r.record(0.0);
      continue;
    }
    const double sigma = cross_ratio(P, u, v);
    const double norm = local_norm(at_u, u - v);
    r.record(norm * norm / denom - sigma * sigma);
  }
  return r;
}

LemmaCheckReport acceptance_event_rate(const TargetSpec& target, const Polytope& P,
                                       const WalkConfig& cfg, Index points,
                                       Index proposals_per_point, Rng& rng) {
  constexpr double kFloor = 1.0 / 3.0;
  const double slack = 3.0 * binomial_stderr(kFloor, proposals_per_point);
  LemmaCheckReport r = make_report("acceptance_event", 0.0, rng,
                                   {{"params", params_json(cfg.params)},
                                    {"variant", to_string(cfg.variant)},
                                    {"target", target.name},
                                    {"points", points},
                                    {"proposals_per_point", proposals_per_point},
                                    {"threshold", 0.3},
                                    {"required_rate", kFloor - slack}});
  const double log_threshold = std::log(0.3);
  nlohmann::json rates = nlohmann::json::array();
  for (Index a = 0; a < points; ++a) {
    const ChainState state = make_state(P, target, cfg.params, radial_interior_point(P, rng));
    Index hits = 0;
    for (Index k = 0; k < proposals_per_point; ++k) {
      const Vector z = sample_proposal(state.at, rng);
      if (!contains_interior(P, z)) continue;
      const BarrierAt z_at = barrier_at(P, z, cfg.params);
      if (acceptance_log_ratio(state, z_at, target(z), cfg.variant) >= log_threshold) ++hits;
    }
    const double rate = static_cast<double>(hits) / static_cast<double>(proposals_per_point);
    rates.push_back(rate);
    r.record((kFloor - slack) - rate);
  }
  r.config["rates"] = rates;
  return r;
}

LemmaCheckReport density_ratio_check(const TargetSpec& target, const Polytope& P,
                                     const SoftThresholdParams& params, Index points, Index draws,
                                     Rng& rng) {
  // The smooth branch only controls the half-space where the gradient step
  // is non-positive, hence 99/100 - 1/2.
  const double floor = has_lipschitz(target.smoothness) ? 0.99 : 0.49;
  const double slack = 3.0 * binomial_stderr(floor, draws);
  LemmaCheckReport r = make_report("density_ratio", 0.0, rng,
                                   {{"params", params_json(params)},
                                    {"target", target.name},
                                    {"smoothness", describe(target.smoothness)},
                                    {"required_rate", floor - slack}});
  const double log_threshold = std::log(0.99);
  for (Index a = 0; a < points; ++a) {
    const Vector theta = radial_interior_point(P, rng);
    const BarrierAt at = barrier_at(P, theta, params);
    const double f_theta = target(theta);
    Index hits = 0;
    for (Index k = 0; k < draws; ++k) {
      const Vector z = sample_proposal(at, rng);
      if (contains_interior(P, z) && f_theta - target(z) >= log_threshold) ++hits;
    }
    r.record((floor - slack) - static_cast<double>(hits) / static_cast<double>(draws));
  }
  return r;
}

LemmaCheckReport determinant_ratio_check(const Polytope& P, const SoftThresholdParams& params,
                                         Index points, Index draws, Rng& rng) {
  constexpr double kFloor = 0.98;
  const double slack = 3.0 * binomial_stderr(kFloor, draws);
  LemmaCheckReport r = make_report("determinant_ratio", 0.0, rng,
                                   {{"params", params_json(params)}, {"required_rate", kFloor - slack}});
  const double log_det_floor = std::log(48.0 / 50.0);
  for (Index a = 0; a < points; ++a) {
    const Vector theta = radial_interior_point(P, rng);
    const BarrierAt at = barrier_at(P, theta, params);
    Index det_hits = 0, norm_hits = 0;
    for (Index k = 0; k < draws; ++k) {
      const Vector z = sample_proposal(at, rng);
      if (!contains_interior(P, z)) continue;
      const BarrierAt z_at = barrier_at(P, z, params);
      if (z_at.log_det_Phi() - at.log_det_Phi() >= log_det_floor) ++det_hits;
      const double at_z = local_norm(z_at, z - theta);
      const double at_theta = local_norm(at, z - theta);
      if (at_z * at_z - at_theta * at_theta <= 2.0 / 50.0) ++norm_hits;
    }
    const double n = static_cast<double>(draws);
    r.record((kFloor - slack) - det_hits / n);
    r.record((kFloor - slack) - norm_hits / n);
  }
  return r;
}

LemmaCheckReport remain_in_ellipsoid_check(const Polytope& P, const SoftThresholdParams& params,
                                           Index points, Index draws, Rng& rng) {
  constexpr double kFloor = 0.99;
  const double slack = 3.0 * binomial_stderr(kFloor, draws);
  LemmaCheckReport r = make_report("remain_in_ellipsoid", 0.0, rng,
                                   {{"params", params_json(params)}, {"required_rate", kFloor - slack}});
  const double root_alpha = std::sqrt(params.alpha);
  const double xi_cap = 10.0 * std::sqrt(static_cast<double>(P.d()));
  for (Index a = 0; a < points; ++a) {
    const Vector theta = radial_interior_point(P, rng);
    const Matrix H = log_barrier_hessian(P, theta);
    const Eigen::LLT<Matrix> llt(H);
    if (llt.info() != Eigen::Success) {
      throw Error(ErrorCode::NotPositiveDefinite, "remain-in-ellipsoid check needs H positive definite");
    }
    Index hits = 0;
    for (Index k = 0; k < draws; ++k) {
      const Vector xi = rng.normal_vector(P.d());
      const Vector step = root_alpha * llt.matrixU().solve(xi);
      const double h_norm = std::sqrt(step.dot(H * step));
      if (h_norm <= 0.5 && xi.norm() <= xi_cap && contains_interior(P, theta + step)) ++hits;
    }
    r.record((kFloor - slack) - static_cast<double>(hits) / static_cast<double>(draws));
  }
  return r;
}

LemmaCheckReport step_norm_tail_check(const Polytope& P, const SoftThresholdParams& params,
                                      double eta, Index points, Index draws, Rng& rng,
                                      double threshold_scale) {
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw Error(ErrorCode::InvalidArgument, "step-norm tail check needs finite eta > 0");
  }
  constexpr double kCeiling = 0.01;
  const double slack = 3.0 * binomial_stderr(kCeiling, draws);
  const double radius = threshold_scale * std::sqrt(40.0 * static_cast<double>(P.d()) * eta);
  LemmaCheckReport r = make_report("step_norm_tail", 0.0, rng,
                                   {{"params", params_json(params)},
                                    {"eta", eta},
                                    {"threshold", radius},
                                    {"allowed_rate", kCeiling + slack}});
  nlohmann::json rates = nlohmann::json::array();
  for (Index a = 0; a < points; ++a) {
    const Vector theta = radial_interior_point(P, rng);
    const BarrierAt at = barrier_at(P, theta, params);
    Index tail = 0;
    for (Index k = 0; k < draws; ++k) {
      if ((sample_proposal(at, rng) - theta).norm() > radius) ++tail;
    }
    const double rate = static_cast<double>(tail) / static_cast<double>(draws);
    rates.push_back(rate);
    r.record(rate - (kCeiling + slack));
  }
  r.config["rates"] = rates;
  return r;
}

double self_concordance_margin(const Polytope& P, double alpha_quad, double R, double nu_prime,
                               const Vector& x, const Vector& h) {
  const Vector grad = log_barrier_gradient(P, x) + alpha_quad * x;
  const double curvature = h.dot(log_barrier_hessian(P, x) * h) + alpha_quad * h.squaredNorm();
  const double nu = 4.0 * nu_prime + 4.0 * alpha_quad * R * R;
  return h.dot(grad) - std::sqrt(nu * curvature);
}

LemmaCheckReport self_concordance_check(const Polytope& P, double alpha_quad, double R,
                                        double nu_prime, Index samples, Rng& rng,
                                        double tolerance) {
  LemmaCheckReport r = make_report("self_concordance", tolerance, rng,
                                   {{"alpha_quad", alpha_quad},
                                    {"R", R},
                                    {"nu_prime", nu_prime},
                                    {"nu", 4.0 * nu_prime + 4.0 * alpha_quad * R * R}});
  for (Index t = 0; t < samples; ++t) {
    const Vector x = radial_interior_point(P, rng);
    const Vector h = rng.normal_vector(P.d());
    r.record(self_concordance_margin(P, alpha_quad, R, nu_prime, x, h));
  }
  return r;
}

GridOracle::GridOracle(const Polytope& P, const TargetSpec& target, Vector lo, Vector hi,
                       Index resolution)
    : lo_(std::move(lo)), hi_(std::move(hi)), resolution_(resolution) {
  const Index d = P.d();
  if (d > 2) throw Error(ErrorCode::DimensionTooLarge, "grid oracle supports d <= 2");
  if (lo_.size() != d || hi_.size() != d) throw Error(ErrorCode::ShapeMismatch, "grid bounds");
  if (resolution < 1) throw Error(ErrorCode::InvalidArgument, "resolution must be >= 1");
  for (Index i = 0; i < d; ++i) {
    if (!(hi_[i] > lo_[i])) throw Error(ErrorCode::InvalidArgument, "grid needs hi > lo");
  }
  const Vector width = (hi_ - lo_) / static_cast<double>(resolution);
  cell_volume_ = width.prod();
  const Index per_axis = d == 1 ? kSubPoints : 4;
  const Index sub_per_cell = d == 1 ? per_axis : per_axis * per_axis;
  Index n_cells = 1;
  for (Index i = 0; i < d; ++i) n_cells *= resolution;

  // Potentials at every interior sub-point; shifted by the minimum before
  // exponentiating so large f do not underflow.
  std::vector<double> potentials(static_cast<std::size_t>(n_cells * sub_per_cell),
                                 std::numeric_limits<double>::infinity());
  double f_min = std::numeric_limits<double>::infinity();
  Vector x(d);
  for (Index c = 0; c < n_cells; ++c) {
    const auto coords = cell_coords(c);
    for (Index k = 0; k < sub_per_cell; ++k) {
      Index rem = k;
      for (Index i = 0; i < d; ++i) {
        const Index sub = rem % per_axis;
        rem /= per_axis;
        x[i] = lo_[i] + width[i] * (static_cast<double>(coords[i]) +
                                    (static_cast<double>(sub) + 0.5) / static_cast<double>(per_axis));
      }
      if (!contains_interior(P, x)) continue;
      const double f = target(x);
      potentials[static_cast<std::size_t>(c * sub_per_cell + k)] = f;
      f_min = std::min(f_min, f);
    }
  }
  if (!std::isfinite(f_min)) throw Error(ErrorCode::InvalidArgument, "grid has no interior points");

  masses_.assign(static_cast<std::size_t>(n_cells), 0.0);
  for (Index c = 0; c < n_cells; ++c) {
    double acc = 0.0;
    for (Index k = 0; k < sub_per_cell; ++k) {
      const double f = potentials[static_cast<std::size_t>(c * sub_per_cell + k)];
      if (std::isfinite(f)) acc += std::exp(f_min - f);
    }
    masses_[static_cast<std::size_t>(c)] = acc;
  }
  const double total = std::accumulate(masses_.begin(), masses_.end(), 0.0);
  for (double& m : masses_) m /= total;
  cumulative_.resize(masses_.size());
  std::partial_sum(masses_.begin(), masses_.end(), cumulative_.begin());
}

std::vector<Index> GridOracle::cell_coords(Index flat) const {
  std::vector<Index> coords(static_cast<std::size_t>(dim()));
  for (Index i = dim() - 1; i >= 0; --i) {
    coords[static_cast<std::size_t>(i)] = flat % resolution_;
    flat /= resolution_;
  }
  return coords;
}

std::optional<Index> GridOracle::cell_of(const Vector& x) const {
  Index flat = 0;
  for (Index i = 0; i < dim(); ++i) {
    if (!(x[i] >= lo_[i] && x[i] <= hi_[i])) return std::nullopt;
    auto k = static_cast<Index>(std::floor((x[i] - lo_[i]) / (hi_[i] - lo_[i]) *
                                           static_cast<double>(resolution_)));
    k = std::clamp<Index>(k, 0, resolution_ - 1);
    flat = flat * resolution_ + k;
  }
  return flat;
}

Vector GridOracle::cell_center(Index flat) const {
  const auto coords = cell_coords(flat);
  Vector x(dim());
  for (Index i = 0; i < dim(); ++i) {
    x[i] = lo_[i] + (hi_[i] - lo_[i]) * (static_cast<double>(coords[static_cast<std::size_t>(i)]) + 0.5) /
                        static_cast<double>(resolution_);
  }
  return x;
}

Matrix GridOracle::draw(Index n, Rng& rng) const {
  Matrix out(n, dim());
  for (Index k = 0; k < n; ++k) {
    const double u = rng.uniform() * cumulative_.back();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    if (it == cumulative_.end()) --it;
    out.row(k) = cell_center(static_cast<Index>(it - cumulative_.begin())).transpose();
  }
  return out;
}

double grid_tv_estimate(const Matrix& samples, const GridOracle& oracle) {
  if (samples.rows() == 0) throw Error(ErrorCode::EmptySamples, "no samples");
  if (samples.cols() > 2) throw Error(ErrorCode::DimensionTooLarge, "grid TV supports d <= 2");
  if (samples.cols() != oracle.dim()) throw Error(ErrorCode::ShapeMismatch, "sample dimension");
  if (samples.rows() < 10 * oracle.cells()) {
    throw Error(ErrorCode::TooFewSamples, "grid TV needs at least 10 samples per cell");
  }
  std::vector<double> counts(static_cast<std::size_t>(oracle.cells()), 0.0);
  double outside = 0.0;
  for (Index k = 0; k < samples.rows(); ++k) {
    const auto cell = oracle.cell_of(samples.row(k).transpose());
    if (cell) {
      counts[static_cast<std::size_t>(*cell)] += 1.0;
    } else {
      outside += 1.0;
    }
  }
  const double n = static_cast<double>(samples.rows());
  double total = outside / n;
  for (std::size_t c = 0; c < counts.size(); ++c) total += std::abs(counts[c] / n - oracle.masses()[c]);
  return 0.5 * total;
}

namespace {

// Normalized autocorrelation rho_0..rho_{n-1} via zero-padded FFT.
std::vector<double> autocorrelation(const Vector& x) {
  const Index n = x.size();
  Index size = 1;
  while (size < 2 * n) size <<= 1;
  std::vector<double> padded(static_cast<std::size_t>(size), 0.0);
  const double mean = x.mean();
  for (Index t = 0; t < n; ++t) padded[static_cast<std::size_t>(t)] = x[t] - mean;
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spectrum;
  fft.fwd(spectrum, padded);
  for (auto& c : spectrum) c = std::complex<double>(std::norm(c), 0.0);
  std::vector<double> acov;
  fft.inv(acov, spectrum);
  std::vector<double> rho(static_cast<std::size_t>(n));
  const double var = acov[0];
  for (Index k = 0; k < n; ++k) rho[static_cast<std::size_t>(k)] = acov[static_cast<std::size_t>(k)] / var;
  return rho;
}

}  // namespace

Vector ess(const Matrix& samples) {
  const Index n = samples.rows();
  if (n < 100) throw Error(ErrorCode::TooFewSamples, "ESS needs at least 100 samples");
  Vector out(samples.cols());
  const double nd = static_cast<double>(n);
  for (Index c = 0; c < samples.cols(); ++c) {
    const Vector x = samples.col(c);
    if ((x.array() == x[0]).all()) {
      out[c] = 1.0;
      continue;
    }
    const std::vector<double> rho = autocorrelation(x);
    double sum = rho[0] + (n > 1 ? rho[1] : 0.0);
    for (Index j = 1; 2 * j + 1 < n; ++j) {
      const double pair = rho[static_cast<std::size_t>(2 * j)] + rho[static_cast<std::size_t>(2 * j + 1)];
      if (!(pair > 0.0)) break;
      sum += pair;
    }
    const double tau = 2.0 * sum - 1.0;
    out[c] = tau > 0.0 ? std::clamp(nd / tau, 1.0, nd) : nd;
  }
  return out;
}

double kolmogorov_distance(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw Error(ErrorCode::EmptySamples, "no samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double F = cdf(samples[i]);
    worst = std::max({worst, F - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - F});
  }
  return worst;
}

}  // namespace dikin
