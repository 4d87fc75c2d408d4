#include "dikin/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "dikin/diagnostics.hpp"
#include "dikin/error.hpp"
#include "dikin/targets.hpp"
#include "dikin/version.hpp"

namespace dikin {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kDpCaveat =
    "Samples are accurate in total variation only. Pure epsilon-differential privacy "
    "additionally needs an infinity-distance guarantee, which this tool does not provide.";

struct Setup {
  RunConfig cfg;
  Polytope P;
  TargetSpec target;
  fs::path out;
  std::uint64_t seed;
};

std::uint64_t resolve_seed(const CommandOptions& opts, const RunConfig& cfg) {
  if (opts.seed) return *opts.seed;
  if (!cfg.has("walk.seed")) throw ConfigError("walk.seed is required (or pass --seed)");
  return cfg.integer("walk.seed");
}

fs::path resolve_out(const CommandOptions& opts, const RunConfig& cfg) {
  fs::path out = opts.out_dir ? fs::path(*opts.out_dir) : fs::path(cfg.get_or("output.dir", "."));
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw ConfigError("cannot create output directory " + out.string());
  return out;
}

RunConfig load_with_overrides(const CommandOptions& opts) {
  if (opts.config_path.empty()) throw ConfigError("a config file is required");
  return load_config(opts.config_path);
}

Setup load_setup(const CommandOptions& opts, bool need_target = true) {
  RunConfig cfg = load_with_overrides(opts);
  Polytope P = build_polytope(cfg);
  TargetSpec target = need_target ? build_target(cfg, P) : uniform_target(target_radius(cfg, P));
  const std::uint64_t seed = resolve_seed(opts, cfg);
  fs::path out = resolve_out(opts, cfg);
  return {std::move(cfg), std::move(P), std::move(target), std::move(out), seed};
}

json vector_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json config_echo(const RunConfig& cfg) {
  json j = json::object();
  for (const auto& [k, v] : cfg.entries) j[k] = v;
  return j;
}

json smoothness_json(const SmoothnessClass& cls) {
  return std::visit(
      [](const auto& c) -> json {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, Lipschitz>) {
          return {{"class", "Lipschitz"}, {"L", c.L}, {"beta", nullptr}};
        } else if constexpr (std::is_same_v<T, Smooth>) {
          return {{"class", "Smooth"}, {"L", nullptr}, {"beta", c.beta}};
        } else {
          return {{"class", "Both"}, {"L", c.L}, {"beta", c.beta}};
        }
      },
      cls);
}

std::optional<double> default_oscillation(const SmoothnessClass& cls, double R) {
  return std::visit(
      [R](const auto& c) -> std::optional<double> {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, Smooth>) {
          if (c.beta == 0.0) return 0.0;
          return std::nullopt;
        } else {
          return 2.0 * c.L * R;  // L times the diameter bound 2R
        }
      },
      cls);
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Parse, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

void write_samples_csv(const fs::path& path, const Matrix& samples) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Parse, "cannot write " + path.string());
  for (Index i = 0; i < samples.cols(); ++i) out << (i ? "," : "") << "theta" << (i + 1);
  out << '\n';
  char buf[32];
  for (Index r = 0; r < samples.rows(); ++r) {
    for (Index i = 0; i < samples.cols(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", samples(r, i));
      if (i) out << ',';
      out << buf;
    }
    out << '\n';
  }
}

struct SamplerRun {
  WalkConfig walk;
  RunReport report;
  json echo;
};

SamplerRun run_sampler(const Setup& s, const TargetSpec& target) {
  const RunConfig& cfg = s.cfg;
  WalkConfig walk;
  walk.constants = build_constants(cfg);
  walk.laziness = cfg.number_or("walk.laziness", 0.5);
  try {
    walk.variant = parse_variant(cfg.get_or("walk.variant", "exact"));
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  walk.seed = s.seed;
  walk.params = default_hyperparameters(s.P.d(), target.smoothness, walk.constants);
  if (!(walk.laziness > 0.0 && walk.laziness <= 1.0)) throw ConfigError("walk.laziness must lie in (0, 1]");
  const std::uint64_t thin = cfg.integer_or("walk.thin", 1);
  if (thin < 1) throw ConfigError("walk.thin must be >= 1");
  const double delta = cfg.number_or("walk.delta", 0.1);
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("walk.delta must lie in (0, 1)");

  const InnerBall ball = inscribed_radius_at(s.P, s.P.witness());
  const double R = target.R;
  if (!(R >= ball.radius)) throw ConfigError("R is smaller than the inscribed radius; R must bound K");
  std::optional<double> M =
      cfg.has("walk.M") ? std::optional<double>(cfg.number("walk.M")) : default_oscillation(target.smoothness, R);

  json warm = {{"center", vector_json(ball.center)}, {"r", ball.radius}, {"R", R}, {"delta", delta}};
  std::optional<double> warmness;
  if (M) {
    const Warmness w = warmness_bound(s.P.d(), R, ball.radius, *M);
    warm["M"] = *M;
    warm["warmness"] = w.overflow ? json("inf") : json(w.value);
    warm["overflow"] = w.overflow;
    if (!w.overflow) warmness = w.value;
  } else {
    warm["M"] = nullptr;
    warm["warmness"] = nullptr;
  }

  json steps = {{"formula", "ceil(c_T * (2*m/alpha + eta_inv*R^2) * log(w/delta))"}};
  std::optional<std::uint64_t> formula_T;
  if (warmness) {
    try {
      formula_T = step_count(s.P.m(), walk.params, R, *warmness, delta, walk.constants.c_T);
      steps["formula_value"] = *formula_T;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::Overflow) throw;
      steps["formula_value"] = nullptr;
      steps["formula_overflow"] = true;
    }
  }
  if (cfg.has("walk.steps")) {
    walk.steps = cfg.integer("walk.steps");
    steps["source"] = "config";
  } else if (formula_T) {
    walk.steps = *formula_T;
    steps["source"] = "formula";
  } else if (!warmness) {
    throw ConfigError("walk.steps is required when walk.M cannot be derived from the target");
  } else {
    throw Error(ErrorCode::Overflow, "step-count formula overflows; set walk.steps or lower walk.c_T");
  }
  steps["T"] = walk.steps;

  Rng base(s.seed);
  Rng warm_rng = base.split(1);
  Rng chain_rng = base.split(0);
  const Vector theta0 = warm_start_uniform_ball(ball, s.P, warm_rng);
  warm["theta0"] = vector_json(theta0);

  RunReport report = run_chain(theta0, target, s.P, walk, thin, chain_rng);

  const double T = static_cast<double>(walk.steps);
  json echo = {
      {"version", kVersion},
      {"config", config_echo(cfg)},
      {"seed", s.seed},
      {"rng", {{"name", Rng::kName}, {"version", Rng::kVersion}}},
      {"polytope", {{"m", s.P.m()}, {"d", s.P.d()}}},
      {"target", {{"name", target.name}, {"R", R}, {"smoothness", smoothness_json(target.smoothness)}}},
      {"hyperparameters",
       {{"alpha", walk.params.alpha},
        {"eta_inv", walk.params.eta_inv},
        {"eta", walk.params.eta_inv > 0.0 ? json(1.0 / walk.params.eta_inv) : json("inf")},
        {"c_alpha", walk.constants.c_alpha},
        {"c_eta", walk.constants.c_eta},
        {"c_T", walk.constants.c_T},
        {"laziness", walk.laziness},
        {"variant", to_string(walk.variant)}}},
      {"warm_start", warm},
      {"steps", steps},
      {"thin", thin},
      {"retained", report.samples.rows()},
      {"counts",
       {{"accepted", report.accepted},
        {"rejected_outside", report.rejected_outside},
        {"rejected_mh", report.rejected_mh},
        {"rejected_lazy", report.rejected_lazy}}},
      {"acceptance_rate", walk.steps ? static_cast<double>(report.accepted) / T : 0.0},
      {"mean_accept_prob", report.mean_accept_prob},
      {"step_norms", {{"mean", report.step_norms.mean}, {"max", report.step_norms.max}}}};
  return {walk, std::move(report), std::move(echo)};
}

template <class Body>
int guarded(std::ostream& err, const char* command, Body&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "dikin " << command << ": config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    err << "dikin " << command << ": numerical failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    err << "dikin " << command << ": " << e.what() << '\n';
    return kExitNumeric;
  }
}

std::vector<std::string> split_ids(const std::string& text) {
  std::vector<std::string> ids;
  std::istringstream in(text);
  std::string id;
  while (std::getline(in, id, ',')) {
    id.erase(0, id.find_first_not_of(" \t"));
    id.erase(id.find_last_not_of(" \t") + 1);
    if (!id.empty()) ids.push_back(id);
  }
  return ids;
}

}  // namespace

const std::vector<std::string>& diagnostic_suite_ids() {
  static const std::vector<std::string> ids = {
      "detailed_balance", "detailed_balance_literal", "lemma_pd",          "cross_ratio",
      "acceptance_event", "density_ratio",          "determinant_ratio", "remain_in_ellipsoid",
      "step_norm_tail",   "self_concordance"};
  return ids;
}

int cmd_sample(const CommandOptions& opts, std::ostream& err) {
  return guarded(err, "sample", [&] {
    const Setup s = load_setup(opts);
    SamplerRun run = run_sampler(s, s.target);
    write_samples_csv(s.out / "samples.csv", run.report.samples);
    run.echo["command"] = "sample";
    write_json(s.out / "report.json", run.echo);
    return kExitOk;
  });
}

int cmd_diagnose(const CommandOptions& opts, std::ostream& err) {
  return guarded(err, "diagnose", [&] {
    const Setup s = load_setup(opts);
    std::vector<std::string> ids =
        !opts.suite.empty() ? opts.suite
        : s.cfg.has("diagnose.suite") ? split_ids(s.cfg.get("diagnose.suite"))
                                      : diagnostic_suite_ids();
    const auto& known = diagnostic_suite_ids();
    for (const auto& id : ids) {
      if (std::find(known.begin(), known.end(), id) == known.end()) {
        throw ConfigError("unknown lemma id '" + id + "'");
      }
    }
    const WalkConstants constants = build_constants(s.cfg);
    const SoftThresholdParams params = default_hyperparameters(s.P.d(), s.target.smoothness, constants);
    const auto pairs = static_cast<Index>(s.cfg.integer_or("diagnose.pairs", 1000));
    const auto points = static_cast<Index>(s.cfg.integer_or("diagnose.points", 10));
    const auto draws = static_cast<Index>(s.cfg.integer_or("diagnose.draws", 1000));
    const double alpha_quad = s.cfg.number_or("diagnose.alpha_quad", 1.0);
    const double laziness = s.cfg.number_or("walk.laziness", 0.5);
    WalkConfig walk;
    walk.params = params;
    walk.constants = constants;
    walk.laziness = laziness;
    walk.variant = parse_variant(s.cfg.get_or("walk.variant", "exact"));
    walk.seed = s.seed;
    const Rng base(s.seed);
    const double R = s.target.R;

    json summary = json::array();
    bool all_passed = true;
    for (const auto& id : ids) {
      const auto index = static_cast<std::uint64_t>(std::find(known.begin(), known.end(), id) - known.begin());
      Rng rng = base.split(100 + index);
      LemmaCheckReport r;
      if (id == "detailed_balance") {
        r = detailed_balance_check(s.target, s.P, params, AcceptanceVariant::ExactMH,
                                   std::min<Index>(pairs, 100), rng, laziness);
      } else if (id == "detailed_balance_literal") {
        r = detailed_balance_check(s.target, s.P, params, AcceptanceVariant::PaperLiteral,
                                   std::min<Index>(pairs, 100), rng, laziness);
      } else if (id == "lemma_pd") {
        r = lemma_pd_check(s.P, params, pairs, rng);
      } else if (id == "cross_ratio") {
        r = cross_ratio_bound_check(s.P, params, R, pairs, rng);
      } else if (id == "acceptance_event") {
        r = acceptance_event_rate(s.target, s.P, walk, points, draws, rng);
      } else if (id == "density_ratio") {
        r = density_ratio_check(s.target, s.P, params, points, draws, rng);
      } else if (id == "determinant_ratio") {
        r = determinant_ratio_check(s.P, params, points, draws, rng);
      } else if (id == "remain_in_ellipsoid") {
        r = remain_in_ellipsoid_check(s.P, params, points, draws, rng);
      } else if (id == "step_norm_tail") {
        if (params.eta_inv > 0.0) {
          r = step_norm_tail_check(s.P, params, 1.0 / params.eta_inv, points, draws, rng);
        } else {
          r.lemma_id = id;
          r.seed = s.seed;
          r.asserted = false;
          r.config = {{"skipped", "eta_inv = 0: proposals are not regularized, eta is infinite"}};
        }
      } else if (id == "self_concordance") {
        r = self_concordance_check(s.P, alpha_quad, R, static_cast<double>(s.P.m()), pairs, rng);
      }
      const json j = to_json(r);
      write_json(s.out / (id + ".json"), j);
      summary.push_back({{"lemma_id", id},
                         {"passed", r.passed()},
                         {"asserted", r.asserted},
                         {"violations", r.violations},
                         {"worst_margin", r.worst_margin}});
      if (!r.passed()) {
        all_passed = false;
        err << "dikin diagnose: " << id << " failed with " << r.violations << " violations\n";
      }
    }
    write_json(s.out / "report.json", {{"command", "diagnose"},
                                       {"version", kVersion},
                                       {"config", config_echo(s.cfg)},
                                       {"seed", s.seed},
                                       {"rng", {{"name", Rng::kName}, {"version", Rng::kVersion}}},
                                       {"params", {{"alpha", params.alpha}, {"eta_inv", params.eta_inv}}},
                                       {"constants",
                                        {{"c_alpha", constants.c_alpha},
                                         {"c_eta", constants.c_eta},
                                         {"c_T", constants.c_T}}},
                                       {"results", summary}});
    return all_passed ? kExitOk : kExitViolation;
  });
}

int cmd_dp_erm(const CommandOptions& opts, std::ostream& err) {
  return guarded(err, "dp-erm", [&] {
    RunConfig cfg = load_with_overrides(opts);
    const std::string dataset = cfg.has("dp.dataset") ? cfg.get("dp.dataset") : cfg.get_or("target.dataset", "");
    if (dataset.empty()) throw ConfigError("dp-erm needs dp.dataset (or target.dataset)");
    if (!cfg.has("dp.epsilon")) throw ConfigError("dp-erm needs dp.epsilon");
    const double epsilon = cfg.number("dp.epsilon");
    const double l_hat = cfg.number_or("dp.l_hat", 1.0);
    if (!(epsilon > 0.0)) throw ConfigError("dp.epsilon must be positive");
    if (!(l_hat > 0.0)) throw ConfigError("dp.l_hat must be positive");

    Polytope P = build_polytope(cfg);
    const double R = cfg.has("dp.R") ? cfg.number("dp.R") : target_radius(cfg, P);
    if (!(R > 0.0)) throw ConfigError("dp.R must be positive");
    LabeledData data;
    TargetSpec base;
    try {
      data = read_labeled_csv(dataset);
      if (data.X.cols() != P.d()) throw ConfigError("dataset feature count differs from d");
      base = logistic_lasso_target(data.X, data.y, 1.0, R);
    } catch (const Error& e) {
      throw ConfigError(std::string("dataset: ") + e.what());
    }
    const ExponentialMechanism mech = exponential_mechanism_target(base, l_hat, data.X.rows(), epsilon, R);
    const std::uint64_t seed = resolve_seed(opts, cfg);
    const fs::path out = resolve_out(opts, cfg);
    const Setup s{cfg, P, mech.target, out, seed};

    SamplerRun run = run_sampler(s, mech.target);
    const Vector theta_hat = run.report.samples.row(run.report.samples.rows() - 1).transpose();
    const double risk = base(theta_hat);

    // Reference minimum of the unscaled empirical risk.
    const auto grid = static_cast<Index>(cfg.integer_or("dp.grid", 200));
    double reference = std::numeric_limits<double>::infinity();
    std::string reference_kind;
    if (P.d() <= 2 && grid >= 1) {
      reference_kind = "grid";
      const Index total = P.d() == 1 ? grid : grid * grid;
      Vector x(P.d());
      for (Index k = 0; k < total; ++k) {
        Index rem = k;
        for (Index i = 0; i < P.d(); ++i) {
          const Index c = rem % grid;
          rem /= grid;
          x[i] = -R + 2.0 * R * (static_cast<double>(c) + 0.5) / static_cast<double>(grid);
        }
        if (contains_interior(P, x)) reference = std::min(reference, base(x));
      }
    }
    if (!std::isfinite(reference)) {
      reference_kind = "chain_samples";
      for (Index r = 0; r < run.report.samples.rows(); ++r) {
        reference = std::min(reference, base(Vector(run.report.samples.row(r).transpose())));
      }
    }

    write_samples_csv(out / "samples.csv", run.report.samples);
    write_samples_csv(out / "theta_hat.csv", theta_hat.transpose());
    run.echo["command"] = "dp-erm";
    run.echo["dp"] = {{"epsilon", epsilon},
                      {"l_hat", l_hat},
                      {"R", R},
                      {"n", mech.n},
                      {"scale", mech.scale},
                      {"scaled_smoothness", smoothness_json(mech.target.smoothness)},
                      {"base_smoothness", smoothness_json(base.smoothness)},
                      {"theta_hat", vector_json(theta_hat)},
                      {"risk_theta_hat", risk},
                      {"reference_min", reference},
                      {"reference_kind", reference_kind},
                      {"grid", grid},
                      {"excess_risk", risk - reference},
                      {"utility_scale_d_lhat_R_over_eps",
                       static_cast<double>(P.d()) * l_hat * R / epsilon},
                      {"caveat", kDpCaveat}};
    write_json(out / "report.json", run.echo);
    return kExitOk;
  });
}

Polytope bench_polytope(Index m, Index d, Rng& rng) {
  if (m < d) throw Error(ErrorCode::InvalidArgument, "bench needs m >= d");
  Matrix A(m, d);
  Index row = 0;
  if (m >= 2 * d) {
    A.topRows(2 * d) << Matrix::Identity(d, d), -Matrix::Identity(d, d);
    row = 2 * d;
  }
  for (; row < m; ++row) {
    Vector a = rng.normal_vector(d);
    while (a.norm() == 0.0) a = rng.normal_vector(d);
    A.row(row) = a.normalized().transpose();
  }
  return Polytope::validate(std::move(A), Vector::Ones(m));
}

double measure_ns_per_step(const Polytope& P, const WalkConfig& cfg, std::uint64_t steps,
                           int repeats, Rng& rng) {
  const TargetSpec target = uniform_target(1.0);
  ChainState state = make_state(P, target, cfg.params, P.witness());
  for (std::uint64_t i = 0; i < std::max<std::uint64_t>(steps / 10, 1); ++i) step(state, P, target, cfg, rng);
  std::vector<double> timings;
  for (int r = 0; r < std::max(repeats, 1); ++r) {
    const auto start = std::chrono::steady_clock::now();
    for (std::uint64_t i = 0; i < steps; ++i) step(state, P, target, cfg, rng);
    const auto stop = std::chrono::steady_clock::now();
    timings.push_back(std::chrono::duration<double, std::nano>(stop - start).count() /
                      static_cast<double>(steps));
  }
  std::sort(timings.begin(), timings.end());
  return timings[timings.size() / 2];
}

int cmd_bench(const CommandOptions& opts, std::ostream& err) {
  return guarded(err, "bench", [&] {
    RunConfig cfg = load_with_overrides(opts);
    const std::uint64_t seed = resolve_seed(opts, cfg);
    const fs::path out = resolve_out(opts, cfg);
    std::vector<std::pair<Index, Index>> sizes;
    {
      std::istringstream in(cfg.get_or("bench.sizes", "100x20,200x20,400x20"));
      std::string item;
      while (std::getline(in, item, ',')) {
        long long m = 0, d = 0;
        char sep = 0;
        std::istringstream cell(item);
        if (!(cell >> m >> sep >> d) || sep != 'x' || m < 1 || d < 1 || m < d) {
          throw ConfigError("bench.sizes entries look like 100x20 with m >= d");
        }
        sizes.emplace_back(m, d);
      }
    }
    if (sizes.empty()) throw ConfigError("bench.sizes is empty");
    const std::uint64_t steps = cfg.integer_or("bench.steps", 2000);
    const int repeats = static_cast<int>(cfg.integer_or("bench.repeats", 5));
    if (steps < 1) throw ConfigError("bench.steps must be >= 1");
    const WalkConstants constants = build_constants(cfg);

    const Rng base(seed);
    std::map<Index, std::vector<std::pair<Index, double>>> by_dim;
    std::ofstream csv(out / "bench.csv");
    csv << "m,d,ns_per_step\n";
    json rows = json::array();
    for (std::size_t k = 0; k < sizes.size(); ++k) {
      const auto [m, d] = sizes[k];
      Rng rng = base.split(k);
      const Polytope P = bench_polytope(m, d, rng);
      WalkConfig walk;
      walk.constants = constants;
      walk.params = default_hyperparameters(d, Smooth{0.0}, constants);
      walk.laziness = cfg.number_or("walk.laziness", 0.5);
      const double ns = measure_ns_per_step(P, walk, steps, repeats, rng);
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.1f", ns);
      csv << m << ',' << d << ',' << buf << '\n';
      rows.push_back({{"m", m}, {"d", d}, {"ns_per_step", ns}});
      by_dim[d].emplace_back(m, ns);
    }

    json growth = json::array();
    for (auto& [d, points] : by_dim) {
      if (points.size() < 2) continue;
      std::sort(points.begin(), points.end());
      const double m_ratio = static_cast<double>(points.back().first) / static_cast<double>(points.front().first);
      if (m_ratio <= 1.0) continue;
      const double t_ratio = points.back().second / points.front().second;
      // Linear in m up to the m-independent O(d^3) part of each step.
      const bool ok = t_ratio >= 0.5 * m_ratio && t_ratio <= 1.5 * m_ratio;
      bool monotone = true;
      for (std::size_t i = 1; i < points.size(); ++i) monotone = monotone && points[i].second >= points[i - 1].second;
      growth.push_back({{"d", d},
                        {"m_ratio", m_ratio},
                        {"time_ratio", t_ratio},
                        {"window", {0.5 * m_ratio, 1.5 * m_ratio}},
                        {"near_linear", ok},
                        {"monotone", monotone}});
      if (!ok) err << "dikin bench: d=" << d << " time ratio " << t_ratio << " outside window (timing noise?)\n";
    }
    write_json(out / "report.json", {{"command", "bench"},
                                     {"version", kVersion},
                                     {"config", config_echo(cfg)},
                                     {"seed", seed},
                                     {"steps", steps},
                                     {"repeats", repeats},
                                     {"sizes", rows},
                                     {"growth", growth}});
    return kExitOk;
  });
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Soft-threshold Dikin walk sampler for log-concave densities on polytopes"};
  app.require_subcommand(1);
  CommandOptions opts;
  std::uint64_t seed = 0;
  std::string suite;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config,--config", opts.config_path, "Config file");
    sub->add_option("--out", opts.out_dir, "Output directory");
    sub->add_option("--seed", seed, "Seed override");
  };
  CLI::App* sample = app.add_subcommand("sample", "Run the chain and write samples.csv");
  CLI::App* diagnose = app.add_subcommand("diagnose", "Run lemma checks");
  CLI::App* dp = app.add_subcommand("dp-erm", "Exponential-mechanism ERM");
  CLI::App* bench = app.add_subcommand("bench", "Per-step cost across (m, d)");
  for (CLI::App* sub : {sample, diagnose, dp, bench}) add_common(sub);
  diagnose->add_option("--suite", suite, "Comma-separated lemma ids");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }
  for (CLI::App* sub : {sample, diagnose, dp, bench}) {
    if (sub->parsed() && sub->count("--seed") > 0) opts.seed = seed;
  }
  if (!suite.empty()) opts.suite = split_ids(suite);
  if (opts.config_path.empty()) {
    std::cerr << "dikin: a config file is required\n";
    return kExitConfig;
  }
  if (sample->parsed()) return cmd_sample(opts, std::cerr);
  if (diagnose->parsed()) return cmd_diagnose(opts, std::cerr);
  if (dp->parsed()) return cmd_dp_erm(opts, std::cerr);
  return cmd_bench(opts, std::cerr);
}

}  // namespace dikin
