#include "dikin/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "dikin/error.hpp"

namespace dikin {

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "polytope.file",   "polytope.builtin", "polytope.dim",     "polytope.half_width",
      "polytope.radius", "polytope.witness", "target.type",      "target.R",
      "target.c",        "target.beta",      "target.center",    "target.dataset",
      "target.scale",    "walk.seed",        "walk.steps",       "walk.thin",
      "walk.laziness",   "walk.variant",     "walk.c_alpha",     "walk.c_eta",
      "walk.c_T",        "walk.delta",       "walk.M",           "output.dir",
      "dp.epsilon",      "dp.l_hat",         "dp.R",             "dp.dataset",
      "dp.grid",         "bench.sizes",      "bench.steps",      "bench.repeats",
      "diagnose.suite",  "diagnose.pairs",   "diagnose.points",  "diagnose.draws",
      "diagnose.alpha_quad"};
  return keys;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::istringstream in(text);
  std::string cell;
  while (std::getline(in, cell, ',')) {
    cell = trim(cell);
    if (cell.empty()) throw ConfigError("empty entry in list '" + text + "'");
    std::size_t used = 0;
    double v;
    try {
      v = std::stod(cell, &used);
    } catch (const std::exception&) {
      throw ConfigError("not a number: '" + cell + "'");
    }
    if (used != cell.size()) throw ConfigError("not a number: '" + cell + "'");
    out.push_back(v);
  }
  return out;
}

std::string RunConfig::get(const std::string& key) const {
  auto it = entries.find(key);
  if (it == entries.end()) throw ConfigError("missing required key " + key);
  return it->second;
}

std::string RunConfig::get_or(const std::string& key, const std::string& fallback) const {
  auto it = entries.find(key);
  return it == entries.end() ? fallback : it->second;
}

double RunConfig::number(const std::string& key) const {
  const auto values = parse_list(get(key));
  if (values.size() != 1) throw ConfigError(key + " must be a single number");
  return values.front();
}

double RunConfig::number_or(const std::string& key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

std::uint64_t RunConfig::integer(const std::string& key) const {
  const std::string text = trim(get(key));
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
    throw ConfigError(key + " must be a nonnegative integer");
  }
  try {
    return std::stoull(text);
  } catch (const std::exception&) {
    throw ConfigError(key + " is out of range");
  }
}

std::uint64_t RunConfig::integer_or(const std::string& key, std::uint64_t fallback) const {
  return has(key) ? integer(key) : fallback;
}

Vector RunConfig::vector(const std::string& key) const {
  const auto values = parse_list(get(key));
  if (values.empty()) throw ConfigError(key + " is empty");
  return Eigen::Map<const Vector>(values.data(), static_cast<Index>(values.size()));
}

RunConfig parse_config(std::istream& in) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("config syntax: ") + e.what());
  }
  RunConfig cfg;
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError("key '" + section + "' outside of a section");
    for (const auto& [key, value] : body) {
      const std::string full = section + "." + key;
      if (!known_keys().count(full)) throw ConfigError("unknown config key " + full);
      cfg.entries[full] = trim(value.data());
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  RunConfig cfg = parse_config(in);
  // Relative data paths are taken relative to the config file.
  const std::filesystem::path base = std::filesystem::path(path).parent_path();
  for (const char* key : {"polytope.file", "target.dataset", "dp.dataset"}) {
    if (!cfg.has(key)) continue;
    const std::filesystem::path p(cfg.get(key));
    if (p.is_relative()) cfg.set(key, (base / p).lexically_normal().string());
  }
  return cfg;
}

Polytope build_polytope(const RunConfig& cfg) {
  const bool from_file = cfg.has("polytope.file");
  const bool from_builtin = cfg.has("polytope.builtin");
  if (from_file == from_builtin) {
    throw ConfigError("exactly one of polytope.file and polytope.builtin is required");
  }
  std::optional<Vector> witness;
  if (cfg.has("polytope.witness")) witness = cfg.vector("polytope.witness");
  try {
    if (from_file) return read_polytope_file(cfg.get("polytope.file"), witness);
    const std::string kind = cfg.get("polytope.builtin");
    const auto d = static_cast<Index>(cfg.integer("polytope.dim"));
    Polytope P = [&] {
      if (kind == "box") return box(d, cfg.number_or("polytope.half_width", 1.0));
      if (kind == "simplex") return simplex(d);
      if (kind == "l1_ball") return l1_ball(d, cfg.number_or("polytope.radius", 1.0));
      throw ConfigError("unknown builtin polytope '" + kind + "'");
    }();
    if (witness) return Polytope::validate(P.A(), P.b(), witness);
    return P;
  } catch (const Error& e) {
    throw ConfigError(std::string("polytope: ") + e.what());
  }
}

double target_radius(const RunConfig& cfg, const Polytope& P) {
  if (cfg.has("target.R")) {
    const double R = cfg.number("target.R");
    if (!(R > 0.0)) throw ConfigError("target.R must be positive");
    return R;
  }
  const std::string kind = cfg.get_or("polytope.builtin", "");
  const double d = static_cast<double>(P.d());
  if (kind == "box") return cfg.number_or("polytope.half_width", 1.0) * std::sqrt(d);
  if (kind == "simplex") return 1.0;
  if (kind == "l1_ball") return cfg.number_or("polytope.radius", 1.0);
  throw ConfigError("target.R is required for polytopes read from file");
}

TargetSpec build_target(const RunConfig& cfg, const Polytope& P) {
  const std::string type = cfg.get("target.type");
  const double R = target_radius(cfg, P);
  auto dim_checked = [&](Vector v, const char* key) {
    if (v.size() != P.d()) throw ConfigError(std::string(key) + " must have dimension d");
    return v;
  };
  try {
    if (type == "uniform") return uniform_target(R);
    if (type == "linear") return linear_target(dim_checked(cfg.vector("target.c"), "target.c"), R);
    if (type == "quadratic") {
      const Vector center = cfg.has("target.center")
                                ? dim_checked(cfg.vector("target.center"), "target.center")
                                : Vector::Zero(P.d());
      return quadratic_target(cfg.number("target.beta"), center, R);
    }
    if (type == "logistic") {
      const LabeledData data = read_labeled_csv(cfg.get("target.dataset"));
      if (data.X.cols() != P.d()) throw ConfigError("dataset feature count differs from d");
      return logistic_lasso_target(data.X, data.y, cfg.number_or("target.scale", 1.0), R);
    }
  } catch (const Error& e) {
    throw ConfigError(std::string("target: ") + e.what());
  }
  throw ConfigError("unknown target type '" + type + "'");
}

WalkConstants build_constants(const RunConfig& cfg) {
  WalkConstants c;
  c.c_alpha = cfg.number_or("walk.c_alpha", c.c_alpha);
  c.c_eta = cfg.number_or("walk.c_eta", c.c_eta);
  c.c_T = cfg.number_or("walk.c_T", c.c_T);
  try {
    c.validate();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return c;
}

}  // namespace dikin
