#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dikin/geometry.hpp"
#include "dikin/targets.hpp"
#include "dikin/walk.hpp"

namespace dikin {

/// Malformed or inconsistent run configuration (CLI exit status 1).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat key=value run description grouped in sections:
///
///   [polytope]  file | builtin (box, simplex, l1_ball), dim, half_width,
///               radius, witness
///   [target]    type (uniform, linear, quadratic, logistic), R, c, beta,
///               center, dataset, scale
///   [walk]      seed (required), steps, thin, laziness, variant, c_alpha,
///               c_eta, c_T, delta, M
///   [output]    dir
///   [dp]        epsilon, l_hat, R, dataset, grid
///   [bench]     sizes, steps, repeats
///   [diagnose]  suite, pairs, points, draws, alpha_quad
///
/// Vectors are comma separated. Unknown sections or keys are rejected.
struct RunConfig {
  std::map<std::string, std::string> entries;  // "section.key" -> raw value

  bool has(const std::string& key) const { return entries.count(key) != 0; }
  std::string get(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& fallback) const;
  double number(const std::string& key) const;
  double number_or(const std::string& key, double fallback) const;
  std::uint64_t integer(const std::string& key) const;
  std::uint64_t integer_or(const std::string& key, std::uint64_t fallback) const;
  Vector vector(const std::string& key) const;
  void set(const std::string& key, const std::string& value) { entries[key] = value; }
};

RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);

Polytope build_polytope(const RunConfig& cfg);

/// Radius of a ball containing K: [target] R, else a bound known for the
/// builtin polytope, else an error.
double target_radius(const RunConfig& cfg, const Polytope& P);

TargetSpec build_target(const RunConfig& cfg, const Polytope& P);

WalkConstants build_constants(const RunConfig& cfg);

std::vector<double> parse_list(const std::string& text);

}  // namespace dikin
