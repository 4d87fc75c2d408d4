#pragma once

#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "dikin/geometry.hpp"
#include "dikin/rng.hpp"

namespace dikin {

struct Lipschitz {
  double L;
};
struct Smooth {
  double beta;
};
struct LipschitzSmooth {
  double L;
  double beta;
};

/// Declared regularity of the potential f; drives the regularizer weight.
using SmoothnessClass = std::variant<Lipschitz, Smooth, LipschitzSmooth>;

void validate(const SmoothnessClass& cls);
std::string describe(const SmoothnessClass& cls);
/// Scales every declared constant by s >= 0.
SmoothnessClass scaled(const SmoothnessClass& cls, double s);

/// Potential of pi ∝ exp(-f) on K, with declared smoothness and a radius R
/// such that K lies in a ball of radius R.
struct TargetSpec {
  std::function<double(const Vector&)> f;
  SmoothnessClass smoothness = Smooth{0.0};
  double R = 1.0;
  std::string name = "custom";

  double operator()(const Vector& x) const { return f(x); }
};

/// Plug-in for user potentials. The oracle must be a pure function of x.
TargetSpec custom_target(std::function<double(const Vector&)> f, SmoothnessClass cls, double R,
                         std::string name = "custom");

TargetSpec uniform_target(double R);
TargetSpec linear_target(const Vector& c, double R);
TargetSpec quadratic_target(double beta, const Vector& center, double R);

/// scale * sum_i log(1 + exp(-y_i x_i^T theta)); rows of X must have norm <= 1.
TargetSpec logistic_lasso_target(const Matrix& X, const Vector& y, double scale, double R);

/// Exponential mechanism exp(-(eps / (2 L_hat R)) f) for a sum of n losses
/// that are L_hat-Lipschitz each.
struct ExponentialMechanism {
  TargetSpec target;
  double scale;
  Index n;
};
ExponentialMechanism exponential_mechanism_target(const TargetSpec& base, double L_hat, Index n,
                                                  double epsilon, double R);

/// Stable log(1 + exp(x)).
double log1p_exp(double x);

// Built-in polytopes.
Polytope box(Index d, double half_width);
/// {x >= 0, sum x <= 1}, witness at the barycenter.
Polytope simplex(Index d);
/// {x : |x|_1 <= radius} as its 2^d facets (d <= 12).
Polytope l1_ball(Index d, double radius);

inline constexpr Index kMaxL1BallDim = 12;

/// Logistic dataset: CSV rows x_1..x_d,y with y in {-1,+1}. A non-numeric
/// first line is treated as a header.
struct LabeledData {
  Matrix X;
  Vector y;
};
LabeledData read_labeled_csv(const std::string& path);

/// Result of sampling the declared constants against the oracle.
struct SmoothnessAudit {
  Index trials = 0;
  Index lipschitz_violations = 0;
  Index smoothness_violations = 0;
  double worst_lipschitz_ratio = 0.0;  // max |f(u)-f(v)| / |u-v|
  double worst_curvature = 0.0;        // max second directional difference
  bool ok() const { return lipschitz_violations == 0 && smoothness_violations == 0; }
};

/// Spot-checks declared L and beta on random interior pairs. An audit can
/// only find counterexamples; it never proves a constant valid.
SmoothnessAudit audit_smoothness(const TargetSpec& target, const Polytope& P, Index trials,
                                 Rng& rng);


}  // namespace dikin
