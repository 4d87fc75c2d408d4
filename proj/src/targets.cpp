#include "dikin/targets.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "dikin/error.hpp"

namespace dikin {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw Error(ErrorCode::InvalidArgument, std::string(what) + " must be positive and finite");
  }
}

void require_nonnegative(double v, const char* what) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw Error(ErrorCode::InvalidArgument, std::string(what) + " must be nonnegative and finite");
  }
}

}  // namespace

void validate(const SmoothnessClass& cls) {
  std::visit(
      [](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, Lipschitz>) {
          require_nonnegative(c.L, "L");
        } else if constexpr (std::is_same_v<T, Smooth>) {
          require_nonnegative(c.beta, "beta");
        } else {
          require_nonnegative(c.L, "L");
          require_nonnegative(c.beta, "beta");
        }
      },
      cls);
}

std::string describe(const SmoothnessClass& cls) {
  std::ostringstream out;
  out.precision(17);
  std::visit(
      [&](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, Lipschitz>) {
          out << "Lipschitz(L=" << c.L << ")";
        } else if constexpr (std::is_same_v<T, Smooth>) {
          out << "Smooth(beta=" << c.beta << ")";
        } else {
          out << "Both(L=" << c.L << ", beta=" << c.beta << ")";
        }
      },
      cls);
  return out.str();
}

SmoothnessClass scaled(const SmoothnessClass& cls, double s) {
  require_nonnegative(s, "scale");
  return std::visit(
      [s](const auto& c) -> SmoothnessClass {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, Lipschitz>) {
          return Lipschitz{s * c.L};
        } else if constexpr (std::is_same_v<T, Smooth>) {
          return Smooth{s * c.beta};
        } else {
          return LipschitzSmooth{s * c.L, s * c.beta};
        }
      },
      cls);
}

double log1p_exp(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

TargetSpec custom_target(std::function<double(const Vector&)> f, SmoothnessClass cls, double R,
                         std::string name) {
  if (!f) throw Error(ErrorCode::InvalidArgument, "target oracle is empty");
  validate(cls);
  require_positive(R, "R");
  return {std::move(f), cls, R, std::move(name)};
}

TargetSpec uniform_target(double R) {
  return custom_target([](const Vector&) { return 0.0; }, Smooth{0.0}, R, "uniform");
}

TargetSpec linear_target(const Vector& c, double R) {
  return custom_target([c](const Vector& x) { return c.dot(x); }, LipschitzSmooth{c.norm(), 0.0},
                       R, "linear");
}

TargetSpec quadratic_target(double beta, const Vector& center, double R) {
  require_nonnegative(beta, "beta");
  return custom_target(
      [beta, center](const Vector& x) { return 0.5 * beta * (x - center).squaredNorm(); },
      Smooth{beta}, R, "quadratic");
}

TargetSpec logistic_lasso_target(const Matrix& X, const Vector& y, double scale, double R) {
  require_positive(scale, "scale");
  if (X.rows() < 1) throw Error(ErrorCode::InvalidArgument, "logistic target needs n >= 1 rows");
  if (y.size() != X.rows()) throw Error(ErrorCode::ShapeMismatch, "labels and rows differ in count");
  const Vector norms = X.rowwise().norm();
  for (Index i = 0; i < X.rows(); ++i) {
    if (norms[i] > 1.0 + 1e-12) {
      throw Error(ErrorCode::RowNormExceeded, "row " + std::to_string(i) + " has norm > 1");
    }
    if (y[i] != 1.0 && y[i] != -1.0) {
      throw Error(ErrorCode::InvalidArgument, "labels must be +1 or -1");
    }
  }
  // Scalar logistic loss is 1-Lipschitz and 1/4-smooth; composing with x_i
  // multiplies by |x_i| and |x_i|^2.
  const double L = scale * norms.sum();
  const double beta = scale * 0.25 * norms.squaredNorm();
  Matrix signed_rows = y.asDiagonal() * X;
  return custom_target(
      [signed_rows = std::move(signed_rows), scale](const Vector& theta) {
        const Vector margins = signed_rows * theta;
        double total = 0.0;
        for (Index i = 0; i < margins.size(); ++i) total += log1p_exp(-margins[i]);
        return scale * total;
      },
      LipschitzSmooth{L, beta}, R, "logistic_lasso");
}

ExponentialMechanism exponential_mechanism_target(const TargetSpec& base, double L_hat, Index n,
                                                  double epsilon, double R) {
  require_positive(epsilon, "epsilon");
  require_positive(L_hat, "L_hat");
  require_positive(R, "R");
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "n must be >= 1");
  const double s = epsilon / (2.0 * L_hat * R);
  TargetSpec out = custom_target([f = base.f, s](const Vector& x) { return s * f(x); },
                                 scaled(base.smoothness, s), R, "exp_mech(" + base.name + ")");
  return {std::move(out), s, n};
}

Polytope box(Index d, double half_width) {
  if (d < 1) throw Error(ErrorCode::InvalidArgument, "box dimension must be >= 1");
  require_positive(half_width, "half_width");
  Matrix A(2 * d, d);
  A << Matrix::Identity(d, d), -Matrix::Identity(d, d);
  return Polytope::validate(std::move(A), Vector::Constant(2 * d, half_width));
}

Polytope simplex(Index d) {
  if (d < 1) throw Error(ErrorCode::InvalidArgument, "simplex dimension must be >= 1");
  Matrix A(d + 1, d);
  A << -Matrix::Identity(d, d), Matrix::Ones(1, d);
  Vector b = Vector::Zero(d + 1);
  b[d] = 1.0;
  return Polytope::validate(std::move(A), std::move(b),
                            Vector::Constant(d, 1.0 / static_cast<double>(d + 1)));
}

Polytope l1_ball(Index d, double radius) {
  if (d < 1) throw Error(ErrorCode::InvalidArgument, "l1 ball dimension must be >= 1");
  if (d > kMaxL1BallDim) {
    throw Error(ErrorCode::DimensionTooLarge, "l1 ball H-representation needs 2^d rows; d <= 12");
  }
  require_positive(radius, "radius");
  const Index m = Index{1} << d;
  Matrix A(m, d);
  for (Index row = 0; row < m; ++row) {
    for (Index i = 0; i < d; ++i) A(row, i) = ((row >> i) & 1) ? -1.0 : 1.0;
  }
  return Polytope::validate(std::move(A), Vector::Constant(m, radius));
}

LabeledData read_labeled_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Parse, "cannot open dataset " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> values;
    std::istringstream fields(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(fields, cell, ',')) {
      try {
        std::size_t used = 0;
        values.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t\r", used) != std::string::npos) numeric = false;
      } catch (const std::exception&) {
        numeric = false;
      }
    }
    if (!numeric) {
      if (first) {
        first = false;
        continue;
      }
      throw Error(ErrorCode::Parse, "non-numeric row in " + path);
    }
    first = false;
    if (values.size() < 2) throw Error(ErrorCode::Parse, "rows need at least one feature and a label");
    if (!rows.empty() && values.size() != rows.front().size()) {
      throw Error(ErrorCode::Parse, "ragged rows in " + path);
    }
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw Error(ErrorCode::Parse, "dataset " + path + " has no rows");
  const Index n = static_cast<Index>(rows.size());
  const Index d = static_cast<Index>(rows.front().size()) - 1;
  LabeledData out{Matrix(n, d), Vector(n)};
  for (Index i = 0; i < n; ++i) {
    for (Index k = 0; k < d; ++k) out.X(i, k) = rows[i][k];
    out.y[i] = rows[i][d];
  }
  return out;
}

namespace {

std::pair<double, double> declared_constants(const SmoothnessClass& cls) {
  const double none = std::numeric_limits<double>::quiet_NaN();
  return std::visit(
      [none](const auto& c) -> std::pair<double, double> {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, Lipschitz>) {
          return {c.L, none};
        } else if constexpr (std::is_same_v<T, Smooth>) {
          return {none, c.beta};
        } else {
          return {c.L, c.beta};
        }
      },
      cls);
}

}  // namespace

SmoothnessAudit audit_smoothness(const TargetSpec& target, const Polytope& P, Index trials,
                                 Rng& rng) {
  const auto [L, beta] = declared_constants(target.smoothness);
  constexpr double eps = std::numeric_limits<double>::epsilon();
  SmoothnessAudit audit;
  audit.trials = trials;
  for (Index t = 0; t < trials; ++t) {
    const Vector u = radial_interior_point(P, rng);
    const Vector v = radial_interior_point(P, rng);
    const double fu = target(u);
    if (!std::isnan(L)) {
      const double gap = std::abs(fu - target(v));
      const double dist = (u - v).norm();
      if (dist > 0.0) audit.worst_lipschitz_ratio = std::max(audit.worst_lipschitz_ratio, gap / dist);
      if (gap > L * dist + 1e-9) ++audit.lipschitz_violations;
    }
    if (!std::isnan(beta)) {
      Vector w = rng.normal_vector(P.d());
      w.normalize();
      const double reach = std::min(ray_exit_distance(P, u, w), ray_exit_distance(P, u, -w));
      const double h = std::min(1e-3, 0.5 * reach);
      const double fp = target(u + h * w);
      const double fm = target(u - h * w);
      const double curvature = (fp - 2.0 * fu + fm) / (h * h);
      // Rounding in the three evaluations bounds how far the difference
      // quotient can drift above the true second derivative.
      const double roundoff = 64.0 * eps * (std::abs(fp) + 2.0 * std::abs(fu) + std::abs(fm)) / (h * h);
      audit.worst_curvature = std::max(audit.worst_curvature, curvature);
      if (curvature > beta * (1.0 + 1e-4) + roundoff) ++audit.smoothness_violations;
    }
  }
  return audit;
}

}  // namespace dikin
