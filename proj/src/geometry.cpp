#include "dikin/geometry.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "dikin/error.hpp"

namespace dikin {

namespace {

void require_interior(const Polytope& P, const Vector& x, const char* what) {
  if (x.size() != P.d()) throw Error(ErrorCode::ShapeMismatch, std::string(what) + " has wrong dimension");
  if (!contains_interior(P, x)) throw Error(ErrorCode::NotInterior, std::string(what) + " is not strictly interior");
}

struct ChordParams {
  double forward;   // v-side exit: u + forward * (v - u)
  double backward;  // u-side exit: u - backward * (v - u)
};

ChordParams chord_params(const Polytope& P, const Vector& u, const Vector& v) {
  require_interior(P, u, "u");
  require_interior(P, v, "v");
  const Vector w = v - u;
  if (w.squaredNorm() == 0.0) throw Error(ErrorCode::DegenerateDirection, "chord through u == v");
  const double fwd = ray_exit_distance(P, u, w);
  const double bwd = ray_exit_distance(P, u, -w);
  if (!std::isfinite(fwd) || !std::isfinite(bwd)) {
    throw Error(ErrorCode::UnboundedChord, "line through u and v does not exit K");
  }
  return {fwd, bwd};
}

}  // namespace

Polytope Polytope::validate(Matrix A, Vector b, std::optional<Vector> witness) {
  if (A.rows() < 1 || A.cols() < 1) throw Error(ErrorCode::ShapeMismatch, "A must be at least 1x1");
  if (b.size() != A.rows()) throw Error(ErrorCode::ShapeMismatch, "b length differs from rows of A");
  if (!A.allFinite() || !b.allFinite()) throw Error(ErrorCode::InvalidArgument, "A and b must be finite");
  Vector x0 = witness ? std::move(*witness) : Vector::Zero(A.cols());
  if (x0.size() != A.cols()) throw Error(ErrorCode::ShapeMismatch, "witness has wrong dimension");
  if (!x0.allFinite()) throw Error(ErrorCode::InvalidArgument, "witness must be finite");

  Vector norms = A.rowwise().norm();
  for (Index j = 0; j < A.rows(); ++j) {
    if (norms[j] == 0.0) throw Error(ErrorCode::ZeroRow, "row " + std::to_string(j) + " of A is zero");
  }
  const Vector s = b - A * x0;
  for (Index j = 0; j < s.size(); ++j) {
    if (!(s[j] > 0.0)) {
      throw Error(ErrorCode::EmptyInterior,
                  "witness violates or touches constraint " + std::to_string(j));
    }
  }
  return Polytope(std::move(A), std::move(b), std::move(x0), std::move(norms));
}

Vector slacks(const Polytope& P, const Vector& x) {
  if (x.size() != P.d()) throw Error(ErrorCode::ShapeMismatch, "point has wrong dimension");
  return P.b() - P.A() * x;
}

bool contains_interior(const Polytope& P, const Vector& x) {
  if (x.size() != P.d() || !x.allFinite()) return false;
  return slacks(P, x).minCoeff() > 0.0;
}

double ray_exit_distance(const Polytope& P, const Vector& x, const Vector& dir) {
  const Vector s = slacks(P, x);
  const Vector rate = P.A() * dir;
  double t = std::numeric_limits<double>::infinity();
  for (Index j = 0; j < s.size(); ++j) {
    if (rate[j] > 0.0) t = std::min(t, s[j] / rate[j]);
  }
  return t;
}

Chord chord_endpoints(const Polytope& P, const Vector& u, const Vector& v) {
  const ChordParams t = chord_params(P, u, v);
  const Vector w = v - u;
  return {u - t.backward * w, u + t.forward * w};
}

double cross_ratio(const Polytope& P, const Vector& u, const Vector& v) {
  if (u.size() == v.size() && u == v) {
    require_interior(P, u, "u");
    return 0.0;
  }
  // With w = v - u every chord length is a multiple of |w|:
  // |u-v| = 1, |p-q| = f + b, |p-u| = b, |v-q| = f - 1.
  const ChordParams t = chord_params(P, u, v);
  return (t.forward + t.backward) / (t.backward * (t.forward - 1.0));
}

InnerBall inscribed_radius_at(const Polytope& P, const Vector& center) {
  require_interior(P, center, "ball center");
  const Vector s = slacks(P, center);
  return {center, s.cwiseQuotient(P.row_norms()).minCoeff()};
}

Vector radial_interior_point(const Polytope& P, Rng& rng) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Vector dir = rng.normal_vector(P.d());
    const double n = dir.norm();
    if (n == 0.0) continue;
    dir /= n;
    const double t_max = ray_exit_distance(P, P.witness(), dir);
    if (!std::isfinite(t_max)) continue;
    Vector x = P.witness() + (rng.uniform_open() * t_max) * dir;
    if (contains_interior(P, x)) return x;
  }
  throw Error(ErrorCode::UnboundedChord, "could not place an interior point from the witness");
}

Polytope read_polytope(std::istream& in, std::optional<Vector> witness) {
  std::string line;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      const auto pos = line.find_first_not_of(" \t\r");
      if (pos == std::string::npos || line[pos] == '#') continue;
      return true;
    }
    return false;
  };
  if (!next_line()) throw Error(ErrorCode::Parse, "polytope file is empty");
  long long m = 0, d = 0;
  {
    std::istringstream header(line);
    if (!(header >> m >> d) || m < 1 || d < 1) {
      throw Error(ErrorCode::Parse, "header must be \"m d\" with m, d >= 1");
    }
  }
  Matrix A(m, d);
  Vector b(m);
  for (long long j = 0; j < m; ++j) {
    if (!next_line()) throw Error(ErrorCode::Parse, "expected " + std::to_string(m) + " constraint rows");
    std::istringstream row(line);
    for (long long i = 0; i < d; ++i) {
      if (!(row >> A(j, i))) throw Error(ErrorCode::Parse, "row " + std::to_string(j) + " is short");
    }
    if (!(row >> b[j])) throw Error(ErrorCode::Parse, "row " + std::to_string(j) + " lacks b_j");
    std::string extra;
    if (row >> extra) throw Error(ErrorCode::Parse, "row " + std::to_string(j) + " has extra entries");
  }
  return Polytope::validate(std::move(A), std::move(b), std::move(witness));
}

Polytope read_polytope_file(const std::string& path, std::optional<Vector> witness) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Parse, "cannot open polytope file " + path);
  return read_polytope(in, std::move(witness));
}

void write_polytope(std::ostream& out, const Polytope& P) {
  out << P.m() << ' ' << P.d() << '\n';
  out.precision(17);
  for (Index j = 0; j < P.m(); ++j) {
    for (Index i = 0; i < P.d(); ++i) out << P.A()(j, i) << ' ';
    out << P.b()[j] << '\n';
  }
}

}  // namespace dikin
