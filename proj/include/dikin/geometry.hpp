#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include <Eigen/Core>

#include "dikin/rng.hpp"

namespace dikin {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// H-polytope K = {x : A x <= b} with a certified strictly interior witness.
///
/// Rows are kept exactly as supplied. The log-barrier Hessian is invariant to
/// scaling a row (a_j, b_j) jointly, but slacks are not, so slack values
/// reported by this class are in the user's units.
class Polytope {
 public:
  /// Checks shapes, rejects zero rows and requires the witness (the origin
  /// when none is given) to satisfy A x0 < b componentwise.
  static Polytope validate(Matrix A, Vector b, std::optional<Vector> witness = std::nullopt);

  const Matrix& A() const noexcept { return A_; }
  const Vector& b() const noexcept { return b_; }
  const Vector& witness() const noexcept { return witness_; }
  /// Euclidean norms of the rows of A.
  const Vector& row_norms() const noexcept { return row_norms_; }
  Index m() const noexcept { return A_.rows(); }
  Index d() const noexcept { return A_.cols(); }

 private:
  Polytope(Matrix A, Vector b, Vector witness, Vector row_norms)
      : A_(std::move(A)), b_(std::move(b)), witness_(std::move(witness)),
        row_norms_(std::move(row_norms)) {}

  Matrix A_;
  Vector b_;
  Vector witness_;
  Vector row_norms_;
};

struct InnerBall {
  Vector center;
  double radius = 0.0;
};

struct Chord {
  Vector p;  // exit point behind u
  Vector q;  // exit point beyond v
};

/// s_j = b_j - a_j^T x.
Vector slacks(const Polytope& P, const Vector& x);

/// Strict membership, no tolerance: min_j s_j > 0.
bool contains_interior(const Polytope& P, const Vector& x);

/// Boundary points p, q of the chord through u and v, ordered p, u, v, q.
/// Throws DegenerateDirection if u == v, NotInterior, or UnboundedChord when
/// the line leaves no constraint active in one of the two directions.
Chord chord_endpoints(const Polytope& P, const Vector& u, const Vector& v);

/// Cross-ratio distance |u-v| |p-q| / (|p-u| |v-q|); zero when u == v.
double cross_ratio(const Polytope& P, const Vector& u, const Vector& v);

/// Largest ball centred at `center` inside K.
InnerBall inscribed_radius_at(const Polytope& P, const Vector& center);

/// Largest t >= 0 with x + t*dir in the closure of K (infinity if unbounded).
double ray_exit_distance(const Polytope& P, const Vector& x, const Vector& dir);

/// Interior points for checks that must not depend on the walk: pick a unit
/// direction from the witness, find the exit distance along it and place the
/// point at a uniform fraction of that distance. Covers all of K, denser near
/// the witness.
Vector radial_interior_point(const Polytope& P, Rng& rng);

// Text format: first line "m d", then m lines of d coefficients of a_j
// followed by b_j. Whitespace separated; '#' starts a comment line.
Polytope read_polytope(std::istream& in, std::optional<Vector> witness = std::nullopt);
Polytope read_polytope_file(const std::string& path,
                            std::optional<Vector> witness = std::nullopt);
void write_polytope(std::ostream& out, const Polytope& P);

}  // namespace dikin
