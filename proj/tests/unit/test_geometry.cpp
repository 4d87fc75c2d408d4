#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "dikin/error.hpp"
#include "dikin/geometry.hpp"
#include "dikin/targets.hpp"

using namespace dikin;

namespace {

Polytope interval() {
  Matrix A(2, 1);
  A << 1, -1;
  return Polytope::validate(A, Vector::Ones(2));
}

Vector v2(double a, double b) { return (Vector(2) << a, b).finished(); }
Vector v1(double a) { return (Vector(1) << a).finished(); }

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no exception";
  return ErrorCode::Parse;
}

}  // namespace

TEST(Polytope, UnitIntervalIsValid) {
  const Polytope P = interval();
  EXPECT_EQ(P.m(), 2);
  EXPECT_EQ(P.d(), 1);
  EXPECT_DOUBLE_EQ(P.witness()[0], 0.0);
}

TEST(Polytope, DegenerateSlabIsEmpty) {
  Matrix A(2, 1);
  A << 1, -1;
  EXPECT_EQ(code_of([&] { Polytope::validate(A, Vector::Zero(2)); }), ErrorCode::EmptyInterior);
}

TEST(Polytope, ZeroRowRejected) {
  Matrix A(2, 2);
  A << 1, 0, 0, 0;
  EXPECT_EQ(code_of([&] { Polytope::validate(A, Vector::Ones(2)); }), ErrorCode::ZeroRow);
}

TEST(Polytope, ShapeMismatch) {
  Matrix A(2, 2);
  A << 1, 0, 0, 1;
  EXPECT_EQ(code_of([&] { Polytope::validate(A, Vector::Ones(3)); }), ErrorCode::ShapeMismatch);
  EXPECT_EQ(code_of([&] { Polytope::validate(A, Vector::Ones(2), Vector::Zero(3)); }),
            ErrorCode::ShapeMismatch);
}

TEST(Polytope, WitnessMustBeInterior) {
  const Polytope B = box(2, 1.0);
  EXPECT_EQ(code_of([&] { Polytope::validate(B.A(), B.b(), v2(1, 0)); }), ErrorCode::EmptyInterior);
}

TEST(Polytope, UnitBoxFromSignedIdentity) {
  const Polytope P = box(2, 1.0);
  EXPECT_EQ(P.m(), 4);
  EXPECT_TRUE(contains_interior(P, v2(0, 0)));
}

TEST(Slacks, BoxCenter) {
  const Vector s = slacks(box(2, 1.0), v2(0, 0));
  EXPECT_EQ(s, Vector::Ones(4));
}

TEST(Slacks, IntervalValues) {
  const Polytope P = interval();
  const Vector s = slacks(P, v1(0.5));
  EXPECT_DOUBLE_EQ(s[0], 0.5);
  EXPECT_DOUBLE_EQ(s[1], 1.5);
  const Vector t = slacks(P, v1(2.0));
  EXPECT_DOUBLE_EQ(t[0], -1.0);
  EXPECT_DOUBLE_EQ(t[1], 3.0);
  EXPECT_FALSE(contains_interior(P, v1(2.0)));
}

TEST(ContainsInterior, StrictBoundary) {
  const Polytope P = box(2, 1.0);
  EXPECT_TRUE(contains_interior(P, v2(0.999, 0)));
  EXPECT_FALSE(contains_interior(P, v2(1, 0)));
  EXPECT_FALSE(contains_interior(P, v2(1.5, 0)));
}

TEST(Chord, AxisAligned) {
  const Chord c = chord_endpoints(box(2, 1.0), v2(0, 0), v2(0.5, 0));
  EXPECT_NEAR((c.p - v2(-1, 0)).norm(), 0.0, 1e-15);
  EXPECT_NEAR((c.q - v2(1, 0)).norm(), 0.0, 1e-15);
}

TEST(Chord, Interval) {
  const Chord c = chord_endpoints(interval(), v1(0.2), v1(0.4));
  EXPECT_NEAR(c.p[0], -1.0, 1e-15);
  EXPECT_NEAR(c.q[0], 1.0, 1e-15);
}

TEST(Chord, Diagonal) {
  const Chord c = chord_endpoints(box(2, 1.0), v2(0, 0), v2(0.5, 0.5));
  EXPECT_NEAR((c.p - v2(-1, -1)).norm(), 0.0, 1e-15);
  EXPECT_NEAR((c.q - v2(1, 1)).norm(), 0.0, 1e-15);
}

TEST(Chord, Errors) {
  const Polytope P = box(2, 1.0);
  EXPECT_EQ(code_of([&] { chord_endpoints(P, v2(0, 0), v2(0, 0)); }), ErrorCode::DegenerateDirection);
  EXPECT_EQ(code_of([&] { chord_endpoints(P, v2(0, 0), v2(2, 0)); }), ErrorCode::NotInterior);
  Matrix A(1, 2);
  A << 1, 0;
  const Polytope half = Polytope::validate(A, Vector::Ones(1));
  EXPECT_EQ(code_of([&] { chord_endpoints(half, v2(0, 0), v2(0, 0.5)); }), ErrorCode::UnboundedChord);
}

TEST(Chord, EndpointsActiveAndCollinear) {
  const Polytope P = simplex(3);
  Rng rng(17);
  for (int t = 0; t < 200; ++t) {
    const Vector u = radial_interior_point(P, rng);
    const Vector v = radial_interior_point(P, rng);
    const Chord c = chord_endpoints(P, u, v);
    for (const Vector* e : {&c.p, &c.q}) {
      const Vector s = slacks(P, *e);
      double best = 1e300;
      for (Index j = 0; j < P.m(); ++j) best = std::min(best, std::abs(s[j]) / (1 + std::abs(P.b()[j])));
      EXPECT_LE(best, 1e-9);
    }
    const Vector dir = (v - u).normalized();
    for (const Vector* e : {&c.p, &c.q}) {
      const Vector w = *e - u;
      EXPECT_LE((w - dir * dir.dot(w)).norm(), 1e-9);
    }
    // ordering p, u, v, q along dir
    EXPECT_LT(dir.dot(c.p - u), 0.0);
    EXPECT_GT(dir.dot(c.q - v), 0.0);
  }
}

TEST(CrossRatio, HandValues) {
  EXPECT_DOUBLE_EQ(cross_ratio(box(2, 1.0), v2(0.1, 0.2), v2(0.1, 0.2)), 0.0);
  EXPECT_NEAR(cross_ratio(box(2, 1.0), v2(0, 0), v2(0.5, 0)), 2.0, 1e-14);
  EXPECT_NEAR(cross_ratio(interval(), v1(0), v1(0.9)), 18.0, 1e-12);
}

TEST(CrossRatio, Symmetric) {
  const Polytope P = l1_ball(3, 1.0);
  Rng rng(8);
  for (int t = 0; t < 300; ++t) {
    const Vector u = radial_interior_point(P, rng);
    const Vector v = radial_interior_point(P, rng);
    const double a = cross_ratio(P, u, v), b = cross_ratio(P, v, u);
    EXPECT_NEAR(a, b, 1e-9 * std::max(1.0, a));
  }
}

TEST(CrossRatio, NotInterior) {
  EXPECT_EQ(code_of([&] { cross_ratio(box(2, 1.0), v2(0, 0), v2(1, 0)); }), ErrorCode::NotInterior);
}

TEST(InscribedRadius, Examples) {
  EXPECT_DOUBLE_EQ(inscribed_radius_at(box(2, 1.0), v2(0, 0)).radius, 1.0);
  EXPECT_DOUBLE_EQ(inscribed_radius_at(interval(), v1(0.5)).radius, 0.5);
  const InnerBall b = inscribed_radius_at(simplex(2), v2(1.0 / 3, 1.0 / 3));
  EXPECT_NEAR(b.radius, 1.0 / (3.0 * std::sqrt(2.0)), 1e-15);
  EXPECT_EQ(code_of([&] { inscribed_radius_at(box(2, 1.0), v2(3, 0)); }), ErrorCode::NotInterior);
}

TEST(RayExit, BoxAndUnbounded) {
  EXPECT_NEAR(ray_exit_distance(box(2, 1.0), v2(0, 0), v2(1, 1)), 1.0, 1e-15);
  Matrix A(1, 2);
  A << 1, 0;
  const Polytope half = Polytope::validate(A, Vector::Ones(1));
  EXPECT_TRUE(std::isinf(ray_exit_distance(half, v2(0, 0), v2(-1, 0))));
}

TEST(InteriorEquivalence, SlackSign) {
  const Polytope P = simplex(2);
  Rng rng(4);
  for (int t = 0; t < 1000; ++t) {
    const Vector x = v2(rng.uniform() * 1.5 - 0.25, rng.uniform() * 1.5 - 0.25);
    EXPECT_EQ(contains_interior(P, x), slacks(P, x).minCoeff() > 0.0);
  }
}

TEST(RadialPoints, AlwaysInterior) {
  for (const Polytope& P : {box(4, 2.0), simplex(4), l1_ball(4, 1.0)}) {
    Rng rng(6);
    for (int t = 0; t < 500; ++t) EXPECT_TRUE(contains_interior(P, radial_interior_point(P, rng)));
  }
}

TEST(TextFormat, ReadWithComments) {
  std::istringstream in(
      "# square\n"
      "4 2\n"
      "1 0 1\n"
      "-1 0 1\n"
      "# middle comment\n"
      "0 1 1\n"
      "0 -1 1\n");
  const Polytope P = read_polytope(in);
  EXPECT_EQ(P.m(), 4);
  EXPECT_EQ(P.d(), 2);
  EXPECT_DOUBLE_EQ(P.A()(1, 0), -1.0);
}

TEST(TextFormat, RoundTrip) {
  const Polytope P = simplex(3);
  std::stringstream io;
  write_polytope(io, P);
  const Polytope Q = read_polytope(io, P.witness());
  EXPECT_EQ(P.A(), Q.A());
  EXPECT_EQ(P.b(), Q.b());
}

TEST(TextFormat, Malformed) {
  std::istringstream short_rows("3 2\n1 0 1\n-1 0 1\n");
  EXPECT_EQ(code_of([&] { read_polytope(short_rows); }), ErrorCode::Parse);
  std::istringstream junk("2 1\n1 x\n-1 1\n");
  EXPECT_EQ(code_of([&] { read_polytope(junk); }), ErrorCode::Parse);
  EXPECT_EQ(code_of([&] { read_polytope_file("/nonexistent/poly.txt"); }), ErrorCode::Parse);
}

TEST(TextFormat, FileFromDataDir) {
  const Polytope P = read_polytope_file(std::string(DIKIN_TEST_DATA_DIR) + "/square.txt");
  EXPECT_EQ(P.m(), 4);
  EXPECT_TRUE(contains_interior(P, v2(0.5, -0.5)));
}
