#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include <Eigen/LU>

#include "dikin/diagnostics.hpp"
#include "dikin/error.hpp"
#include "dikin/walk.hpp"

using namespace dikin;

namespace {

Polytope interval() {
  Matrix A(2, 1);
  A << 1, -1;
  return Polytope::validate(A, Vector::Ones(2));
}

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

// Classical Dikin-walk log acceptance ratio written directly from the
// Hessians, independent of BarrierAt.
double classical_dikin_log_ratio(const Polytope& P, double alpha, const Vector& x, const Vector& z) {
  const Matrix Hx = log_barrier_hessian(P, x) / alpha;
  const Matrix Hz = log_barrier_hessian(P, z) / alpha;
  const Vector dz = z - x;
  const double ldx = std::log(Hx.determinant());
  const double ldz = std::log(Hz.determinant());
  return 0.5 * (ldz - ldx) - 0.5 * dz.dot(Hz * dz) + 0.5 * dz.dot(Hx * dz);
}

}  // namespace

TEST(Hyperparameters, Examples) {
  const SoftThresholdParams a = default_hyperparameters(10, Lipschitz{1.0});
  EXPECT_NEAR(a.alpha, 1e-6, 1e-21);
  EXPECT_NEAR(a.eta_inv, 1e5, 1e-9);
  const SoftThresholdParams b = default_hyperparameters(1, Smooth{0.0});
  EXPECT_EQ(b.eta_inv, 0.0);
  WalkConstants c;
  c.c_eta = 1.0;
  EXPECT_DOUBLE_EQ(default_hyperparameters(4, Smooth{2.0}, c).eta_inv, 8.0);
}

TEST(Hyperparameters, BothTakesConservativeStep) {
  WalkConstants c;
  c.c_eta = 1.0;
  c.c_alpha = 1.0;
  EXPECT_DOUBLE_EQ(default_hyperparameters(2, LipschitzSmooth{3.0, 2.0}, c).eta_inv, 18.0);
  EXPECT_DOUBLE_EQ(default_hyperparameters(2, LipschitzSmooth{1.0, 5.0}, c).eta_inv, 10.0);
  EXPECT_DOUBLE_EQ(default_hyperparameters(2, LipschitzSmooth{1.0, 5.0}, c).alpha, 0.5);
}

TEST(StepCount, FormulaEvaluation) {
  // m=4, 1/alpha=10, eta_inv=0, log(w/delta)=2, c_T=1 -> 160
  const SoftThresholdParams p{0.1, 0.0};
  const double w = std::exp(1.0), delta = std::exp(-1.0);
  EXPECT_EQ(step_count(4, p, 1.0, w, delta, 1.0), 160u);
}

TEST(StepCount, HalvingDeltaAddsLog2) {
  const SoftThresholdParams p{0.05, 3.0};
  const auto t1 = step_count(6, p, 2.0, 10.0, 0.1, 1.0);
  const auto t2 = step_count(6, p, 2.0, 10.0, 0.05, 1.0);
  const double expect = (2 * 6 / 0.05 + 3.0 * 4.0) * std::log(2.0);
  EXPECT_NEAR(double(t2) - double(t1), expect, 1.0);
}

TEST(StepCount, PaperDefaultsAreAstronomical) {
  const SoftThresholdParams p = default_hyperparameters(10, Lipschitz{1.0});
  const auto T = step_count(20, p, 1.0, std::exp(1.0), 1.0 - 1e-12, 1e9);
  EXPECT_NEAR(double(T), 1e9 * (2 * 20 * 1e6 + 1e5), 1e9 * 1e2);
}

TEST(StepCount, Overflow) {
  const SoftThresholdParams p = default_hyperparameters(100, Lipschitz{10.0});
  EXPECT_EQ(code_of([&] { step_count(1000, p, 10.0, 1e300, 1e-10, 1e9); }), ErrorCode::Overflow);
}

TEST(Warmness, Examples) {
  EXPECT_DOUBLE_EQ(warmness_bound(1, 1.0, 1.0, 0.0).value, 1.0);
  EXPECT_NEAR(warmness_bound(2, 2.0, 1.0, 0.0).value, 4.0, 1e-14);
  const Warmness w = warmness_bound(10, 10.0, 1.0, 5.0);
  EXPECT_NEAR(w.value / 1.4841315910257660e12, 1.0, 1e-12);
  EXPECT_FALSE(w.overflow);
  const Warmness big = warmness_bound(1000, 100.0, 1.0, 0.0);
  EXPECT_TRUE(big.overflow);
  EXPECT_TRUE(std::isinf(big.value));
}

TEST(WarmStart, DegenerateRadius) {
  const Polytope P = box(2, 1.0);
  Rng rng(1);
  const Vector c = (Vector(2) << 0.3, 0.1).finished();
  EXPECT_EQ(warm_start_uniform_ball({c, 0.0}, P, rng), c);
}

TEST(WarmStart, UniformDiskLaw) {
  const Polytope P = box(2, 1.0);
  const InnerBall ball = inscribed_radius_at(P, Vector::Zero(2));
  Rng rng(2);
  const int n = 100000;
  std::vector<double> radii;
  Vector mean = Vector::Zero(2);
  for (int i = 0; i < n; ++i) {
    const Vector x = warm_start_uniform_ball(ball, P, rng);
    ASSERT_TRUE(contains_interior(P, x));
    mean += x;
    radii.push_back(x.norm());
  }
  mean /= n;
  EXPECT_LE(mean.norm(), 0.01 * ball.radius);
  const double ks = kolmogorov_distance(radii, [](double r) { return std::clamp(r * r, 0.0, 1.0); });
  EXPECT_LE(ks, 0.01);
}

TEST(MakeState, InvalidStart) {
  const Polytope P = box(2, 1.0);
  EXPECT_EQ(code_of([&] { make_state(P, uniform_target(1.0), {1.0, 0.0}, Vector::Constant(2, 1.0)); }),
            ErrorCode::InvalidStart);
}

TEST(AcceptanceRatio, IdentityProposal) {
  const Polytope P = box(2, 1.0);
  const TargetSpec f = quadratic_target(2.0, Vector::Zero(2), 1.5);
  const ChainState s = make_state(P, f, {0.3, 1.0}, Vector::Constant(2, 0.2));
  for (auto v : {AcceptanceVariant::ExactMH, AcceptanceVariant::PaperLiteral}) {
    EXPECT_EQ(acceptance_log_ratio(s, s.at, s.f_value, v), 0.0);
  }
}

TEST(AcceptanceRatio, UnitIntervalHandValue) {
  const Polytope P = interval();
  const TargetSpec f = uniform_target(1.0);
  const ChainState s = make_state(P, f, {1.0, 0.0}, v1(0.0));
  const BarrierAt z = barrier_at(P, v1(0.5), {1.0, 0.0});
  const double h0 = 2.0, h1 = 40.0 / 9.0;
  const double expect = 0.5 * std::log(h1 / h0) + 0.5 * 0.25 * h0 - 0.5 * 0.25 * h1;
  EXPECT_NEAR(acceptance_log_ratio(s, z, 0.0, AcceptanceVariant::ExactMH), expect, 1e-14);
  const double literal = 0.5 * std::log(h1 / h0) + 0.25 * h0 - 0.25 * h1;
  EXPECT_NEAR(acceptance_log_ratio(s, z, 0.0, AcceptanceVariant::PaperLiteral), literal, 1e-14);
}

TEST(AcceptanceRatio, Antisymmetric) {
  const Polytope P = box(2, 1.0);
  const Matrix X = (Matrix(2, 2) << 0.5, 0.5, -0.7, 0.1).finished();
  const TargetSpec f = logistic_lasso_target(X, Vector::Ones(2), 1.0, 1.5);
  const SoftThresholdParams p{0.4, 2.0};
  Rng rng(4);
  for (int k = 0; k < 100; ++k) {
    const Vector a = radial_interior_point(P, rng), b = radial_interior_point(P, rng);
    const ChainState sa = make_state(P, f, p, a), sb = make_state(P, f, p, b);
    for (auto v : {AcceptanceVariant::ExactMH, AcceptanceVariant::PaperLiteral}) {
      const double fwd = acceptance_log_ratio(sa, sb.at, sb.f_value, v);
      const double bwd = acceptance_log_ratio(sb, sa.at, sa.f_value, v);
      EXPECT_NEAR(fwd, -bwd, 1e-12 * std::max(1.0, std::abs(fwd)));
    }
  }
}

TEST(AcceptanceRatio, VanillaReduction) {
  const Polytope P = simplex(3);
  const TargetSpec f = uniform_target(1.0);
  const double alpha = 0.7;
  Rng rng(5);
  for (int k = 0; k < 100; ++k) {
    const Vector x = radial_interior_point(P, rng), z = radial_interior_point(P, rng);
    const ChainState s = make_state(P, f, {alpha, 0.0}, x);
    const BarrierAt zat = barrier_at(P, z, {alpha, 0.0});
    const double got = acceptance_log_ratio(s, zat, 0.0, AcceptanceVariant::ExactMH);
    const double ref = classical_dikin_log_ratio(P, alpha, x, z);
    EXPECT_NEAR(got, ref, 1e-12 * std::max(1.0, std::abs(ref)));
  }
}

TEST(Step, ZeroNoiseAcceptsAtLaziness) {
  const Polytope P = box(2, 1.0);
  const TargetSpec f = uniform_target(1.5);
  WalkConfig cfg;
  cfg.params = {0.5, 0.0};
  ChainState s = make_state(P, f, cfg.params, Vector::Zero(2));
  const Vector xi = Vector::Zero(2);
  const StepOutcome ok = step_from_draws(s, P, f, cfg, xi, 0.4999);
  EXPECT_EQ(ok.kind, StepKind::Accepted);
  ASSERT_TRUE(ok.log_ratio.has_value());
  EXPECT_EQ(*ok.log_ratio, 0.0);
  EXPECT_EQ(s.step_index, 1u);
  const StepOutcome lazy = step_from_draws(s, P, f, cfg, xi, 0.5);
  EXPECT_EQ(lazy.kind, StepKind::RejectedLazy);
}

TEST(Step, OutsideLeavesStateIdentical) {
  const Polytope P = box(2, 1.0);
  const TargetSpec f = quadratic_target(1.0, Vector::Zero(2), 1.5);
  WalkConfig cfg;
  cfg.params = {1.0, 0.0};
  ChainState s = make_state(P, f, cfg.params, Vector::Constant(2, 0.9));
  const Vector theta = s.theta();
  const Matrix Phi = s.at.Phi();
  const double fv = s.f_value;
  const Vector xi = Vector::Constant(2, 500.0);
  const StepOutcome out = step_from_draws(s, P, f, cfg, xi, 0.0);
  EXPECT_EQ(out.kind, StepKind::RejectedOutside);
  EXPECT_FALSE(out.log_ratio.has_value());
  EXPECT_EQ(s.theta(), theta);
  EXPECT_EQ(s.at.Phi(), Phi);
  EXPECT_EQ(s.f_value, fv);
  EXPECT_EQ(s.step_index, 0u);
}

TEST(Step, MhRejection) {
  const Polytope P = box(1, 1.0);
  const TargetSpec f = linear_target(v1(1000.0), 1.0);
  WalkConfig cfg;
  cfg.params = {1.0, 0.0};
  ChainState s = make_state(P, f, cfg.params, v1(0.0));
  const StepOutcome out = step_from_draws(s, P, f, cfg, v1(0.5), 0.2);
  ASSERT_EQ(out.kind, StepKind::RejectedMH);
  EXPECT_LT(*out.log_ratio, std::log(0.2 / 0.5));
}

TEST(Step, NanPotentialThrows) {
  const Polytope P = box(1, 1.0);
  const TargetSpec f = custom_target([](const Vector& x) { return x[0] > 0.0 ? NAN : 0.0; }, Smooth{0.0}, 1.0);
  WalkConfig cfg;
  cfg.params = {1.0, 0.0};
  ChainState s = make_state(P, f, cfg.params, v1(-0.1));
  EXPECT_THROW(step_from_draws(s, P, f, cfg, v1(0.5), 0.1), Error);
}

TEST(Step, EmpiricalAcceptanceNeverExceedsLaziness) {
  const Polytope P = box(3, 1.0);
  const TargetSpec f = uniform_target(std::sqrt(3.0));
  for (double lazy : {0.5, 0.8}) {
    WalkConfig cfg;
    cfg.params = {1e-4, 0.0};
    cfg.laziness = lazy;
    cfg.steps = 20000;
    Rng rng(6);
    const RunReport r = run_chain(Vector::Zero(3), f, P, cfg, 1, rng);
    EXPECT_LE(r.mean_accept_prob, lazy + 1e-15);
    const double rate = double(r.accepted) / r.steps;
    EXPECT_LE(rate, lazy + 3 * std::sqrt(lazy * (1 - lazy) / r.steps));
  }
}

TEST(RunChain, ZeroStepsKeepsStart) {
  const Polytope P = box(2, 1.0);
  WalkConfig cfg;
  cfg.steps = 0;
  Rng rng(1);
  const Vector x0 = (Vector(2) << 0.1, 0.2).finished();
  const RunReport r = run_chain(x0, uniform_target(1.5), P, cfg, 1, rng);
  ASSERT_EQ(r.samples.rows(), 1);
  EXPECT_EQ(Vector(r.samples.row(0).transpose()), x0);
}

TEST(RunChain, InvalidStart) {
  const Polytope P = box(2, 1.0);
  WalkConfig cfg;
  Rng rng(1);
  EXPECT_EQ(code_of([&] { run_chain(Vector::Constant(2, 2.0), uniform_target(1.5), P, cfg, 1, rng); }),
            ErrorCode::InvalidStart);
}

TEST(RunChain, DeterministicAndThinned) {
  const Polytope P = simplex(2);
  const TargetSpec f = quadratic_target(2.0, Vector::Zero(2), 1.0);
  WalkConfig cfg;
  cfg.params = {0.2, 1.0};
  cfg.steps = 1000;
  Rng a(10), b(10);
  const RunReport r1 = run_chain(P.witness(), f, P, cfg, 7, a);
  const RunReport r2 = run_chain(P.witness(), f, P, cfg, 7, b);
  EXPECT_EQ(r1.samples, r2.samples);
  EXPECT_EQ(r1.accepted, r2.accepted);
  EXPECT_EQ(r1.samples.rows(), 1 + 1000 / 7);
  EXPECT_EQ(r1.accepted + r1.rejected_outside + r1.rejected_mh + r1.rejected_lazy, 1000u);
  EXPECT_GT(r1.step_norms.mean, 0.0);
  EXPECT_GE(r1.step_norms.max, r1.step_norms.mean);
}

TEST(RunChain, CountsMatchSteps) {
  const Polytope P = box(2, 1.0);
  WalkConfig cfg;
  cfg.params = {5.0, 0.0};  // large steps, many exits
  cfg.steps = 5000;
  Rng rng(11);
  const RunReport r = run_chain(Vector::Zero(2), uniform_target(1.5), P, cfg, 1, rng);
  EXPECT_GT(r.rejected_outside, 0u);
  EXPECT_EQ(r.samples.rows(), 5001);
}

TEST(RunChain, TruncatedGaussianInInterval) {
  // Short 1-d check against the analytic mean 0 and a quadrature variance.
  const Polytope P = box(1, 1.0);
  const TargetSpec f = quadratic_target(4.0, Vector::Zero(1), 1.0);
  WalkConstants c;
  c.c_alpha = 1.0;
  c.c_eta = 1.0;
  WalkConfig cfg;
  cfg.params = default_hyperparameters(1, f.smoothness, c);
  cfg.steps = 200000;
  Rng rng(12);
  const RunReport r = run_chain(Vector::Zero(1), f, P, cfg, 10, rng);
  const Vector x = r.samples.col(0);
  double num = 0, den = 0;
  for (int i = 0; i < 20000; ++i) {
    const double t = -1 + (i + 0.5) / 10000.0;
    const double w = std::exp(-2 * t * t);
    num += t * t * w;
    den += w;
  }
  const double var = num / den;
  EXPECT_NEAR(x.mean(), 0.0, 0.02);
  EXPECT_NEAR(x.squaredNorm() / x.size(), var, 0.02);
}

TEST(Config, Validation) {
  WalkConfig cfg;
  cfg.laziness = 0.0;
  EXPECT_EQ(code_of([&] { cfg.validate(); }), ErrorCode::InvalidArgument);
  cfg.laziness = 1.0;
  cfg.validate();
  cfg.constants.c_T = -1;
  EXPECT_EQ(code_of([&] { cfg.validate(); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(parse_variant("literal"), AcceptanceVariant::PaperLiteral);
  EXPECT_EQ(parse_variant("exact"), AcceptanceVariant::ExactMH);
  EXPECT_EQ(code_of([] { parse_variant("bogus"); }), ErrorCode::InvalidArgument);
}
