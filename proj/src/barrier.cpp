#include "dikin/barrier.hpp"

#include <cmath>
#include <numbers>

#include "dikin/error.hpp"

namespace dikin {

void SoftThresholdParams::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw Error(ErrorCode::InvalidArgument, "alpha must be positive and finite");
  }
  if (!(eta_inv >= 0.0) || !std::isfinite(eta_inv)) {
    throw Error(ErrorCode::InvalidArgument, "eta_inv must be nonnegative and finite");
  }
}

namespace {

Vector checked_slacks(const Polytope& P, const Vector& x) {
  Vector s = slacks(P, x);
  const double smin = s.minCoeff();
  if (!(smin > 0.0)) throw Error(ErrorCode::NotInterior, "barrier evaluated outside Int(K)");
  if (smin < kMinSlack) throw Error(ErrorCode::NumericalUnderflow, "slack below 1e-150");
  return s;
}

}  // namespace

Matrix log_barrier_hessian(const Polytope& P, const Vector& x) {
  const Vector s = checked_slacks(P, x);
  // C is d x m with columns a_j / s_j (the sign of the slack drops out).
  const Matrix C = P.A().transpose() * s.cwiseInverse().asDiagonal();
  Matrix H = Matrix::Zero(P.d(), P.d());
  H.selfadjointView<Eigen::Lower>().rankUpdate(C);
  return H.selfadjointView<Eigen::Lower>();
}

Vector log_barrier_gradient(const Polytope& P, const Vector& x) {
  const Vector s = checked_slacks(P, x);
  return P.A().transpose() * s.cwiseInverse();
}

BarrierAt::BarrierAt(Vector theta, Matrix H, const SoftThresholdParams& params)
    : theta_(std::move(theta)), H_(std::move(H)) {
  params.validate();
  if (H_.rows() != H_.cols() || H_.rows() != theta_.size()) {
    throw Error(ErrorCode::ShapeMismatch, "H must be d x d");
  }
  Phi_ = H_ / params.alpha;
  Phi_.diagonal().array() += params.eta_inv;
  llt_.compute(Phi_);
  if (llt_.info() != Eigen::Success) {
    throw Error(ErrorCode::NotPositiveDefinite, "soft-threshold matrix is not positive definite");
  }
  const auto diag = llt_.matrixLLT().diagonal();
  if (!(diag.minCoeff() > 0.0) || !diag.allFinite()) {
    throw Error(ErrorCode::NotPositiveDefinite, "soft-threshold matrix is singular");
  }
  log_det_ = 2.0 * diag.array().log().sum();
}

BarrierAt soft_threshold_matrix(const Vector& theta, const Matrix& H,
                                const SoftThresholdParams& params) {
  return BarrierAt(theta, H, params);
}

BarrierAt barrier_at(const Polytope& P, const Vector& x, const SoftThresholdParams& params) {
  return BarrierAt(x, log_barrier_hessian(P, x), params);
}

double local_norm(const BarrierAt& at, const Vector& v) {
  return (at.llt().matrixU() * v).norm();
}

Vector proposal_from_noise(const BarrierAt& at, const Vector& xi) {
  return at.theta() + at.llt().matrixU().solve(xi);
}

Vector sample_proposal(const BarrierAt& at, Rng& rng) {
  return proposal_from_noise(at, rng.normal_vector(at.d()));
}

double proposal_log_density(const BarrierAt& at, const Vector& z) {
  const double r = local_norm(at, z - at.theta());
  const double d = static_cast<double>(at.d());
  return 0.5 * at.log_det_Phi() - 0.5 * d * std::log(2.0 * std::numbers::pi) - 0.5 * r * r;
}

}  // namespace dikin
