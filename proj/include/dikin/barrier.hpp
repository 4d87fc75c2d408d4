#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "dikin/geometry.hpp"
#include "dikin/rng.hpp"

namespace dikin {

/// Phi = H / alpha + eta_inv * I. eta_inv == 0 is the plain Dikin walk.
struct SoftThresholdParams {
  double alpha = 1.0;
  double eta_inv = 0.0;

  void validate() const;
};

/// Slacks below this are treated as a numerical failure rather than letting
/// 1/s^2 overflow to infinity.
inline constexpr double kMinSlack = 1e-150;

/// Log-barrier Hessian sum_j a_j a_j^T / s_j^2, assembled as C C^T with
/// columns a_j / s_j.
Matrix log_barrier_hessian(const Polytope& P, const Vector& x);

/// Gradient of -sum_j log s_j, i.e. sum_j a_j / s_j.
Vector log_barrier_gradient(const Polytope& P, const Vector& x);

/// Soft-threshold matrix at a point, together with its Cholesky factor
/// Phi = F F^T and log det Phi. Immutable once built.
class BarrierAt {
 public:
  BarrierAt(Vector theta, Matrix H, const SoftThresholdParams& params);

  const Vector& theta() const noexcept { return theta_; }
  const Matrix& H() const noexcept { return H_; }
  const Matrix& Phi() const noexcept { return Phi_; }
  /// Lower-triangular F with F F^T = Phi.
  Matrix factor() const { return llt_.matrixL(); }
  const Eigen::LLT<Matrix>& llt() const noexcept { return llt_; }
  double log_det_Phi() const noexcept { return log_det_; }
  Index d() const noexcept { return theta_.size(); }

 private:
  Vector theta_;
  Matrix H_;
  Matrix Phi_;
  Eigen::LLT<Matrix> llt_;
  double log_det_;
};

/// Builds Phi from H; throws NotPositiveDefinite if the factorization fails.
BarrierAt soft_threshold_matrix(const Vector& theta, const Matrix& H,
                                const SoftThresholdParams& params);

/// Convenience: Hessian plus soft-threshold matrix at x.
BarrierAt barrier_at(const Polytope& P, const Vector& x, const SoftThresholdParams& params);

/// sqrt(v^T Phi v), evaluated as |F^T v|.
double local_norm(const BarrierAt& at, const Vector& v);

/// theta + F^{-T} xi, which is N(theta, Phi^{-1}) for xi ~ N(0, I).
Vector proposal_from_noise(const BarrierAt& at, const Vector& xi);
Vector sample_proposal(const BarrierAt& at, Rng& rng);

/// log N(z; theta, Phi^{-1}).
double proposal_log_density(const BarrierAt& at, const Vector& z);

}  // namespace dikin
