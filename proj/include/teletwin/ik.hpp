#pragma once

#include <limits>
#include <stdexcept>

#include "teletwin/chain.hpp"

namespace teletwin {

template <typename Scalar> struct IkConfig {
  int max_iterations = 50;
  Scalar position_tolerance = Scalar(1e-7);    // m
  Scalar orientation_tolerance = Scalar(1e-7); // rad
  Scalar damping_lambda = Scalar(1e-2);
  /// Above this Jacobian condition number the update switches to damped least squares.
  Scalar condition_threshold = Scalar(1e6);
  Scalar step_clamp = Scalar(0.2); // rad per iteration, ∞-norm

  void validate() const {
    if (max_iterations <= 0 || !(position_tolerance > 0) || !(orientation_tolerance > 0) ||
        !(damping_lambda > 0) || !(condition_threshold > 0) || !(step_clamp > 0)) {
      throw std::invalid_argument("ik config: all parameters must be strictly positive");
    }
  }
};

enum class IkStatus { Converged, MaxIterations, Diverged };

inline const char *to_string(IkStatus s) {
  switch (s) {
  case IkStatus::Converged:
    return "converged";
  case IkStatus::MaxIterations:
    return "max_iterations";
  case IkStatus::Diverged:
    return "diverged";
  }
  return "unknown";
}

template <typename Scalar> struct IkResult {
  JointVector<Scalar> theta;
  int iterations = 0;
  PoseVector<Scalar> residual;
  IkStatus status = IkStatus::MaxIterations;
};

using IkConfigd = IkConfig<double>;
using IkResultd = IkResult<double>;

namespace detail {

template <typename Scalar> JointVector<Scalar> wrap_and_clamp(const KinematicChain<Scalar> &chain, JointVector<Scalar> q) {
  for (int i = 0; i < kChainJoints; ++i) {
    q[i] = wrap_angle(q[i]);
  }
  return clamp_to_limits(chain, q);
}

template <typename Scalar> bool within_tolerance(const PoseVector<Scalar> &e, const IkConfig<Scalar> &cfg) {
  return e.template head<3>().norm() < cfg.position_tolerance && e.template tail<3>().norm() < cfg.orientation_tolerance;
}

} // namespace detail

/// Newton-Raphson inverse kinematics: θ ← θ + J⁻¹(θ)·pose_error(target, f(θ)).
///
/// The Jacobian inverse is taken from its SVD; when the condition number
/// exceeds cfg.condition_threshold the update uses damped least squares,
/// (JᵀJ + λ²I)⁻¹Jᵀ. Each step is clamped in ∞-norm to cfg.step_clamp and the
/// iterate is wrapped to (−π, π] and clamped to the joint limits. Five
/// consecutive residual increases report Diverged. On failure the iterate
/// with the smallest residual norm is returned.
template <typename Scalar>
IkResult<Scalar> solve_ik(const KinematicChain<Scalar> &chain, const Pose<Scalar> &target, const JointVector<Scalar> &seed,
                          const IkConfig<Scalar> &cfg) {
  constexpr int kDivergenceRun = 5;

  JointVector<Scalar> theta = detail::wrap_and_clamp(chain, seed);
  PoseVector<Scalar> error = pose_error(target, forward_kinematics(chain, theta));
  Scalar norm = error.norm();

  IkResult<Scalar> best{theta, 0, error, IkStatus::MaxIterations};
  Scalar best_norm = norm;
  int growth_run = 0;

  for (int it = 1; it <= cfg.max_iterations; ++it) {
    if (detail::within_tolerance(error, cfg)) {
      return {theta, it - 1, error, IkStatus::Converged};
    }

    const Matrix6<Scalar> jac = geometric_jacobian(chain, theta);
    Eigen::JacobiSVD<Matrix6<Scalar>> svd(jac, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Vector6<Scalar> &sigma = svd.singularValues();
    const Scalar condition = sigma[5] > Scalar(0) ? sigma[0] / sigma[5] : std::numeric_limits<Scalar>::infinity();

    const Vector6<Scalar> projected = svd.matrixU().transpose() * error;
    Vector6<Scalar> scaled;
    if (condition > cfg.condition_threshold) {
      const Scalar lambda2 = cfg.damping_lambda * cfg.damping_lambda;
      scaled = (sigma.array() / (sigma.array().square() + lambda2)) * projected.array();
    } else {
      scaled = projected.array() / sigma.array();
    }
    JointVector<Scalar> step = svd.matrixV() * scaled;

    const Scalar step_norm = step.cwiseAbs().maxCoeff();
    if (step_norm > cfg.step_clamp) {
      step *= cfg.step_clamp / step_norm;
    }

    theta = detail::wrap_and_clamp(chain, JointVector<Scalar>(theta + step));
    error = pose_error(target, forward_kinematics(chain, theta));
    const Scalar next_norm = error.norm();

    growth_run = next_norm > norm ? growth_run + 1 : 0;
    norm = next_norm;
    if (norm < best_norm) {
      best_norm = norm;
      best.theta = theta;
      best.residual = error;
    }
    best.iterations = it;

    if (detail::within_tolerance(error, cfg)) {
      return {theta, it, error, IkStatus::Converged};
    }
    if (growth_run >= kDivergenceRun) {
      best.status = IkStatus::Diverged;
      return best;
    }
  }
  best.status = IkStatus::MaxIterations;
  return best;
}

} // namespace teletwin
