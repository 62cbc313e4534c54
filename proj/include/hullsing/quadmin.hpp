#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Core>

#include "hullsing/errors.hpp"
#include "hullsing/polynomial.hpp"

namespace hullsing {

class GeneratingFamily;

/// Strictly convex quadratic ½pᵀQp + bᵀp + c0 restricted to the nonnegative orthant,
/// 1 ≤ dim ≤ 3. Q has unit diagonal and is positive definite.
class OrthantQP {
 public:
  /// Throws NotPositiveDefinite, DimensionMismatch or InvalidArgument (diagonal not 1, asymmetric).
  OrthantQP(Eigen::MatrixXd Q, Eigen::VectorXd b, double c0);

  /// dim = 3 with off-diagonal moduli: Q = [[1,a,b],[a,1,c],[b,c,1]].
  static OrthantQP from_moduli(double a, double b, double c, const Eigen::Vector3d& linear,
                               double c0);

  int dim() const { return static_cast<int>(b_.size()); }
  const Eigen::MatrixXd& Q() const { return Q_; }
  const Eigen::VectorXd& b() const { return b_; }
  double c0() const { return c0_; }

  double value(const Eigen::VectorXd& p) const { return 0.5 * p.dot(Q_ * p) + b_.dot(p) + c0_; }
  Eigen::VectorXd gradient(const Eigen::VectorXd& p) const { return Q_ * p + b_; }

 private:
  Eigen::MatrixXd Q_;
  Eigen::VectorXd b_;
  double c0_;
};

struct QPSolution {
  Eigen::VectorXd minimizer;
  double value = 0.0;
  /// Zero-based indices with minimizer component exactly 0.
  std::vector<int> active_set;
  double kkt_residual = 0.0;
  Eigen::VectorXd gradient;
};

/// All leading principal minors strictly positive.
bool leading_minors_positive(const Eigen::MatrixXd& Q);

/// Global minimizer over p ≥ 0 by enumerating the 2^dim faces and keeping the feasible
/// KKT point of least value.
QPSolution solve_orthant_qp(const OrthantQP& qp);

namespace detail {
/// Same enumeration for any symmetric positive definite Q (no unit-diagonal requirement).
QPSolution solve_orthant_qp_general(const Eigen::MatrixXd& Q, const Eigen::VectorXd& b, double c0);
}  // namespace detail

enum class AlphaKind { linear, plus_quadratic, minus_quadratic, constant };

const char* to_string(AlphaKind kind);
AlphaKind alpha_kind_from_string(const std::string& name);

/// α(z) for the angle normal forms: a+z, a+z², a−z² or a, with |a| < 1.
class AlphaProfile {
 public:
  AlphaProfile(AlphaKind kind, double a);

  AlphaKind kind() const { return kind_; }
  double a() const { return a_; }

  template <typename Scalar>
  Scalar operator()(const Scalar& z) const {
    switch (kind_) {
      case AlphaKind::linear: return Scalar(a_) + z;
      case AlphaKind::plus_quadratic: return Scalar(a_) + z * z;
      case AlphaKind::minus_quadratic: return Scalar(a_) - z * z;
      case AlphaKind::constant: break;
    }
    return Scalar(a_);
  }

  /// Angle β(z) = π − arccos α(z) of the coordinate angle in the induced metric.
  double beta(double z) const;

  /// α as a polynomial in z, written in family variables.
  Polynomial as_polynomial() const;

 private:
  AlphaKind kind_;
  double a_;
};

template <typename Scalar>
Scalar envelope_r0(const Scalar& /*x*/, const Scalar& /*y*/, const Scalar& /*z*/, const Scalar& t) {
  return t;
}

/// min over p ≥ 0 of p²/2 + px + t = t − min(x,0)²/2.
template <typename Scalar>
Scalar envelope_r1(const Scalar& x, const Scalar& /*y*/, const Scalar& /*z*/, const Scalar& t) {
  using std::min;
  Scalar m = min(x, Scalar(0));
  return t - m * m / Scalar(2);
}

/// min over p,q ≥ 0 of (p²+q²)/2 + α(z)pq + px + qy + t. Throws AlphaOutOfRange.
double envelope_r2(double x, double y, double z, double t, const AlphaProfile& profile);

/// Squared distance from (x,y) to the angle {x ≥ 0, y ≥ 0} in the metric
/// ds² = (dx² − 2α dx dy + dy²)/(1 − α²). Closed form over the two rays and the vertex.
double angle_distance_squared(double x, double y, double alpha);

struct R3Options {
  /// Evaluation box [0, box]^dim for the grid check and fallback.
  double box = 3.0;
  double grid_step = 0.1;
  bool validate_with_grid = true;
  int max_newton_iterations = 50;
  double newton_step_tol = 1e-12;
  double kkt_tol = 1e-9;
};

struct FiberMinimum {
  Eigen::Vector3d minimizer = Eigen::Vector3d::Zero();
  double value = 0.0;
  std::vector<int> active_set;
  bool from_grid = false;
};

/// Minimum of a polynomial family over the first `dim` fiber variables ≥ 0 (remaining fiber
/// variables held at 0) at the base point (x,y,z,t). Newton on each face, seeded by the
/// quadratic model at κ = 0.
FiberMinimum minimize_over_orthant(const CompiledPolynomial& family, bool quadratic_in_fiber,
                                   int dim, const Eigen::Vector4d& base, const R3Options& options);

/// min over (p,q,r) ≥ 0 of F(p,q,r;x,y,z,t). Throws NotPositiveDefinite, NonConvergence.
double envelope_r3(double x, double y, double z, double t, const GeneratingFamily& family,
                   const R3Options& options = {});

}  // namespace hullsing
