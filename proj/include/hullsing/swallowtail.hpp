#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "hullsing/errors.hpp"

namespace hullsing {

/// Coefficients of the monic quartic τ⁴ + uτ² + vτ + w.
struct QuarticPoint {
  double u = 0.0;
  double v = 0.0;
  double w = 0.0;

  QuarticPoint() = default;
  QuarticPoint(double u_, double v_, double w_) : u(u_), v(v_), w(w_) {}
  explicit QuarticPoint(const Eigen::Vector3d& x) : u(x[0]), v(x[1]), w(x[2]) {}

  Eigen::Vector3d vec() const { return {u, v, w}; }
  double operator()(double tau) const { return quartic_value(u, v, w, tau); }

  template <typename Scalar>
  static Scalar quartic_value(const Scalar& u, const Scalar& v, const Scalar& w, const Scalar& tau) {
    Scalar t2 = tau * tau;
    return t2 * t2 + u * t2 + v * tau + w;
  }
};

/// Real roots of τ³ + aτ + b (closed form, Newton-polished), ascending.
std::vector<double> depressed_cubic_roots(double a, double b);

struct QuarticMinimum {
  double value;
  double tau;
};

/// Global minimum over τ ∈ ℝ, taken over the real roots of 4τ³ + 2uτ + v.
QuarticMinimum quartic_min(const QuarticPoint& q);

/// Round-off allowance used by quartic_nonneg when no tolerance is given.
double quartic_tolerance(const QuarticPoint& q);

/// min_τ quartic ≥ −tol.
bool quartic_nonneg(const QuarticPoint& q);
bool quartic_nonneg(const QuarticPoint& q, double tol);

/// 32u³v² + 64u²w² + 144uv²w − 27v⁴ + 256w³.
template <typename Scalar>
Scalar discriminant(const Scalar& u, const Scalar& v, const Scalar& w) {
  Scalar u2 = u * u, v2 = v * v;
  return Scalar(32) * u2 * u * v2 + Scalar(64) * u2 * w * w + Scalar(144) * u * v2 * w -
         Scalar(27) * v2 * v2 + Scalar(256) * w * w * w;
}
inline double discriminant(const QuarticPoint& q) { return discriminant(q.u, q.v, q.w); }

/// Point of ∂V₃ where τ is a real double root: v = −4τ³ − 2uτ, w = 3τ⁴ + uτ², u ≥ −2τ².
class BoundaryChart {
 public:
  /// Throws ParamOutOfRange when u < −2τ².
  BoundaryChart(double tau, double u);

  double tau() const { return tau_; }
  double u() const { return u_; }
  double v() const { return -4.0 * tau_ * tau_ * tau_ - 2.0 * u_ * tau_; }
  double w() const { return 3.0 * tau_ * tau_ * tau_ * tau_ + u_ * tau_ * tau_; }
  QuarticPoint point() const { return {u_, v(), w()}; }

 private:
  double tau_;
  double u_;
};

/// Inward normal (τ², τ, 1) of the supporting half-space {τ²u + τv + w ≥ −τ⁴}.
inline Eigen::Vector3d v3_normal(double tau) { return {tau * tau, tau, 1.0}; }

/// Point (−2s², 0, s⁴) of the self-intersection edge of ∂V₃.
inline Eigen::Vector3d v3_edge(double s) { return {-2.0 * s * s, 0.0, s * s * s * s}; }

struct Projection {
  Eigen::Vector3d point = Eigen::Vector3d::Zero();
  Eigen::Vector3d foot = Eigen::Vector3d::Zero();
  double distance = 0.0;
  /// Double roots of the quartic at the foot whose normals span point − foot: one on the
  /// smooth part, two (±s) on the edge. Empty for members.
  std::vector<double> normal_taus;
  int iterations = 0;

  std::optional<double> normal_tau() const {
    if (normal_taus.empty()) return std::nullopt;
    return normal_taus.front();
  }
};

struct ProjectionOptions {
  int max_iterations = 200;
  double tol = 1e-10;
};

/// Euclidean projection onto V₃ by cutting planes. Throws NonConvergence at the iteration cap.
Projection project_to_v3(const Eigen::Vector3d& point, const ProjectionOptions& options = {});

/// Projection of (v,w) onto the slice V₃ ∩ {u = u0}, same method in two dimensions.
struct SliceProjection {
  Eigen::Vector2d point = Eigen::Vector2d::Zero();
  Eigen::Vector2d foot = Eigen::Vector2d::Zero();
  double distance = 0.0;
  std::vector<double> normal_taus;
  int iterations = 0;
};
SliceProjection project_to_v3_slice(double u0, const Eigen::Vector2d& point,
                                    const ProjectionOptions& options = {});

/// t − ½ dist²((x,y,z), V₃).
double envelope_v3(double x, double y, double z, double t, const ProjectionOptions& options = {});

/// t − ½ dist²((y,z), V₃ ∩ {u = x}).
double envelope_v3_slice(double x, double y, double z, double t,
                         const ProjectionOptions& options = {});

}  // namespace hullsing
