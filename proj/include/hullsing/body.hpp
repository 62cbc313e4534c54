#pragma once

#include <functional>
#include <optional>
#include <string>

#include <Eigen/Core>

#include "hullsing/errors.hpp"

namespace hullsing {

/// Level-set description {f ≤ 0} of a body, used to refine tangency estimates.
struct AnalyticDescriptor {
  std::function<double(const Eigen::VectorXd&)> f;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;
};

/// Finite sample of a compact set in ℝ³ or ℝ⁴; points are the columns.
class PointCloudBody {
 public:
  /// Throws EmptyBody when there are fewer than n+1 affinely independent points,
  /// InvalidArgument when the dimension is not 3 or 4 or a coordinate is not finite.
  explicit PointCloudBody(Eigen::MatrixXd points, std::optional<AnalyticDescriptor> analytic = {});

  int dim() const { return static_cast<int>(points_.rows()); }
  int size() const { return static_cast<int>(points_.cols()); }
  const Eigen::MatrixXd& points() const { return points_; }
  Eigen::VectorXd point(int i) const { return points_.col(i); }
  double diameter() const { return diameter_; }
  const std::optional<AnalyticDescriptor>& analytic() const { return analytic_; }

 private:
  Eigen::MatrixXd points_;
  std::optional<AnalyticDescriptor> analytic_;
  double diameter_ = 0.0;
};

/// Built-in test bodies. `density` scales the number of samples (1 = default).
PointCloudBody make_ellipsoid(double density = 1.0, const Eigen::Vector3d& axes = {1.0, 0.8, 0.6});
/// Two unit spheres centred at ±1.5·e₁ joined by a smooth minimum of their distance functions.
PointCloudBody make_peanut(double density = 1.0, double perturbation = 0.0);
/// Four legs pointing along −e₄ from the vertices of a regular tetrahedron: the under-graph side
/// of x₄ = −|ξ|² + |ξ|⁴ − 2ξ₁ξ₂ξ₃ cut by the ball of radius 1.5 about 0.4·e₄.
PointCloudBody make_caltrop(double density = 1.0);
/// Torus of revolution about e₃ with radii (R, r) = (1, 0.35).
PointCloudBody make_torus(double density = 1.0);

PointCloudBody make_builtin_body(const std::string& name, double density = 1.0);

/// Lowest point of caltrop leg i (0..3).
Eigen::Vector4d caltrop_vertex(int i);
/// −e₄, the support direction touching all four legs.
Eigen::Vector4d caltrop_symmetric_direction();

}  // namespace hullsing
