#pragma once

#include <map>
#include <string>

#include <Eigen/Core>

#include "hullsing/polynomial.hpp"
#include "hullsing/quadmin.hpp"

namespace hullsing {

/// Quasidegree weights: deg p = q = r = x = y = z = 1, deg t = 2.
inline constexpr std::array<int, kNumVars> kQuasiWeights = {1, 1, 1, 1, 1, 1, 2};

/// Polynomial generating family F(p,q,r;x,y,z,t) of a Legendre fibration.
class GeneratingFamily {
 public:
  /// Throws InvalidArgument when F_κ(0) ≠ 0 or the non-degeneracy determinant vanishes.
  explicit GeneratingFamily(Polynomial poly, int max_quasidegree = 3);

  static GeneratingFamily parse(const std::string& text, int max_quasidegree = 3);

  /// px + qy + rz + t
  static GeneratingFamily smooth();
  /// p²/2 + px + qy + rz + t
  static GeneratingFamily fold();
  /// (p²+q²)/2 + α(z)pq + px + qy + rz + t
  static GeneratingFamily angle(const AlphaProfile& alpha);
  /// (p²+q²+r²)/2 + apq + bpr + cqr + px + qy + rz + t + higher
  static GeneratingFamily corner(double a, double b, double c, const Polynomial& higher = {});
  /// (p²+q²+r²)/2 + px + qy + rz + t
  static GeneratingFamily swallowtail();
  /// (q²+r²)/2 + px + qy + rz + t
  static GeneratingFamily swallowtail_reduced();

  const Polynomial& poly() const { return poly_; }
  int max_quasidegree() const { return max_quasidegree_; }

  /// det ‖F_κμ F_κt; F_μ F_t‖ at the origin.
  double nondegeneracy_determinant() const;
  Eigen::Vector3d fiber_gradient_at_origin() const;
  /// F_κκ at the origin.
  Eigen::Matrix3d fiber_hessian_at_origin() const;
  /// True when F has κ-degree ≤ 2.
  bool quadratic_in_fiber() const { return poly_.fiber_degree() <= 2; }

 private:
  Polynomial poly_;
  int max_quasidegree_;
};

/// Pieces F₂, F₃, … by quasidegree, keyed by degree. Their sum is F.
std::map<int, Polynomial> quasi_components(const GeneratingFamily& family);

int quasidegree(const Exponent& e);

}  // namespace hullsing
