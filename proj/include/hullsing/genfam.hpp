#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "hullsing/generating_family.hpp"
#include "hullsing/legendre.hpp"
#include "hullsing/polynomial.hpp"
#include "hullsing/quadmin.hpp"
#include "hullsing/swallowtail.hpp"

namespace hullsing {

/// Generating function K(p,q,r,u,v,w,s) of a contact vector field on E₀.
using GeneratingFunction = Polynomial;

/// (κ; F_κ, F − κF_κ) at (κ, μ, t).
ContactElement fiber_map(const Polynomial& family, const Eigen::Vector3d& kappa,
                         const Eigen::Vector3d& mu, double t);
inline ContactElement fiber_map(const GeneratingFamily& F, const Eigen::Vector3d& kappa,
                                const Eigen::Vector3d& mu, double t) {
  return fiber_map(F.poly(), kappa, mu, t);
}

/// κ̇ = κK_s − K_λ, λ̇ = K_κ, ṡ = K − κK_κ, returned in (p,q,r,u,v,w,s) order.
Vector7d contact_field(const GeneratingFunction& K, const ContactElement& e);

/// Fixed-step RK4 integration of the contact field over time `horizon` (may be negative).
ContactElement contact_flow(const GeneratingFunction& K, const ContactElement& e, double horizon,
                            double step = 1e-3);

/// −K(κ, F_κ, F − κF_κ) as a polynomial in (p,q,r,x,y,z,t).
Polynomial lemma2_action(const GeneratingFunction& K, const Polynomial& family);
inline Polynomial lemma2_action(const GeneratingFunction& K, const GeneratingFamily& F) {
  return lemma2_action(K, F.poly());
}

/// Family F_ε whose fibers are the fibers of F moved by the time −ε flow of K:
/// F_ε(κ,μ,t) = s′ + κ·λ′ where (κ, λ′, s′) = g_{−ε}(κ₀, F_κ(κ₀), F − κ₀F_κ(κ₀)).
double transported_family(const GeneratingFunction& K, const Polynomial& family,
                          const Eigen::Vector3d& kappa, const Eigen::Vector3d& mu, double t,
                          double eps);

/// Central difference (F_h − F_{−h}) / 2h of the transported family.
double lemma2_finite_difference(const GeneratingFunction& K, const Polynomial& family,
                                const Eigen::Vector3d& kappa, const Eigen::Vector3d& mu, double t,
                                double h = 1e-4);

/// {K,L} = κK_s·L_κ − K_λ·L_κ + K_κ·L_λ + K L_s − (κ·K_κ) L_s − K_s L.
GeneratingFunction bracket(const GeneratingFunction& K, const GeneratingFunction& L);

/// α([X_K, X_L]) at e with [X,Y] = DY·X − DX·Y, Jacobians by central differences of step h.
double bracket_finite_difference(const GeneratingFunction& K, const GeneratingFunction& L,
                                 const ContactElement& e, double h = 1e-5);

/// The 8×4 matrix Ω with ω = 2t − x² − y² − z²; columns pqr, qr, pr, pq.
Eigen::Matrix<double, 8, 4> omega_matrix(double x, double y, double z, double t);
/// Number of singular values above 1e−10·‖Ω‖.
int omega_rank(double x, double y, double z, double t);

/// Regular grid over (x,y,z); n points per axis including both ends.
struct Grid3 {
  Eigen::Vector3d lo = Eigen::Vector3d::Constant(-1.0);
  Eigen::Vector3d hi = Eigen::Vector3d::Constant(1.0);
  std::array<int, 3> n = {11, 11, 11};

  int size() const { return n[0] * n[1] * n[2]; }
  Eigen::Vector3d node(int i, int j, int k) const;
  /// Flat index order: x slowest, z fastest.
  Eigen::Vector3d node(int flat) const;
};

struct FrontOptions {
  double tol = 1e-10;
  R3Options orthant;
  ProjectionOptions projection;
};

/// Envelope evaluator with the family compiled once.
class FamilyEnvelope {
 public:
  FamilyEnvelope(const GeneratingFamily& F, Variety v, const FrontOptions& options = {});

  double operator()(double x, double y, double z, double t) const;
  /// Root in t at (x,y,z): bracket grown around −envelope(x,y,z,0), then bisection to tol.
  double front_height(double x, double y, double z) const;

 private:
  enum class Kind { orthant, v3, v3_slice };
  Kind kind_;
  int dim_ = 0;
  bool quadratic_ = true;
  CompiledPolynomial compiled_;
  FrontOptions options_;
};

/// Envelope of a normal family over the model variety: min over the orthant of the first l
/// fiber coordinates for R̃_l, t − ½dist²(·,V₃) for Ṽ₃ (swallowtail family), and
/// t − ½dist²((y,z), V₃ ∩ {u = x}) for Ṽ₃ with the reduced family.
/// Throws GridOutOfDomain when the fiber Hessian fails to be positive definite.
double family_envelope(const GeneratingFamily& F, Variety v, double x, double y, double z,
                       double t, const FrontOptions& options = {});

/// Root in t of the envelope at (x,y,z), by bisection to options.tol.
double front_height(const GeneratingFamily& F, Variety v, double x, double y, double z,
                    const FrontOptions& options = {});

struct FrontSample {
  Grid3 grid;
  Variety variety = Variety::R0;
  /// Boundary heights t(x,y,z), flat grid order.
  std::vector<double> t;
  /// Coorientation along the t axis: +1 means towards increasing t. The set
  /// {envelope ≤ 0} lies below the front.
  int coorientation = 1;
};

FrontSample front(const GeneratingFamily& F, Variety v, const Grid3& grid,
                  const FrontOptions& options = {});

}  // namespace hullsing
