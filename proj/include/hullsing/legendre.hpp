#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "hullsing/errors.hpp"
#include "hullsing/polynomial.hpp"
#include "hullsing/rng.hpp"

namespace hullsing {

class PointCloudBody;

/// Point (p,q,r;u,v,w,s) of E₀ carrying the element p du + q dv + r dw + ds ≤ 0.
/// For Φ̃₃ the same slots hold (ϰ; λ; σ).
struct ContactElement {
  double p = 0, q = 0, r = 0, u = 0, v = 0, w = 0, s = 0;

  ContactElement() = default;
  ContactElement(double p_, double q_, double r_, double u_, double v_, double w_, double s_)
      : p(p_), q(q_), r(r_), u(u_), v(v_), w(w_), s(s_) {}
  explicit ContactElement(const Vector7d& x)
      : p(x[0]), q(x[1]), r(x[2]), u(x[3]), v(x[4]), w(x[5]), s(x[6]) {}

  Vector7d vec() const {
    Vector7d x;
    x << p, q, r, u, v, w, s;
    return x;
  }
  Eigen::Vector3d kappa() const { return {p, q, r}; }
  Eigen::Vector3d lambda() const { return {u, v, w}; }
};

enum class Variety { R0, R1, R2, R3, V3tilde, V3bar, Phi3 };

const char* to_string(Variety v);
Variety variety_from_string(const std::string& name);

/// 2^l for R̃_l, three for Ṽ₃ and V̄₃, two branches for Φ̃₃.
int stratum_count(Variety v);
/// Every stratum is three-dimensional.
inline constexpr int kStratumParams = 3;
/// Parameter names of a stratum, e.g. {"tau","u","r"}.
std::array<const char*, 3> param_names(Variety v, int stratum);

/// Stratum coordinates as a function of its parameters, without range checks.
///
/// R̃_l, stratum k (1-based): bit i of k−1 (first pair most significant) picks
/// λᵢ ≥ 0, κᵢ = 0 (bit clear) or κᵢ ≥ 0, λᵢ = 0 (bit set) for the pairs i < l; pairs i ≥ l
/// have κᵢ = 0 and λᵢ free. Parameters are the three free coordinates in pair order.
/// Ṽ₃: 1 (τ,u,w), 2 (τ,u,r), 3 (τ,r,q). V̄₃: 1 (u,v,w), 2 (τ,u,r), 3 (u,q,r).
/// Φ̃₃: 1 = {Φ₃,τ = 0 via P′(τ) = 0} (τ,λ₁,λ₃), 2 = {P(τ) = 0} (τ,λ₁,λ₂).
template <typename Scalar>
Eigen::Matrix<Scalar, 7, 1> stratum_coordinates(Variety v, int stratum,
                                                const Eigen::Matrix<Scalar, 3, 1>& a);

/// Whether params satisfy the stratum's inequalities (with slack tol).
bool params_in_range(Variety v, int stratum, const Eigen::Vector3d& params, double tol = 0.0);

struct StratumPoint {
  Variety variety = Variety::R0;
  int stratum_index = 1;
  Eigen::Vector3d params = Eigen::Vector3d::Zero();
  ContactElement element;
};

/// Throws ParamOutOfRange (stratum index or inequality violated).
StratumPoint parametrize(Variety v, int stratum, const Eigen::Vector3d& params);

/// Draws parameters uniformly from a compact box inside the stratum's range.
/// τ ∈ [−1.5,1.5], u ∈ [−2τ², 2], r ∈ [0,2]; other coordinates in [−2,2] or [0,2].
Eigen::Vector3d sample_params(Variety v, int stratum, Rng& rng);

struct Membership {
  bool member = false;
  /// 1-based index of the lowest matching stratum, 0 if none.
  int stratum = 0;
  explicit operator bool() const { return member; }
};

Membership membership(Variety v, const ContactElement& e, double tol);

/// (p du + q dv + r dw + ds) applied to the pushforward of a parameter direction.
/// Throws ParamOutOfRange.
double contact_tangency(Variety v, int stratum, const Eigen::Vector3d& params,
                        const Eigen::Vector3d& direction);

/// Analytic Jacobian ∂(coordinates)/∂(params) by forward-mode differentiation.
Eigen::Matrix<double, 7, 3> stratum_jacobian(Variety v, int stratum, const Eigen::Vector3d& params);

/// The ten printed generators in (p,q,r,u,v,w,s).
class IdealV3 {
 public:
  static constexpr int kCount = 10;
  IdealV3();

  static const std::array<const char*, kCount>& printed();

  const std::array<Polynomial, kCount>& generators() const { return gens_; }
  /// Copy with one generator's leading coefficient perturbed (verification hook).
  IdealV3 tampered(int index, double delta) const;

  std::array<double, kCount> evaluate(const ContactElement& e) const;
  std::array<double, kCount> evaluate(const Eigen::Matrix<long double, 7, 1>& x) const;

 private:
  std::array<Polynomial, kCount> gens_;
};

struct IdealParamReport {
  std::string name;
  Variety variety;
  int stratum;
  int samples = 0;
  std::array<double, IdealV3::kCount> max_abs{};
  bool annihilates = false;
};

struct IdealReport {
  double tol = 0.0;
  std::vector<IdealParamReport> parametrizations;
  /// Per generator, the largest |g| seen at random off-variety points.
  std::array<double, IdealV3::kCount> off_variety_max_abs{};
  /// Smallest over off-variety points of max_k |g_k|.
  double off_variety_min_of_max = 0.0;
  int off_variety_samples = 0;
  bool generic_nonvanishing = false;
  /// Largest coordinate residual of the shift (p,w) ↦ (p + ru/2, w − u²/4) taking
  /// Ṽ₃ stratum 2 onto V̄₃ stratum 2, and of that shift preserving the contact form.
  double shift_residual = 0.0;
  std::vector<std::string> annihilating;
  std::string resolution;
  bool passed = false;
};

IdealReport verify_ideal(int sample_count, double tol, std::uint64_t seed,
                         const IdealV3& ideal = IdealV3());

/// (ϰ,λ,σ) = (p,q,r; u,v,w − r, s + r²/2).
ContactElement phi3_reduce(const ContactElement& e);
ContactElement phi3_unreduce(const ContactElement& chart);

/// Φ₃(τ,λ) = ½(τ⁴ + λ₁τ² + λ₂τ + λ₃)².
double phi3(double tau, const Eigen::Vector3d& lambda);

/// Residual of a chart point against Φ̃₃ using the τ recovered from ϰ (or, for ϰ = 0, the
/// best real root of the quartic); 0 means on Φ̃₃.
double phi3_residual(const ContactElement& chart);

/// Chart (p′,q′,r′,u,v,w,s) of M̃*₀, element p′du + q′dv + dw + r′ds ≤ 0, mapped to the
/// (P,Q,R;U,V,W,S) chart by inverting p′=U, q′=W, r′=Q, u=−P+2U−2W², v=−R−4UW,
/// w=S+PU+RW−U²+4UW², V=s.
ContactElement a1a3_substitute(const Vector7d& chart);
Vector7d a1a3_unsubstitute(const ContactElement& e);

/// Four strata of M̃*₀ in chart coordinates: 1 (p′≥0,q′,s≥0), 2 (p′≥0,q′,r′≥0),
/// 3 (q′,u≤−2q′²,s≥0), 4 (q′,u≤−2q′²,r′≥0). Throws ParamOutOfRange.
Vector7d m0star_point(int stratum, const Eigen::Vector3d& params);

struct SupportElement {
  Eigen::VectorXd direction;
  double support_value = 0.0;
  int touching_index = -1;
  Eigen::VectorXd touching_point;
};

/// Support hyperplane and touching sample point for each direction. Throws EmptyBody.
std::vector<SupportElement> dual_support_elements(const PointCloudBody& body,
                                                  const std::vector<Eigen::VectorXd>& directions);

// ---------------------------------------------------------------------------------------------

template <typename Scalar>
Eigen::Matrix<Scalar, 7, 1> stratum_coordinates(Variety v, int stratum,
                                                const Eigen::Matrix<Scalar, 3, 1>& a) {
  using Vec = Eigen::Matrix<Scalar, 7, 1>;
  const Scalar zero(0);
  Vec x;
  for (int i = 0; i < 7; ++i) x[i] = zero;
  switch (v) {
    case Variety::R0:
    case Variety::R1:
    case Variety::R2:
    case Variety::R3: {
      const int l = static_cast<int>(v) - static_cast<int>(Variety::R0);
      const unsigned bits = static_cast<unsigned>(stratum - 1);
      for (int i = 0; i < 3; ++i) {
        bool fiber = i < l && (bits >> (l - 1 - i)) & 1u;
        if (fiber) {
          x[i] = a[i];
        } else {
          x[3 + i] = a[i];
        }
      }
      return x;
    }
    case Variety::V3tilde: {
      const Scalar& t = a[0];
      const Scalar t2 = t * t;
      if (stratum == 1) {
        const Scalar& u = a[1];
        x[3] = u;
        x[4] = Scalar(-4) * t2 * t - Scalar(2) * u * t;
        x[5] = a[2];
      } else if (stratum == 2) {
        const Scalar &u = a[1], &r = a[2];
        x[0] = r * t2;
        x[1] = r * t;
        x[2] = r;
        x[3] = u;
        x[4] = Scalar(-4) * t2 * t - Scalar(2) * u * t;
        x[5] = Scalar(3) * t2 * t2 + u * t2;
      } else {
        const Scalar &r = a[1], &q = a[2];
        x[0] = r * t2;
        x[1] = q;
        x[2] = r;
        x[3] = Scalar(-2) * t2;
        x[5] = t2 * t2;
      }
      return x;
    }
    case Variety::V3bar: {
      if (stratum == 1) {
        x[3] = a[0];
        x[4] = a[1];
        x[5] = a[2];
      } else if (stratum == 2) {
        const Scalar &t = a[0], &u = a[1], &r = a[2];
        const Scalar t2 = t * t;
        x[0] = r * t2 + r * u / Scalar(2);
        x[1] = r * t;
        x[2] = r;
        x[3] = u;
        x[4] = Scalar(-4) * t2 * t - Scalar(2) * u * t;
        x[5] = Scalar(3) * t2 * t2 + u * t2 - u * u / Scalar(4);
      } else {
        x[1] = a[1];
        x[2] = a[2];
        x[3] = a[0];
      }
      return x;
    }
    case Variety::Phi3: {
      const Scalar& t = a[0];
      const Scalar t2 = t * t;
      if (stratum == 1) {
        const Scalar &l1 = a[1], &l3 = a[2];
        const Scalar l2 = Scalar(-4) * t2 * t - Scalar(2) * l1 * t;
        const Scalar P = t2 * t2 + l1 * t2 + l2 * t + l3;
        x[0] = -P * t2;
        x[1] = -P * t;
        x[2] = -P;
        x[3] = l1;
        x[4] = l2;
        x[5] = l3;
        x[6] = P * P / Scalar(2);
      } else {
        const Scalar &l1 = a[1], &l2 = a[2];
        x[3] = l1;
        x[4] = l2;
        x[5] = -(t2 * t2 + l1 * t2 + l2 * t);
      }
      return x;
    }
  }
  return x;
}

}  // namespace hullsing
