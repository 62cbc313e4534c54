#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace hullsing {

/// Polynomials in seven variables laid out as (fiber₁, fiber₂, fiber₃, base₁, base₂, base₃, scalar).
/// Generating families use (p,q,r,x,y,z,t); generating functions of contact fields use
/// (p,q,r,u,v,w,s). Coefficients are doubles; differentiation is exact.
inline constexpr int kNumVars = 7;

using Exponent = std::array<std::uint8_t, kNumVars>;
using VarNames = std::array<const char*, kNumVars>;
using Vector7d = Eigen::Matrix<double, kNumVars, 1>;

inline constexpr VarNames kFamilyVars = {"p", "q", "r", "x", "y", "z", "t"};
inline constexpr VarNames kContactVars = {"p", "q", "r", "u", "v", "w", "s"};

class Polynomial {
 public:
  using Terms = std::map<Exponent, double>;

  Polynomial() = default;

  static Polynomial constant(double c);
  static Polynomial variable(int index, double coeff = 1.0);
  static Polynomial monomial(const Exponent& e, double coeff);

  /// Parses sums of terms like "0.5 p^2 + p*x - 3/2 q r + t".
  static Polynomial parse(std::string_view text, const VarNames& names);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const Exponent& e, double coeff);
  double coefficient(const Exponent& e) const;

  Polynomial derivative(int var) const;

  /// Total degree; -1 for the zero polynomial.
  int degree() const;
  /// Highest total degree in the first three (fiber) variables.
  int fiber_degree() const;
  /// Weighted degree with the given integer weights; -1 for zero.
  int weighted_degree(const std::array<int, kNumVars>& weights) const;

  template <typename Scalar>
  Scalar evaluate(const Eigen::Matrix<Scalar, kNumVars, 1>& x) const;
  double operator()(const Vector7d& x) const { return evaluate<double>(x); }

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(double s);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, double s) { return a *= s; }
  friend Polynomial operator*(double s, Polynomial a) { return a *= s; }
  friend Polynomial operator-(Polynomial a) { return a *= -1.0; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.terms_ == b.terms_; }

  /// Removes coefficients with magnitude ≤ tol.
  Polynomial pruned(double tol) const;
  double max_abs_coefficient() const;

  std::string to_string(const VarNames& names) const;

 private:
  Terms terms_;
};

Polynomial pow(const Polynomial& base, int exponent);

/// outer(inner₀, …, inner₆).
Polynomial compose(const Polynomial& outer, const std::array<Polynomial, kNumVars>& inner);

/// Flat term list for repeated evaluation of value, fiber gradient and fiber Hessian.
class CompiledPolynomial {
 public:
  CompiledPolynomial() = default;
  explicit CompiledPolynomial(const Polynomial& poly);

  double value(const Vector7d& x) const;
  /// Value, gradient and Hessian with respect to the first `dim` variables.
  void fiber_derivatives(const Vector7d& x, int dim, double& value, Eigen::Vector3d& grad,
                         Eigen::Matrix3d& hess) const;
  Vector7d gradient(const Vector7d& x) const;

 private:
  struct Term {
    double coeff;
    Exponent exp;
  };
  std::vector<Term> terms_;
  int max_exponent_ = 0;
};

template <typename Scalar>
Scalar Polynomial::evaluate(const Eigen::Matrix<Scalar, kNumVars, 1>& x) const {
  Scalar sum(0);
  for (const auto& [e, c] : terms_) {
    Scalar term(c);
    for (int i = 0; i < kNumVars; ++i) {
      for (int k = 0; k < e[i]; ++k) term = term * x[i];
    }
    sum = sum + term;
  }
  return sum;
}

}  // namespace hullsing
