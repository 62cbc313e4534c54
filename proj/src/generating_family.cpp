#include "hullsing/generating_family.hpp"

#include <Eigen/LU>

#include "hullsing/errors.hpp"

namespace hullsing {

namespace {

Exponent unit(int i, int j = -1) {
  Exponent e{};
  e[i] += 1;
  if (j >= 0) e[j] += 1;
  return e;
}

}  // namespace

int quasidegree(const Exponent& e) {
  int d = 0;
  for (int i = 0; i < kNumVars; ++i) d += kQuasiWeights[i] * e[i];
  return d;
}

GeneratingFamily::GeneratingFamily(Polynomial poly, int max_quasidegree)
    : poly_(std::move(poly)), max_quasidegree_(max_quasidegree) {
  if (max_quasidegree_ < 2) {
    throw Error(ErrorCode::InvalidArgument, "max quasidegree must be at least 2");
  }
  int d = poly_.weighted_degree(kQuasiWeights);
  if (d > max_quasidegree_) {
    throw Error(ErrorCode::InvalidArgument, "family has quasidegree " + std::to_string(d) +
                                                " above the configured maximum " +
                                                std::to_string(max_quasidegree_));
  }
  if (fiber_gradient_at_origin().cwiseAbs().maxCoeff() != 0.0) {
    throw Error(ErrorCode::InvalidArgument, "fiber gradient F_kappa(0) must vanish");
  }
  if (std::abs(nondegeneracy_determinant()) < 1e-12) {
    throw Error(ErrorCode::InvalidArgument, "family is degenerate at the origin");
  }
}

GeneratingFamily GeneratingFamily::parse(const std::string& text, int max_quasidegree) {
  return GeneratingFamily(Polynomial::parse(text, kFamilyVars), max_quasidegree);
}

namespace {

Polynomial linear_part() {
  Polynomial out;
  for (int i = 0; i < 3; ++i) out.add_term(unit(i, i + 3), 1.0);
  out.add_term(unit(6), 1.0);
  return out;
}

}  // namespace

GeneratingFamily GeneratingFamily::smooth() { return GeneratingFamily(linear_part()); }

GeneratingFamily GeneratingFamily::fold() {
  Polynomial f = linear_part();
  f.add_term(unit(0, 0), 0.5);
  return GeneratingFamily(f);
}

GeneratingFamily GeneratingFamily::angle(const AlphaProfile& alpha) {
  Polynomial f = linear_part();
  f.add_term(unit(0, 0), 0.5);
  f.add_term(unit(1, 1), 0.5);
  f += alpha.as_polynomial() * Polynomial::monomial(unit(0, 1), 1.0);
  return GeneratingFamily(f, std::max(3, f.weighted_degree(kQuasiWeights)));
}

GeneratingFamily GeneratingFamily::corner(double a, double b, double c, const Polynomial& higher) {
  Eigen::Matrix3d Q;
  Q << 1, a, b, a, 1, c, b, c, 1;
  if (!leading_minors_positive(Q)) {
    throw Error(ErrorCode::NotPositiveDefinite, "moduli (a,b,c) do not give a positive definite form");
  }
  Polynomial f = linear_part();
  for (int i = 0; i < 3; ++i) f.add_term(unit(i, i), 0.5);
  f.add_term(unit(0, 1), a);
  f.add_term(unit(0, 2), b);
  f.add_term(unit(1, 2), c);
  for (const auto& [e, coeff] : higher.terms()) {
    if (quasidegree(e) < 3) {
      throw Error(ErrorCode::InvalidArgument, "higher-order part has terms of quasidegree < 3");
    }
  }
  f += higher;
  return GeneratingFamily(f, std::max(3, f.weighted_degree(kQuasiWeights)));
}

GeneratingFamily GeneratingFamily::swallowtail() { return corner(0.0, 0.0, 0.0); }

GeneratingFamily GeneratingFamily::swallowtail_reduced() {
  Polynomial f = linear_part();
  f.add_term(unit(1, 1), 0.5);
  f.add_term(unit(2, 2), 0.5);
  return GeneratingFamily(f);
}

Eigen::Vector3d GeneratingFamily::fiber_gradient_at_origin() const {
  return {poly_.coefficient(unit(0)), poly_.coefficient(unit(1)), poly_.coefficient(unit(2))};
}

Eigen::Matrix3d GeneratingFamily::fiber_hessian_at_origin() const {
  Eigen::Matrix3d H;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      H(i, j) = (i == j ? 2.0 : 1.0) * poly_.coefficient(unit(i, j));
    }
  }
  return H;
}

double GeneratingFamily::nondegeneracy_determinant() const {
  // rows: F_κ₁..F_κ₃, F; columns: ∂/∂x, ∂/∂y, ∂/∂z, ∂/∂t, all at the origin
  Eigen::Matrix4d M;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 4; ++j) M(i, j) = poly_.coefficient(unit(i, 3 + j));
  }
  for (int j = 0; j < 4; ++j) M(3, j) = poly_.coefficient(unit(3 + j));
  return M.determinant();
}

std::map<int, Polynomial> quasi_components(const GeneratingFamily& family) {
  std::map<int, Polynomial> out;
  for (const auto& [e, c] : family.poly().terms()) out[quasidegree(e)].add_term(e, c);
  return out;
}

}  // namespace hullsing
