#include "doctest.h"

#include <cmath>
#include <functional>
#include <limits>

#include <Eigen/Dense>

#include "hullsing/generating_family.hpp"
#include "hullsing/quadmin.hpp"
#include "hullsing/rng.hpp"

using namespace hullsing;

namespace {

/// min of ½pᵀQp + bᵀp + c0 on the grid h·ℕ² ∩ [0,L]².
double grid_min_2d(const Eigen::Matrix2d& Q, const Eigen::Vector2d& b, double c0, double L,
                   double h) {
  double best = std::numeric_limits<double>::infinity();
  const int n = static_cast<int>(std::lround(L / h));
  for (int i = 0; i <= n; ++i) {
    const double p = i * h;
    for (int j = 0; j <= n; ++j) {
      const double q = j * h;
      const double v = 0.5 * (Q(0, 0) * p * p + 2 * Q(0, 1) * p * q + Q(1, 1) * q * q) +
                       b[0] * p + b[1] * q + c0;
      best = std::min(best, v);
    }
  }
  return best;
}

/// Coarse grid min over [0,L]³ followed by coordinate refinement, for general families.
double grid_min_3d(const std::function<double(const Eigen::Vector3d&)>& f, double L, double h) {
  double best = std::numeric_limits<double>::infinity();
  Eigen::Vector3d arg = Eigen::Vector3d::Zero();
  const int n = static_cast<int>(std::lround(L / h));
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      for (int k = 0; k <= n; ++k) {
        const Eigen::Vector3d p(i * h, j * h, k * h);
        const double v = f(p);
        if (v < best) best = v, arg = p;
      }
    }
  }
  // local refinement on finer grids around the coarse minimizer
  for (double s = h / 10; s > 1e-6; s /= 10) {
    const Eigen::Vector3d c = arg;
    for (int i = -10; i <= 10; ++i) {
      for (int j = -10; j <= 10; ++j) {
        for (int k = -10; k <= 10; ++k) {
          const Eigen::Vector3d p = (c + s * Eigen::Vector3d(i, j, k)).cwiseMax(0.0);
          const double v = f(p);
          if (v < best) best = v, arg = p;
        }
      }
    }
  }
  return best;
}

/// Squared distance from b to the quadrant in the metric M, by the two rays and the vertex.
double quadrant_distance_squared(const Eigen::Vector2d& b, const Eigen::Matrix2d& M) {
  if (b.minCoeff() >= 0) return 0.0;
  double best = b.dot(M * b);
  for (int i = 0; i < 2; ++i) {
    const Eigen::Vector2d e = Eigen::Vector2d::Unit(i);
    const double s = std::max(0.0, e.dot(M * b) / e.dot(M * e));
    const Eigen::Vector2d d = b - s * e;
    best = std::min(best, d.dot(M * d));
  }
  return best;
}

}  // namespace

TEST_CASE("one-dimensional orthant minimum") {
  const OrthantQP qp(Eigen::MatrixXd::Identity(1, 1), Eigen::VectorXd::Constant(1, -2.0), 0.0);
  const QPSolution s = solve_orthant_qp(qp);
  CHECK(s.minimizer[0] == doctest::Approx(2.0));
  CHECK(s.value == doctest::Approx(-2.0));
  CHECK(s.active_set.empty());
}

TEST_CASE("nonnegative gradient at the origin keeps every constraint active") {
  const OrthantQP qp = OrthantQP::from_moduli(0.2, -0.1, 0.3, Eigen::Vector3d(1, 1, 1), 5.0);
  const QPSolution s = solve_orthant_qp(qp);
  CHECK(s.minimizer.norm() == 0.0);
  CHECK(s.value == 5.0);
  CHECK(s.active_set == std::vector<int>{0, 1, 2});
  CHECK(s.kkt_residual <= 1e-12);
}

TEST_CASE("two-dimensional minimum against a dense grid") {
  Eigen::Matrix2d Q;
  Q << 1, 0.5, 0.5, 1;
  const OrthantQP qp(Q, Eigen::Vector2d(-1, -1), 0.0);
  const QPSolution s = solve_orthant_qp(qp);
  const double grid = grid_min_2d(Q, Eigen::Vector2d(-1, -1), 0.0, 4.0, 1e-3);
  CHECK(s.value <= grid + 1e-12);
  CHECK(grid - s.value <= 1e-5);
  CHECK(s.value == doctest::Approx(-1.0 / 1.5));
}

TEST_CASE("random instances satisfy KKT and beat the grid") {
  Rng rng(17);
  for (int dim = 1; dim <= 3; ++dim) {
    for (int trial = 0; trial < 40; ++trial) {
      Eigen::MatrixXd Q = Eigen::MatrixXd::Identity(dim, dim);
      for (int i = 0; i < dim; ++i) {
        for (int j = i + 1; j < dim; ++j) Q(i, j) = Q(j, i) = rng.uniform(-0.5, 0.5);
      }
      if (!leading_minors_positive(Q)) continue;
      Eigen::VectorXd b(dim);
      for (int i = 0; i < dim; ++i) b[i] = rng.uniform(-1.0, 1.0);
      const QPSolution s = solve_orthant_qp(OrthantQP(Q, b, 0.0));
      const Eigen::VectorXd g = Q * s.minimizer + b;
      CHECK(s.minimizer.minCoeff() >= 0.0);
      CHECK(g.minCoeff() >= -1e-10);
      CHECK(std::abs(s.minimizer.dot(g)) <= 1e-10);
      // random feasible points are no better
      Rng probe(trial);
      for (int k = 0; k < 200; ++k) {
        Eigen::VectorXd p(dim);
        for (int i = 0; i < dim; ++i) p[i] = probe.uniform(0.0, 3.0);
        CHECK(0.5 * p.dot(Q * p) + b.dot(p) >= s.value - 1e-12);
      }
    }
  }
}

TEST_CASE("invalid quadratic data is rejected") {
  Eigen::Matrix2d Q;
  Q << 1, 1.2, 1.2, 1;
  CHECK_THROWS_AS(OrthantQP(Q, Eigen::Vector2d::Zero(), 0.0), Error);
  try {
    OrthantQP(Q, Eigen::Vector2d::Zero(), 0.0);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotPositiveDefinite);
  }
  Q << 2, 0, 0, 1;
  CHECK_THROWS_AS(OrthantQP(Q, Eigen::Vector2d::Zero(), 0.0), Error);
  CHECK_THROWS_AS(OrthantQP(Eigen::Matrix2d::Identity(), Eigen::Vector3d::Zero(), 0.0), Error);
}

TEST_CASE("R1 envelope closed form") {
  CHECK(envelope_r1(3.0, 0.0, 0.0, 1.0) == 1.0);
  CHECK(envelope_r1(-2.0, 0.0, 0.0, 0.0) == -2.0);
  CHECK(envelope_r1(-1.0, 0.0, 0.0, 0.5) == 0.0);
  CHECK(envelope_r0(5.0, 1.0, 2.0, -0.25) == -0.25);
}

TEST_CASE("R2 envelope values") {
  const AlphaProfile zero(AlphaKind::constant, 0.0);
  CHECK(envelope_r2(-1, -1, 0, 0, zero) == doctest::Approx(-1.0));
  const AlphaProfile lin(AlphaKind::linear, 0.3);
  CHECK(envelope_r2(0.4, 0.7, 0.2, 1.25, lin) == 1.25);

  Eigen::Matrix2d Q;
  Q << 1, 0.3, 0.3, 1;
  const QPSolution s = solve_orthant_qp(OrthantQP(Q, Eigen::Vector2d(-1, 0.2), 0.0));
  const double v = envelope_r2(-1, 0.2, 0, 0, AlphaProfile(AlphaKind::constant, 0.3));
  CHECK(v == doctest::Approx(s.value).epsilon(1e-12));
  CHECK(v == doctest::Approx(-0.5 * angle_distance_squared(-1, 0.2, 0.3)).epsilon(1e-12));
}

TEST_CASE("R2 envelope is t minus half the metric distance squared") {
  Rng rng(23);
  for (int i = 0; i < 200; ++i) {
    const double a = rng.uniform(-0.95, 0.95), x = rng.uniform(-2, 2), y = rng.uniform(-2, 2),
                 t = rng.uniform(-1, 1);
    Eigen::Matrix2d M;
    M << 1, -a, -a, 1;
    M /= 1 - a * a;
    const double d2 = quadrant_distance_squared({x, y}, M);
    CHECK(envelope_r2(x, y, 0, t, AlphaProfile(AlphaKind::constant, a)) ==
          doctest::Approx(t - 0.5 * d2).epsilon(1e-12));
  }
}

TEST_CASE("alpha profiles") {
  const AlphaProfile p(AlphaKind::plus_quadratic, 0.2), m(AlphaKind::minus_quadratic, 0.2);
  CHECK(p(0.5) == doctest::Approx(0.45));
  CHECK(m(0.5) == doctest::Approx(-0.05));
  CHECK(AlphaProfile(AlphaKind::constant, 0.3).beta(0.0) ==
        doctest::Approx(M_PI - std::acos(0.3)));
  CHECK(alpha_kind_from_string("minus_quadratic") == AlphaKind::minus_quadratic);
  CHECK_THROWS_AS(AlphaProfile(AlphaKind::linear, 1.0), Error);
  CHECK_THROWS_AS(envelope_r2(0, 0, 0.8, 0, AlphaProfile(AlphaKind::linear, 0.3)), Error);
  try {
    envelope_r2(0, 0, 0.8, 0, AlphaProfile(AlphaKind::linear, 0.3));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::AlphaOutOfRange);
  }
}

TEST_CASE("R3 envelope of the decoupled corner") {
  const GeneratingFamily F = GeneratingFamily::corner(0, 0, 0);
  CHECK(envelope_r3(-1, -1, -1, 0, F) == doctest::Approx(-1.5));
}

TEST_CASE("R3 envelope against a grid oracle") {
  Rng rng(29);
  for (int trial = 0; trial < 4; ++trial) {
    const double a = rng.uniform(-0.4, 0.4), b = rng.uniform(-0.4, 0.4), c = rng.uniform(-0.4, 0.4);
    const GeneratingFamily F = GeneratingFamily::corner(a, b, c);
    const Eigen::Vector4d base(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1),
                               rng.uniform(-1, 1));
    auto f = [&](const Eigen::Vector3d& k) {
      Vector7d x;
      x << k, base;
      return F.poly()(x);
    };
    const double oracle = grid_min_3d(f, 3.0, 0.05);
    CHECK(envelope_r3(base[0], base[1], base[2], base[3], F) ==
          doctest::Approx(oracle).epsilon(1e-8));
  }
}

TEST_CASE("R3 envelope with a cubic term") {
  const GeneratingFamily F2 = GeneratingFamily::corner(0, 0, 0);
  const GeneratingFamily F3 = GeneratingFamily::corner(0, 0, 0, Polynomial::parse("0.1 p^3", kFamilyVars));
  const double v2 = envelope_r3(-1, 0, 0, 0, F2), v3 = envelope_r3(-1, 0, 0, 0, F3);
  CHECK(std::abs(v3 - v2) <= 0.1);
  auto f = [&](const Eigen::Vector3d& k) {
    Vector7d x;
    x << k, -1, 0, 0, 0;
    return F3.poly()(x);
  };
  CHECK(v3 == doctest::Approx(grid_min_3d(f, 3.0, 0.05)).epsilon(1e-8));
  // p ≥ 0 root of p + 0.3p² = 1
  const double p = (-1 + std::sqrt(1 + 1.2)) / 0.6;
  CHECK(v3 == doctest::Approx(0.5 * p * p + 0.1 * p * p * p - p).epsilon(1e-10));
}

TEST_CASE("indefinite corner moduli are refused") {
  CHECK_THROWS_AS(GeneratingFamily::corner(0.9, 0.9, -0.9), Error);
}
