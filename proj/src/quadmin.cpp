#include "hullsing/quadmin.hpp"

#include <algorithm>
#include <limits>

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include "hullsing/generating_family.hpp"

namespace hullsing {

bool leading_minors_positive(const Eigen::MatrixXd& Q) {
  for (Eigen::Index k = 1; k <= Q.rows(); ++k) {
    if (!(Q.topLeftCorner(k, k).determinant() > 0.0)) return false;
  }
  return true;
}

OrthantQP::OrthantQP(Eigen::MatrixXd Q, Eigen::VectorXd b, double c0)
    : Q_(std::move(Q)), b_(std::move(b)), c0_(c0) {
  if (Q_.rows() < 1 || Q_.rows() > 3 || Q_.rows() != Q_.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "Q must be square of size 1..3");
  }
  if (b_.size() != Q_.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "linear part has length " +
                                                  std::to_string(b_.size()) + ", expected " +
                                                  std::to_string(Q_.rows()));
  }
  for (Eigen::Index i = 0; i < Q_.rows(); ++i) {
    if (Q_(i, i) != 1.0) throw Error(ErrorCode::InvalidArgument, "Q must have unit diagonal");
    for (Eigen::Index j = 0; j < i; ++j) {
      if (Q_(i, j) != Q_(j, i)) throw Error(ErrorCode::InvalidArgument, "Q must be symmetric");
    }
  }
  if (!Q_.allFinite() || !b_.allFinite() || !std::isfinite(c0_)) {
    throw Error(ErrorCode::InvalidArgument, "non-finite QP data");
  }
  if (!leading_minors_positive(Q_)) {
    throw Error(ErrorCode::NotPositiveDefinite, "Q fails the leading-minor test");
  }
}

OrthantQP OrthantQP::from_moduli(double a, double b, double c, const Eigen::Vector3d& linear,
                                 double c0) {
  Eigen::Matrix3d Q;
  Q << 1, a, b, a, 1, c, b, c, 1;
  return OrthantQP(Q, linear, c0);
}

namespace detail {

QPSolution solve_orthant_qp_general(const Eigen::MatrixXd& Q, const Eigen::VectorXd& b,
                                    double c0) {
  const int n = static_cast<int>(b.size());
  const double tol = 1e-12 * (1.0 + b.cwiseAbs().maxCoeff() + Q.cwiseAbs().maxCoeff());

  Eigen::VectorXd best;
  double best_value = std::numeric_limits<double>::infinity();
  double best_violation = std::numeric_limits<double>::infinity();

  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    std::vector<int> free_idx;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) free_idx.push_back(i);
    }
    const int m = static_cast<int>(free_idx.size());
    Eigen::VectorXd p = Eigen::VectorXd::Zero(n);
    if (m > 0) {
      Eigen::MatrixXd Qf(m, m);
      Eigen::VectorXd bf(m);
      for (int i = 0; i < m; ++i) {
        bf[i] = b[free_idx[i]];
        for (int j = 0; j < m; ++j) Qf(i, j) = Q(free_idx[i], free_idx[j]);
      }
      Eigen::VectorXd pf = Qf.ldlt().solve(-bf);
      for (int i = 0; i < m; ++i) p[free_idx[i]] = pf[i];
    }
    Eigen::VectorXd g = Q * p + b;
    double violation = 0.0;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        violation = std::max(violation, -p[i]);
      } else {
        violation = std::max(violation, -g[i]);
      }
    }
    p = p.cwiseMax(0.0);
    double value = 0.5 * p.dot(Q * p) + b.dot(p) + c0;
    bool feasible = violation <= tol;
    bool best_feasible = best_violation <= tol;
    if ((feasible && (!best_feasible || value < best_value)) ||
        (!feasible && !best_feasible && violation < best_violation)) {
      best = p;
      best_value = value;
      best_violation = violation;
    }
  }

  QPSolution sol;
  sol.minimizer = best;
  sol.value = best_value;
  sol.gradient = Q * best + b;
  for (int i = 0; i < n; ++i) {
    if (best[i] == 0.0) sol.active_set.push_back(i);
  }
  double res = std::abs(best.dot(sol.gradient));
  for (int i = 0; i < n; ++i) {
    if (best[i] > 0.0) {
      res = std::max(res, std::abs(sol.gradient[i]));
    } else {
      res = std::max(res, -sol.gradient[i]);
    }
  }
  sol.kkt_residual = res;
  return sol;
}

}  // namespace detail

QPSolution solve_orthant_qp(const OrthantQP& qp) {
  return detail::solve_orthant_qp_general(qp.Q(), qp.b(), qp.c0());
}

const char* to_string(AlphaKind kind) {
  switch (kind) {
    case AlphaKind::linear: return "linear";
    case AlphaKind::plus_quadratic: return "plus_quadratic";
    case AlphaKind::minus_quadratic: return "minus_quadratic";
    case AlphaKind::constant: return "constant";
  }
  return "constant";
}

AlphaKind alpha_kind_from_string(const std::string& name) {
  for (auto k : {AlphaKind::linear, AlphaKind::plus_quadratic, AlphaKind::minus_quadratic,
                 AlphaKind::constant}) {
    if (name == to_string(k)) return k;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown alpha kind '" + name + "'");
}

AlphaProfile::AlphaProfile(AlphaKind kind, double a) : kind_(kind), a_(a) {
  if (!(std::abs(a) < 1.0)) {
    throw Error(ErrorCode::AlphaOutOfRange, "|a| must be < 1, got " + std::to_string(a));
  }
}

double AlphaProfile::beta(double z) const {
  double al = (*this)(z);
  if (!(std::abs(al) < 1.0)) {
    throw Error(ErrorCode::AlphaOutOfRange, "|alpha(z)| >= 1 at z = " + std::to_string(z));
  }
  return std::numbers::pi - std::acos(al);
}

Polynomial AlphaProfile::as_polynomial() const {
  Polynomial z = Polynomial::variable(5);
  Polynomial out = Polynomial::constant(a_);
  switch (kind_) {
    case AlphaKind::linear: out += z; break;
    case AlphaKind::plus_quadratic: out += z * z; break;
    case AlphaKind::minus_quadratic: out -= z * z; break;
    case AlphaKind::constant: break;
  }
  return out;
}

double envelope_r2(double x, double y, double z, double t, const AlphaProfile& profile) {
  double al = profile(z);
  if (!(std::abs(al) < 1.0)) {
    throw Error(ErrorCode::AlphaOutOfRange, "|alpha(z)| >= 1 at z = " + std::to_string(z));
  }
  Eigen::Matrix2d Q;
  Q << 1, al, al, 1;
  return detail::solve_orthant_qp_general(Q, Eigen::Vector2d(x, y), t).value;
}

double angle_distance_squared(double x, double y, double alpha) {
  if (!(std::abs(alpha) < 1.0)) {
    throw Error(ErrorCode::AlphaOutOfRange, "|alpha| must be < 1");
  }
  if (x >= 0.0 && y >= 0.0) return 0.0;
  // metric tensor G = [[1,-α],[-α,1]]/(1-α²)
  const double k = 1.0 / (1.0 - alpha * alpha);
  auto norm2 = [&](double dx, double dy) { return k * (dx * dx - 2.0 * alpha * dx * dy + dy * dy); };
  double best = norm2(x, y);
  // G-orthogonal foot on the ray {(X,0) : X ≥ 0}: X = x − αy
  double X = x - alpha * y;
  if (X > 0.0) best = std::min(best, norm2(x - X, y));
  double Y = y - alpha * x;
  if (Y > 0.0) best = std::min(best, norm2(x, y - Y));
  return best;
}

namespace {

struct FaceResult {
  bool ok = false;
  Eigen::Vector3d p = Eigen::Vector3d::Zero();
  double value = 0.0;
};

Vector7d point_of(const Eigen::Vector3d& p, const Eigen::Vector4d& base) {
  Vector7d x;
  x << p, base;
  return x;
}

// Newton on the face where coordinates outside `free_mask` are zero, then KKT validation.
FaceResult newton_on_face(const CompiledPolynomial& F, int dim, unsigned free_mask,
                          Eigen::Vector3d p, const Eigen::Vector4d& base,
                          const R3Options& opt) {
  FaceResult out;
  for (int i = 0; i < 3; ++i) {
    if (i >= dim || !(free_mask & (1u << i))) p[i] = 0.0;
  }
  std::vector<int> idx;
  for (int i = 0; i < dim; ++i) {
    if (free_mask & (1u << i)) idx.push_back(i);
  }
  const int m = static_cast<int>(idx.size());
  double value;
  Eigen::Vector3d g;
  Eigen::Matrix3d H;
  bool converged = m == 0;
  for (int it = 0; it < opt.max_newton_iterations && !converged; ++it) {
    F.fiber_derivatives(point_of(p, base), dim, value, g, H);
    Eigen::MatrixXd Hf(m, m);
    Eigen::VectorXd gf(m);
    for (int i = 0; i < m; ++i) {
      gf[i] = g[idx[i]];
      for (int j = 0; j < m; ++j) Hf(i, j) = H(idx[i], idx[j]);
    }
    Eigen::LDLT<Eigen::MatrixXd> ldlt(Hf);
    if (ldlt.info() != Eigen::Success) return out;
    Eigen::VectorXd step = ldlt.solve(-gf);
    if (!step.allFinite()) return out;
    for (int i = 0; i < m; ++i) p[idx[i]] += step[i];
    if (p.cwiseAbs().maxCoeff() > 10.0 * opt.box) return out;
    if (step.norm() < opt.newton_step_tol) converged = true;
  }
  F.fiber_derivatives(point_of(p, base), dim, value, g, H);
  if (!converged) {
    // accept a stalled iteration if the gradient is already at round-off level
    double gn = 0.0;
    for (int i : idx) gn = std::max(gn, std::abs(g[i]));
    if (gn > opt.kkt_tol) return out;
  }
  for (int i : idx) {
    if (p[i] < -opt.newton_step_tol) return out;
    if (std::abs(g[i]) > opt.kkt_tol) return out;
  }
  for (int i = 0; i < dim; ++i) {
    if (!(free_mask & (1u << i)) && g[i] < -opt.kkt_tol) return out;
  }
  if (m > 0) {
    Eigen::MatrixXd Hf(m, m);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) Hf(i, j) = H(idx[i], idx[j]);
    }
    if (!leading_minors_positive(Hf)) return out;
  }
  out.ok = true;
  out.p = p.cwiseMax(0.0);
  out.value = F.value(point_of(out.p, base));
  return out;
}

struct GridMin {
  Eigen::Vector3d p = Eigen::Vector3d::Zero();
  double value = std::numeric_limits<double>::infinity();
  bool on_far_face = false;
};

GridMin grid_minimum(const CompiledPolynomial& F, int dim, const Eigen::Vector4d& base,
                     const R3Options& opt) {
  GridMin out;
  const int n = static_cast<int>(std::lround(opt.box / opt.grid_step));
  int counts[3] = {0, 0, 0};
  for (int i = 0; i < dim; ++i) counts[i] = n;
  Eigen::Vector3d p = Eigen::Vector3d::Zero();
  int best[3] = {0, 0, 0};
  for (int i = 0; i <= counts[0]; ++i) {
    p[0] = i * opt.grid_step;
    for (int j = 0; j <= counts[1]; ++j) {
      p[1] = j * opt.grid_step;
      for (int k = 0; k <= counts[2]; ++k) {
        p[2] = k * opt.grid_step;
        double v = F.value(point_of(p, base));
        if (v < out.value) {
          out.value = v;
          out.p = p;
          best[0] = i;
          best[1] = j;
          best[2] = k;
        }
      }
    }
  }
  for (int i = 0; i < dim; ++i) {
    if (best[i] == n) out.on_far_face = true;
  }
  return out;
}

}  // namespace

FiberMinimum minimize_over_orthant(const CompiledPolynomial& F, bool quadratic_in_fiber, int dim,
                                   const Eigen::Vector4d& base, const R3Options& opt) {
  if (dim < 0 || dim > 3) throw Error(ErrorCode::DimensionMismatch, "fiber dimension must be 0..3");
  FiberMinimum out;
  double c0;
  Eigen::Vector3d g0;
  Eigen::Matrix3d H0;
  F.fiber_derivatives(point_of(Eigen::Vector3d::Zero(), base), dim, c0, g0, H0);
  if (dim == 0) {
    out.value = c0;
    return out;
  }
  Eigen::MatrixXd Q = H0.topLeftCorner(dim, dim);
  if (!leading_minors_positive(Q)) {
    throw Error(ErrorCode::NotPositiveDefinite, "fiber Hessian at the base point is not positive definite");
  }
  QPSolution seed = detail::solve_orthant_qp_general(Q, g0.head(dim), c0);
  Eigen::Vector3d p0 = Eigen::Vector3d::Zero();
  p0.head(dim) = seed.minimizer;

  auto finish = [&](const Eigen::Vector3d& p, double value, bool from_grid) {
    out.minimizer = p;
    out.value = value;
    out.from_grid = from_grid;
    out.active_set.clear();
    for (int i = 0; i < dim; ++i) {
      if (p[i] == 0.0) out.active_set.push_back(i);
    }
    return out;
  };

  if (quadratic_in_fiber) return finish(p0, seed.value, false);

  unsigned seed_mask = 0;
  for (int i = 0; i < dim; ++i) {
    if (seed.minimizer[i] > 0.0) seed_mask |= 1u << i;
  }
  FaceResult best = newton_on_face(F, dim, seed_mask, p0, base, opt);
  if (!best.ok) {
    for (unsigned mask = 0; mask < (1u << dim); ++mask) {
      if (mask == seed_mask) continue;
      FaceResult r = newton_on_face(F, dim, mask, p0, base, opt);
      if (r.ok && (!best.ok || r.value < best.value)) best = r;
    }
  }

  if (best.ok && !opt.validate_with_grid) return finish(best.p, best.value, false);

  GridMin grid = grid_minimum(F, dim, base, opt);
  const double agree = 1e-9;
  if (best.ok && grid.value >= best.value - agree) return finish(best.p, best.value, false);

  // Newton failed or the grid found a lower basin: polish from the grid minimizer.
  if (!grid.on_far_face) {
    FaceResult polished;
    for (unsigned mask = 0; mask < (1u << dim); ++mask) {
      FaceResult r = newton_on_face(F, dim, mask, grid.p, base, opt);
      if (r.ok && (!polished.ok || r.value < polished.value)) polished = r;
    }
    if (polished.ok && polished.value <= grid.value + agree) {
      return finish(polished.p, polished.value, true);
    }
  }
  throw Error(ErrorCode::NonConvergence,
              "no face yields a KKT point consistent with the grid minimum; the base point is "
              "outside the evaluation box of the family");
}

double envelope_r3(double x, double y, double z, double t, const GeneratingFamily& family,
                   const R3Options& options) {
  if (!leading_minors_positive(family.fiber_hessian_at_origin())) {
    throw Error(ErrorCode::NotPositiveDefinite, "quadratic part of the family is not positive definite");
  }
  CompiledPolynomial F(family.poly());
  return minimize_over_orthant(F, family.quadratic_in_fiber(), 3, Eigen::Vector4d(x, y, z, t),
                               options)
      .value;
}

}  // namespace hullsing
