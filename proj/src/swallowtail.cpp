#include "hullsing/swallowtail.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/LU>

namespace hullsing {

namespace {

double cubic(double a, double b, double t) { return (t * t + a) * t + b; }

double polish_cubic_root(double a, double b, double t) {
  for (int it = 0; it < 4; ++it) {
    double f = cubic(a, b, t);
    double df = 3.0 * t * t + a;
    if (df == 0.0) break;
    double next = t - f / df;
    if (!(std::abs(cubic(a, b, next)) < std::abs(f))) break;
    t = next;
  }
  return t;
}

}  // namespace

std::vector<double> depressed_cubic_roots(double a, double b) {
  std::vector<double> roots;
  const double disc = 4.0 * a * a * a + 27.0 * b * b;
  if (a < 0.0 && disc < 0.0) {
    // three distinct real roots, trigonometric form
    const double m = 2.0 * std::sqrt(-a / 3.0);
    double arg = 3.0 * b / (a * m);
    arg = std::clamp(arg, -1.0, 1.0);
    const double theta = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k) {
      roots.push_back(m * std::cos(theta - 2.0 * std::numbers::pi * k / 3.0));
    }
  } else if (a == 0.0) {
    roots.push_back(std::cbrt(-b));
  } else {
    // one real root (or a repeated pair at disc = 0), Cardano without cancellation
    const double d = std::sqrt(std::max(0.0, b * b / 4.0 + a * a * a / 27.0));
    const double A = std::cbrt(-b / 2.0 - std::copysign(d, b));
    const double t = A == 0.0 ? 0.0 : A - a / (3.0 * A);
    roots.push_back(t);
    // near a repeated pair the rounded discriminant may hide it; −t/2 is where it would sit
    if (a < 0.0) roots.push_back(-t / 2.0);
  }
  for (auto& t : roots) t = polish_cubic_root(a, b, t);
  std::sort(roots.begin(), roots.end());
  return roots;
}

QuarticMinimum quartic_min(const QuarticPoint& q) {
  // critical points: 4τ³ + 2uτ + v = 0  ⇔  τ³ + (u/2)τ + v/4 = 0
  QuarticMinimum best{std::numeric_limits<double>::infinity(), 0.0};
  for (double t : depressed_cubic_roots(q.u / 2.0, q.v / 4.0)) {
    double val = q(t);
    if (val < best.value) best = {val, t};
  }
  return best;
}

double quartic_tolerance(const QuarticPoint& q) {
  return 1e-12 * (1.0 + q.u * q.u + std::pow(std::abs(q.v), 4.0 / 3.0) + std::abs(q.w));
}

bool quartic_nonneg(const QuarticPoint& q) { return quartic_nonneg(q, quartic_tolerance(q)); }

bool quartic_nonneg(const QuarticPoint& q, double tol) { return quartic_min(q).value >= -tol; }

BoundaryChart::BoundaryChart(double tau, double u) : tau_(tau), u_(u) {
  if (!std::isfinite(tau) || !std::isfinite(u) || u < -2.0 * tau * tau) {
    throw Error(ErrorCode::ParamOutOfRange, "boundary chart requires u >= -2 tau^2");
  }
}

namespace {

// Half-space {n·y ≥ h} of V₃ (or of a u-slice) at parameter τ.
template <int D>
struct Cut {
  double tau;
  Eigen::Matrix<double, D, 1> n;
  double h;
};

struct Full {
  static constexpr int D = 3;
  using Vec = Eigen::Vector3d;
  static QuarticPoint quartic(const Vec& y) { return QuarticPoint(y); }
  Cut<3> cut(double tau) const { return {tau, v3_normal(tau), -tau * tau * tau * tau}; }
};

struct Slice {
  static constexpr int D = 2;
  using Vec = Eigen::Vector2d;
  double u0;
  QuarticPoint quartic(const Vec& y) const { return {u0, y[0], y[1]}; }
  Cut<2> cut(double tau) const {
    return {tau, Vec(tau, 1.0), -tau * tau * tau * tau - u0 * tau * tau};
  }
};

template <int D>
struct PolySolution {
  Eigen::Matrix<double, D, 1> y;
  std::vector<int> active;
};

// Projection of x onto {N y ≥ h} for at most D+1 cuts, by enumerating active sets of size ≤ D.
template <int D>
PolySolution<D> project_polyhedron(const Eigen::Matrix<double, D, 1>& x,
                                   const std::vector<Cut<D>>& cuts) {
  using Vec = Eigen::Matrix<double, D, 1>;
  const int m = static_cast<int>(cuts.size());
  PolySolution<D> best{x, {}};
  double best_score = std::numeric_limits<double>::infinity();
  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    std::vector<int> idx;
    for (int i = 0; i < m; ++i) {
      if (mask & (1u << i)) idx.push_back(i);
    }
    const int k = static_cast<int>(idx.size());
    if (k > D) continue;
    Vec y = x;
    double dual_violation = 0.0;
    if (k > 0) {
      Eigen::MatrixXd N(k, D);
      Eigen::VectorXd g(k);
      for (int i = 0; i < k; ++i) {
        N.row(i) = cuts[idx[i]].n.transpose();
        g[i] = cuts[idx[i]].h - cuts[idx[i]].n.dot(x);
      }
      Eigen::MatrixXd M = N * N.transpose();
      Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
      lu.setThreshold(1e-13);
      if (lu.rank() < k) continue;
      Eigen::VectorXd lambda = lu.solve(g);
      if (!lambda.allFinite()) continue;
      y = x + N.transpose() * lambda;
      dual_violation = std::max(0.0, -lambda.minCoeff());
    }
    double primal_violation = 0.0;
    for (const auto& c : cuts) {
      primal_violation = std::max(primal_violation, (c.h - c.n.dot(y)) / c.n.norm());
    }
    double score = std::max(primal_violation, dual_violation);
    if (score < best_score - 1e-15 || (score <= best_score + 1e-15 && k < static_cast<int>(best.active.size()))) {
      best_score = score;
      best.y = y;
      best.active = idx;
    }
  }
  return best;
}

template <class Geo>
struct CuttingPlaneResult {
  typename Geo::Vec y;
  std::vector<double> active_taus;
  int iterations = 0;
};

template <class Geo>
CuttingPlaneResult<Geo> cutting_plane(const Geo& geo, const typename Geo::Vec& x,
                                      const ProjectionOptions& opt) {
  constexpr int D = Geo::D;
  std::vector<Cut<D>> cuts;
  typename Geo::Vec y = x;
  for (int it = 0; it < opt.max_iterations; ++it) {
    QuarticMinimum qm = quartic_min(geo.quartic(y));
    if (qm.value >= -opt.tol) {
      CuttingPlaneResult<Geo> out{y, {}, it};
      for (const auto& c : cuts) out.active_taus.push_back(c.tau);
      return out;
    }
    Cut<D> cut = geo.cut(qm.tau);
    auto dup = std::find_if(cuts.begin(), cuts.end(),
                            [&](const Cut<D>& c) { return std::abs(c.tau - qm.tau) < 1e-14; });
    if (dup != cuts.end()) cuts.erase(dup);
    cuts.push_back(cut);
    PolySolution<D> sol = project_polyhedron<D>(x, cuts);
    y = sol.y;
    std::vector<Cut<D>> kept;
    for (int i : sol.active) kept.push_back(cuts[i]);
    cuts = std::move(kept);
  }
  throw Error(ErrorCode::NonConvergence,
              "cutting-plane projection hit the iteration cap of " + std::to_string(opt.max_iterations));
}

// Smooth-part polish: maximize c(τ)/√N(τ), the distance to the supporting half-space at τ.
// Returns the candidate foot when the projection onto that half-space lies in V₃.
template <class Geo>
bool polish_smooth(const Geo& geo, const typename Geo::Vec& x, double tau,
                   typename Geo::Vec& foot, double& out_tau) {
  QuarticPoint q = geo.quartic(x);
  const double u = q.u;
  auto eval = [&](double t, double& c, double& c1, double& c2, double& N, double& N1, double& N2) {
    double t2 = t * t;
    c = -(t2 * t2 + u * t2 + q.v * t + q.w);
    c1 = -(4.0 * t2 * t + 2.0 * u * t + q.v);
    c2 = -(12.0 * t2 + 2.0 * u);
    auto n = geo.cut(t).n;
    N = n.squaredNorm();
    if constexpr (Geo::D == 3) {
      N1 = 4.0 * t2 * t + 2.0 * t;
      N2 = 12.0 * t2 + 2.0;
    } else {
      N1 = 2.0 * t;
      N2 = 2.0;
    }
  };
  double c, c1, c2, N, N1, N2;
  for (int it = 0; it < 60; ++it) {
    eval(tau, c, c1, c2, N, N1, N2);
    double g = c1 * N - 0.5 * c * N1;
    double dg = c2 * N + 0.5 * c1 * N1 - 0.5 * c * N2;
    if (dg == 0.0 || !std::isfinite(dg)) return false;
    double step = g / dg;
    tau -= step;
    if (!std::isfinite(tau)) return false;
    if (std::abs(step) <= 1e-15 * (1.0 + std::abs(tau))) break;
  }
  eval(tau, c, c1, c2, N, N1, N2);
  if (!(c > 0.0)) return false;
  auto cut = geo.cut(tau);
  foot = x + (c / N) * cut.n;
  QuarticPoint fq = geo.quartic(foot);
  if (!quartic_nonneg(fq, 4.0 * quartic_tolerance(fq))) return false;
  out_tau = tau;
  return true;
}

bool polish_edge(const Eigen::Vector3d& x, double s, Eigen::Vector3d& foot, double& out_s) {
  // minimize ‖x − e(s)‖² over s > 0, then check x − e(s) ∈ −cone{n(s), n(−s)}
  for (int it = 0; it < 60; ++it) {
    Eigen::Vector3d d = v3_edge(s) - x;
    Eigen::Vector3d e1(-4.0 * s, 0.0, 4.0 * s * s * s);
    Eigen::Vector3d e2(-4.0, 0.0, 12.0 * s * s);
    double h1 = d.dot(e1);
    double h2 = e1.squaredNorm() + d.dot(e2);
    if (!(h2 > 0.0)) return false;
    double step = h1 / h2;
    s -= step;
    if (!std::isfinite(s)) return false;
    if (std::abs(step) <= 1e-15 * (1.0 + std::abs(s))) break;
  }
  s = std::abs(s);
  if (s < 1e-8) return false;
  foot = v3_edge(s);
  double sum = foot[2] - x[2];
  double diff = -x[1] / s;
  double a = 0.5 * (sum + diff);
  double b = 0.5 * (sum - diff);
  double scale = 1.0 + (x - foot).norm();
  if (a < -1e-12 * scale || b < -1e-12 * scale) return false;
  double residual = std::abs(x[0] - foot[0] + sum * s * s);
  if (residual > 1e-10 * scale * (1.0 + s * s)) return false;
  out_s = s;
  return true;
}

// Groups of active cut parameters: returns representative τ values.
std::vector<double> cluster_taus(std::vector<double> taus) {
  std::sort(taus.begin(), taus.end());
  std::vector<double> reps;
  std::vector<int> counts;
  for (double t : taus) {
    if (!reps.empty() && std::abs(t - reps.back()) < 1e-3 * (1.0 + std::abs(t))) {
      reps.back() = (reps.back() * counts.back() + t) / (counts.back() + 1);
      ++counts.back();
    } else {
      reps.push_back(t);
      counts.push_back(1);
    }
  }
  return reps;
}

}  // namespace

Projection project_to_v3(const Eigen::Vector3d& point, const ProjectionOptions& options) {
  if (!point.allFinite()) throw Error(ErrorCode::InvalidArgument, "non-finite point");
  Projection out;
  out.point = point;
  out.foot = point;
  if (quartic_nonneg(QuarticPoint(point))) return out;

  Full geo;
  CuttingPlaneResult<Full> cp = cutting_plane(geo, point, options);
  out.iterations = cp.iterations;
  out.foot = cp.y;
  out.distance = (cp.y - point).norm();
  std::vector<double> reps = cluster_taus(cp.active_taus);
  out.normal_taus = reps;

  // Exact polish; the cutting-plane point is kept when no certificate is found.
  double best_distance = std::numeric_limits<double>::infinity();
  for (double t0 : reps) {
    Eigen::Vector3d foot;
    double tau;
    if (polish_smooth(geo, point, t0, foot, tau)) {
      double d = (foot - point).norm();
      if (d < best_distance) {
        best_distance = d;
        out.foot = foot;
        out.distance = d;
        out.normal_taus = {tau};
      }
    }
  }
  if (reps.size() >= 2 || !std::isfinite(best_distance)) {
    double s0 = 0.0;
    for (double t : reps) s0 += std::abs(t);
    s0 /= static_cast<double>(std::max<std::size_t>(1, reps.size()));
    Eigen::Vector3d foot;
    double s;
    if (s0 > 0.0 && polish_edge(point, s0, foot, s)) {
      double d = (foot - point).norm();
      if (!std::isfinite(best_distance) || d < best_distance - 1e-12) {
        best_distance = d;
        out.foot = foot;
        out.distance = d;
        out.normal_taus = {-s, s};
      }
    }
  }
  return out;
}

SliceProjection project_to_v3_slice(double u0, const Eigen::Vector2d& point,
                                    const ProjectionOptions& options) {
  if (!point.allFinite() || !std::isfinite(u0)) {
    throw Error(ErrorCode::InvalidArgument, "non-finite point");
  }
  SliceProjection out;
  out.point = point;
  out.foot = point;
  Slice geo{u0};
  if (quartic_nonneg(geo.quartic(point))) return out;

  CuttingPlaneResult<Slice> cp = cutting_plane(geo, point, options);
  out.iterations = cp.iterations;
  out.foot = cp.y;
  out.distance = (cp.y - point).norm();
  std::vector<double> reps = cluster_taus(cp.active_taus);
  out.normal_taus = reps;

  double best_distance = std::numeric_limits<double>::infinity();
  for (double t0 : reps) {
    Eigen::Vector2d foot;
    double tau;
    if (polish_smooth(geo, point, t0, foot, tau)) {
      double d = (foot - point).norm();
      if (d < best_distance) {
        best_distance = d;
        out.foot = foot;
        out.distance = d;
        out.normal_taus = {tau};
      }
    }
  }
  if (u0 < 0.0 && (reps.size() >= 2 || !std::isfinite(best_distance))) {
    // corner of the slice at v = 0, w = u0²/4 where τ = ±s are both double roots
    const double s = std::sqrt(-u0 / 2.0);
    Eigen::Vector2d corner(0.0, u0 * u0 / 4.0);
    double sum = corner[1] - point[1];
    double diff = -point[0] / s;
    double a = 0.5 * (sum + diff), b = 0.5 * (sum - diff);
    double scale = 1.0 + (point - corner).norm();
    if (a >= -1e-12 * scale && b >= -1e-12 * scale) {
      out.foot = corner;
      out.distance = (corner - point).norm();
      out.normal_taus = {-s, s};
    }
  }
  return out;
}

double envelope_v3(double x, double y, double z, double t, const ProjectionOptions& options) {
  double d = project_to_v3(Eigen::Vector3d(x, y, z), options).distance;
  return t - 0.5 * d * d;
}

double envelope_v3_slice(double x, double y, double z, double t, const ProjectionOptions& options) {
  double d = project_to_v3_slice(x, Eigen::Vector2d(y, z), options).distance;
  return t - 0.5 * d * d;
}

}  // namespace hullsing
