#include "hullsing/body.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Eigenvalues>

#include "hullsing/rng.hpp"

namespace hullsing {

namespace {

// Farthest-point sweeps; exact for the centrally symmetric and near-symmetric built-ins,
// a lower bound within a few percent otherwise.
double sweep_diameter(const Eigen::MatrixXd& P) {
  const Eigen::VectorXd centroid = P.rowwise().mean();
  Eigen::Index a = 0;
  (P.colwise() - centroid).colwise().squaredNorm().maxCoeff(&a);
  double best = 0.0;
  for (int it = 0; it < 4; ++it) {
    Eigen::Index b = 0;
    const double d2 = (P.colwise() - P.col(a)).colwise().squaredNorm().maxCoeff(&b);
    if (d2 <= best * best) break;
    best = std::sqrt(d2);
    a = b;
  }
  return best;
}

std::vector<Eigen::Vector3d> fibonacci_points(int n) {
  std::vector<Eigen::Vector3d> out;
  out.reserve(n);
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / n;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * i;
    out.emplace_back(r * std::cos(phi), r * std::sin(phi), z);
  }
  return out;
}

Eigen::MatrixXd stack(const std::vector<Eigen::VectorXd>& pts, int dim) {
  Eigen::MatrixXd P(dim, static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) P.col(static_cast<Eigen::Index>(i)) = pts[i];
  return P;
}

int scaled(int base, double density) {
  if (!(density > 0.0) || !std::isfinite(density)) {
    throw Error(ErrorCode::InvalidArgument, "density must be positive");
  }
  return std::max(16, static_cast<int>(std::lround(base * density)));
}

// Smooth minimum −k·log(e^{−a/k} + e^{−b/k}) with k = 1 and its weights.
double smin(double a, double b, double* wa = nullptr, double* wb = nullptr) {
  const double m = std::min(a, b);
  const double ea = std::exp(-(a - m)), eb = std::exp(-(b - m));
  if (wa) *wa = ea / (ea + eb);
  if (wb) *wb = eb / (ea + eb);
  return m - std::log(ea + eb);
}

struct Peanut {
  Eigen::Vector3d c1{-1.5, 0.0, 0.0}, c2{1.5, 0.0, 0.0};
  double r1 = 1.0, r2 = 1.0;

  double operator()(const Eigen::Vector3d& x) const {
    return smin((x - c1).norm() - r1, (x - c2).norm() - r2);
  }
  Eigen::Vector3d gradient(const Eigen::Vector3d& x) const {
    double w1 = 0, w2 = 0;
    const Eigen::Vector3d d1 = x - c1, d2 = x - c2;
    smin(d1.norm() - r1, d2.norm() - r2, &w1, &w2);
    Eigen::Vector3d g = Eigen::Vector3d::Zero();
    if (d1.norm() > 0) g += w1 * d1.normalized();
    if (d2.norm() > 0) g += w2 * d2.normalized();
    return g;
  }
};

// Profile curve (x₁, ρ) of a body of revolution about e₁: first crossing of {f > 0} along
// rays from `centre` in the half plane ρ ≥ 0.
std::vector<Eigen::Vector2d> profile_rays(const Peanut& f, const Eigen::Vector3d& centre, int rays,
                                          bool right) {
  std::vector<Eigen::Vector2d> out;
  for (int i = 0; i <= rays; ++i) {
    const double phi = std::numbers::pi * i / rays;
    const Eigen::Vector3d dir(std::cos(phi), std::sin(phi), 0.0);
    double lo = 0.0, hi = 0.0;
    for (double r = 0.01; r < 4.0; r += 0.01) {
      if (f(centre + r * dir) > 0.0) {
        hi = r;
        break;
      }
      lo = r;
    }
    if (hi == 0.0) continue;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (f(centre + mid * dir) > 0.0 ? hi : lo) = mid;
    }
    const Eigen::Vector3d p = centre + 0.5 * (lo + hi) * dir;
    if ((right && p[0] >= 0.0) || (!right && p[0] < 0.0)) out.emplace_back(p[0], p[1]);
  }
  return out;
}

}  // namespace

PointCloudBody::PointCloudBody(Eigen::MatrixXd points, std::optional<AnalyticDescriptor> analytic)
    : points_(std::move(points)), analytic_(std::move(analytic)) {
  const int n = dim();
  if (n != 3 && n != 4) {
    throw Error(ErrorCode::InvalidArgument,
                "bodies live in R^3 or R^4, got dimension " + std::to_string(n));
  }
  if (!points_.allFinite()) throw Error(ErrorCode::InvalidArgument, "non-finite coordinate");
  if (size() < n + 1) {
    throw Error(ErrorCode::EmptyBody, "need at least " + std::to_string(n + 1) + " points");
  }
  const Eigen::MatrixXd centred = points_.colwise() - points_.rowwise().mean();
  const Eigen::MatrixXd cov = centred * centred.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  const auto& ev = es.eigenvalues();
  if (!(ev[0] > 1e-20 * std::max(1.0, ev[n - 1]))) {
    throw Error(ErrorCode::EmptyBody, "points are not affinely independent");
  }
  diameter_ = sweep_diameter(points_);
}

PointCloudBody make_ellipsoid(double density, const Eigen::Vector3d& axes) {
  if (!(axes.minCoeff() > 0.0)) throw Error(ErrorCode::InvalidArgument, "axes must be positive");
  std::vector<Eigen::VectorXd> pts;
  for (const auto& s : fibonacci_points(scaled(3000, density))) {
    pts.emplace_back(axes.cwiseProduct(s));
  }
  AnalyticDescriptor a;
  a.f = [axes](const Eigen::VectorXd& x) {
    return x.cwiseQuotient(axes).squaredNorm() - 1.0;
  };
  a.gradient = [axes](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    return 2.0 * x.cwiseQuotient(axes.cwiseProduct(axes));
  };
  return PointCloudBody(stack(pts, 3), a);
}

PointCloudBody make_peanut(double density, double perturbation) {
  Peanut f;
  f.r2 = 1.0 + perturbation;
  if (!(f.r2 > 0.2)) throw Error(ErrorCode::InvalidArgument, "perturbation too negative");
  auto left = profile_rays(f, f.c1, 2000, false);
  auto right = profile_rays(f, f.c2, 2000, true);
  std::vector<Eigen::Vector2d> profile = left;
  std::sort(profile.begin(), profile.end(),
            [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) { return a[0] < b[0]; });
  std::vector<Eigen::Vector2d> rhs(right.begin(), right.end());
  std::sort(rhs.begin(), rhs.end(),
            [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) { return a[0] < b[0]; });
  profile.insert(profile.end(), rhs.begin(), rhs.end());

  // resample by arclength and revolve
  const double h = 0.05 / std::sqrt(density);
  if (!(h > 0.0) || !std::isfinite(h)) throw Error(ErrorCode::InvalidArgument, "bad density");
  std::vector<Eigen::VectorXd> pts;
  double carried = 0.0;
  for (std::size_t i = 0; i + 1 < profile.size(); ++i) {
    const Eigen::Vector2d a = profile[i], b = profile[i + 1];
    const double len = (b - a).norm();
    double s = carried;
    while (s <= len) {
      const Eigen::Vector2d q = a + (len > 0 ? s / len : 0.0) * (b - a);
      const int m = std::max(1, static_cast<int>(std::ceil(2.0 * std::numbers::pi * q[1] / h)));
      for (int k = 0; k < m; ++k) {
        const double th = 2.0 * std::numbers::pi * k / m;
        pts.push_back(Eigen::Vector3d(q[0], q[1] * std::cos(th), q[1] * std::sin(th)));
      }
      s += h;
    }
    carried = s - len;
  }
  AnalyticDescriptor a;
  a.f = [f](const Eigen::VectorXd& x) { return f(Eigen::Vector3d(x)); };
  a.gradient = [f](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    return f.gradient(Eigen::Vector3d(x));
  };
  return PointCloudBody(stack(pts, 3), a);
}

namespace {

constexpr double kLegTwist = 2.0;
constexpr double kCapCentre = 0.4;
constexpr double kCapRadius = 1.5;

// x₄ = g(ξ) = −|ξ|² + |ξ|⁴ − γξ₁ξ₂ξ₃ has its four lowest points on the diagonals ξ ∝ (±1,±1,±1)
// with ξ₁ξ₂ξ₃ > 0, the vertices of a regular tetrahedron.
double leg_height(double x, double y, double z) {
  const double r2 = x * x + y * y + z * z;
  return -r2 + r2 * r2 - kLegTwist * x * y * z;
}

}  // namespace

Eigen::Vector4d caltrop_vertex(int i) {
  if (i < 0 || i > 3) throw Error(ErrorCode::InvalidArgument, "caltrop has bumps 0..3");
  static const double signs[4][3] = {{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
  // critical radius along the diagonal: 4t² − (γ/√3)t − 2 = 0
  const double b = kLegTwist / std::sqrt(3.0);
  const double t = (b + std::sqrt(b * b + 32.0)) / 8.0;
  const double a = t / std::sqrt(3.0);
  const Eigen::Vector3d xi(a * signs[i][0], a * signs[i][1], a * signs[i][2]);
  return {xi[0], xi[1], xi[2], leg_height(xi[0], xi[1], xi[2])};
}

Eigen::Vector4d caltrop_symmetric_direction() { return {0.0, 0.0, 0.0, -1.0}; }

PointCloudBody make_caltrop(double density) {
  if (!(density > 0.0) || !std::isfinite(density)) {
    throw Error(ErrorCode::InvalidArgument, "density must be positive");
  }
  const Eigen::Vector4d c(0.0, 0.0, 0.0, kCapCentre);
  const double h = 0.08 / std::cbrt(density);
  const int n = static_cast<int>(2.0 * kCapRadius / h);
  std::vector<Eigen::VectorXd> pts;
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      for (int k = 0; k <= n; ++k) {
        const double x = -kCapRadius + i * h, y = -kCapRadius + j * h, z = -kCapRadius + k * h;
        const Eigen::Vector4d p(x, y, z, leg_height(x, y, z));
        if ((p - c).norm() <= kCapRadius) pts.emplace_back(p);
      }
    }
  }
  Rng rng(11);
  const int cap = scaled(20000, density);
  for (int i = 0; i < cap; ++i) {
    const Eigen::Vector4d u(rng.normal(), rng.normal(), rng.normal(), rng.normal());
    const Eigen::Vector4d p = c + kCapRadius * u.normalized();
    if (p[3] >= leg_height(p[0], p[1], p[2])) pts.emplace_back(p);
  }
  AnalyticDescriptor a;
  a.f = [c](const Eigen::VectorXd& x) {
    return std::max(leg_height(x[0], x[1], x[2]) - x[3], (x - c).norm() - kCapRadius);
  };
  a.gradient = [c](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    if (leg_height(x[0], x[1], x[2]) - x[3] >= (x - c).norm() - kCapRadius) {
      const double r2 = x.head<3>().squaredNorm();
      Eigen::Vector4d g;
      for (int k = 0; k < 3; ++k) {
        g[k] = -2.0 * x[k] + 4.0 * r2 * x[k] -
               kLegTwist * x[(k + 1) % 3] * x[(k + 2) % 3];
      }
      g[3] = -1.0;
      return g;
    }
    return (x - c).normalized();
  };
  return PointCloudBody(stack(pts, 4), a);
}

PointCloudBody make_torus(double density) {
  const double R = 1.0, r = 0.35;
  const int nu = scaled(120, std::sqrt(density)), nv = scaled(42, std::sqrt(density));
  std::vector<Eigen::VectorXd> pts;
  for (int i = 0; i < nu; ++i) {
    const double u = 2.0 * std::numbers::pi * i / nu;
    for (int j = 0; j < nv; ++j) {
      const double v = 2.0 * std::numbers::pi * j / nv;
      const double rho = R + r * std::cos(v);
      pts.push_back(Eigen::Vector3d(rho * std::cos(u), rho * std::sin(u), r * std::sin(v)));
    }
  }
  AnalyticDescriptor a;
  a.f = [R, r](const Eigen::VectorXd& x) {
    const double q = std::hypot(x[0], x[1]) - R;
    return q * q + x[2] * x[2] - r * r;
  };
  a.gradient = [R](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    const double rho = std::hypot(x[0], x[1]);
    const double q = rho - R;
    Eigen::Vector3d g(0.0, 0.0, 2.0 * x[2]);
    if (rho > 0) {
      g[0] = 2.0 * q * x[0] / rho;
      g[1] = 2.0 * q * x[1] / rho;
    }
    return g;
  };
  return PointCloudBody(stack(pts, 3), a);
}

PointCloudBody make_builtin_body(const std::string& name, double density) {
  if (name == "ellipsoid") return make_ellipsoid(density);
  if (name == "peanut") return make_peanut(density);
  if (name == "caltrop") return make_caltrop(density);
  if (name == "torus") return make_torus(density);
  throw Error(ErrorCode::InvalidArgument, "unknown body '" + name + "'");
}

}  // namespace hullsing
