// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any criterion fails.
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <cstdarg>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hullsing/body.hpp"
#include "hullsing/classify.hpp"
#include "hullsing/genfam.hpp"
#include "hullsing/legendre.hpp"
#include "hullsing/quadmin.hpp"
#include "hullsing/swallowtail.hpp"

using namespace hullsing;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : gen_(seed) {}
  double operator()(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  double normal() { return std::normal_distribution<double>()(gen_); }

 private:
  std::mt19937_64 gen_;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

// ---------------------------------------------------------------- oracles

double quartic(double t, double u, double v, double w) { return ((t * t + u) * t + v) * t + w; }

/// Minimum of a quadratic over {κ ≥ 0 on the first l coordinates, κ = 0 on the rest},
/// by enumerating which constrained coordinates are free.
double orthant_min(const Eigen::MatrixXd& Q, const Eigen::VectorXd& b, int l) {
  double best = 0.0;  // κ = 0
  for (unsigned mask = 1; mask < (1u << l); ++mask) {
    std::vector<int> S;
    for (int i = 0; i < l; ++i) {
      if (mask & (1u << i)) S.push_back(i);
    }
    const int m = static_cast<int>(S.size());
    Eigen::MatrixXd Qs(m, m);
    Eigen::VectorXd bs(m);
    for (int i = 0; i < m; ++i) {
      bs[i] = b[S[i]];
      for (int j = 0; j < m; ++j) Qs(i, j) = Q(S[i], S[j]);
    }
    const Eigen::VectorXd k = Qs.ldlt().solve(-bs);
    if (k.minCoeff() < 0.0) continue;
    best = std::min(best, 0.5 * k.dot(Qs * k) + bs.dot(k));
  }
  return best;
}

/// 1e-3-step grid minimum of ½pᵀQp + bᵀp over p ≥ 0. Every coordinate but the last is on the grid
/// (coarse pass, then a 1e-3 pass around the coarse winner); the last is minimized exactly.
double grid_qp_min(const Eigen::MatrixXd& Q, const Eigen::VectorXd& b, double L) {
  const int d = static_cast<int>(b.size());
  auto last_exact = [&](const Eigen::VectorXd& head) {
    // head holds the first d−1 coordinates
    double c = 0.0, lin = b[d - 1];
    for (int i = 0; i < d - 1; ++i) {
      lin += Q(d - 1, i) * head[i];
      c += b[i] * head[i];
      for (int j = 0; j < d - 1; ++j) c += 0.5 * Q(i, j) * head[i] * head[j];
    }
    const double s = std::max(0.0, -lin / Q(d - 1, d - 1));
    return c + lin * s + 0.5 * Q(d - 1, d - 1) * s * s;
  };
  if (d == 1) {
    double best = 1e300;
    for (double p = 0.0; p <= L; p += 1e-3) best = std::min(best, 0.5 * Q(0, 0) * p * p + b[0] * p);
    return best;
  }
  auto scan = [&](const Eigen::VectorXd& lo, double step, int n, Eigen::VectorXd& arg) {
    double best = 1e300;
    Eigen::VectorXd head(d - 1);
    const int total = d == 2 ? n : n * n;
    for (int flat = 0; flat < total; ++flat) {
      head[0] = lo[0] + step * (flat % n);
      if (d == 3) head[1] = lo[1] + step * (flat / n);
      if (head.minCoeff() < 0.0) continue;
      const double v = last_exact(head);
      if (v < best) best = v, arg = head;
    }
    return best;
  };
  Eigen::VectorXd arg = Eigen::VectorXd::Zero(d - 1);
  const double coarse = 0.02;
  scan(Eigen::VectorXd::Zero(d - 1), coarse, static_cast<int>(L / coarse) + 2, arg);
  const Eigen::VectorXd lo = (arg.array() - 0.05).matrix();
  return scan(lo, 1e-3, 101, arg);
}

/// Squared distance from b to the quadrant in the metric M.
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

Eigen::Vector3d chart_point(double tau, double du) {
  const double u = -2 * tau * tau + du;
  return {u, -4 * tau * tau * tau - 2 * u * tau, 3 * tau * tau * tau * tau + u * tau * tau};
}

struct ChartHit {
  double distance, tau, du;
};

/// Nearest point of the double-root boundary chart, by a dense grid with multi-start refinement.
ChartHit boundary_oracle(const Eigen::Vector3d& x) {
  auto dist = [&](double tau, double du) { return (chart_point(tau, du) - x).norm(); };
  const int nt = 361, nd = 701;
  std::vector<ChartHit> rows(nt);
  for (int i = 0; i < nt; ++i) {
    const double tau = -1.8 + 0.01 * i;
    rows[i] = {1e300, tau, 0.0};
    for (int j = 0; j < nd; ++j) {
      const double d = dist(tau, 0.02 * j);
      if (d < rows[i].distance) rows[i] = {d, tau, 0.02 * j};
    }
  }
  ChartHit best{1e300, 0, 0};
  for (int i = 0; i < nt; ++i) {
    const bool local = (i == 0 || rows[i].distance <= rows[i - 1].distance) &&
                       (i == nt - 1 || rows[i].distance <= rows[i + 1].distance);
    if (!local) continue;
    ChartHit h = rows[i];
    for (double s = 0.01; s > 1e-11; s /= 4) {
      for (int pass = 0; pass < 50; ++pass) {
        const ChartHit c = h;
        for (int a = -2; a <= 2; ++a) {
          for (int b = -2; b <= 2; ++b) {
            const double tau = c.tau + a * s, du = std::max(0.0, c.du + 2 * b * s);
            const double d = dist(tau, du);
            if (d < h.distance) h = {d, tau, du};
          }
        }
        if (h.distance == c.distance) break;
      }
    }
    if (h.distance < best.distance) best = h;
  }
  return best;
}

/// Angle between d and the cone spanned by the given unit generators.
double cone_angle(const Eigen::Vector3d& d, const std::vector<Eigen::Vector3d>& gens) {
  double best = M_PI;
  for (const auto& g : gens) best = std::min(best, std::acos(std::clamp(d.dot(g), -1.0, 1.0)));
  if (gens.size() == 2) {
    Eigen::Matrix<double, 3, 2> G;
    G << gens[0], gens[1];
    const Eigen::Vector2d c = G.colPivHouseholderQr().solve(d);
    if (c.minCoeff() >= 0.0) {
      const Eigen::Vector3d p = G * c;
      best = std::min(best, std::atan2(d.cross(p).norm(), d.dot(p)));
    }
  }
  return best;
}

/// Grid-and-Newton minimum of the quartic over τ.
double quartic_min_oracle(double u, double v, double w) {
  double best = 1e300, arg = 0.0;
  for (int i = 0; i <= 20000; ++i) {
    const double t = -4.0 + i * 4e-4;
    const double q = quartic(t, u, v, w);
    if (q < best) best = q, arg = t;
  }
  for (int it = 0; it < 30; ++it) {
    const double d1 = 4 * arg * arg * arg + 2 * u * arg + v, d2 = 12 * arg * arg + 2 * u;
    if (d2 <= 0.0) break;
    arg -= d1 / d2;
  }
  return std::min(best, quartic(arg, u, v, w));
}

/// The ten printed generators, transcribed independently of the library.
template <typename T>
std::array<T, 10> printed_generators(const Eigen::Matrix<T, 7, 1>& x) {
  const T p = x[0], q = x[1], r = x[2], u = x[3], v = x[4], w = x[5], s = x[6];
  return {32 * u * u * u * v * v + 64 * u * u * w * w + 144 * u * v * v * w - 27 * v * v * v * v +
              256 * w * w * w,
          2 * p * u + 3 * q * v + 4 * r * w,
          3 * p * v + 4 * q * w - 2 * r * u * v,
          16 * p * w - 8 * q * u * v - 8 * r * u * w - 3 * r * v * v,
          p * p + q * r * v + r * r * w,
          4 * p * q + r * r * v,
          2 * p * r - 2 * q * q - r * r * u,
          p * r * v - 4 * q * q * v - 4 * q * r * w,
          p * p * r - 4 * p * q * q + r * r * r * w,
          s};
}

/// Residual of e against stratum k of R̃₂: bit i of k−1 (first pair most significant) puts
/// pair i on the fiber side κᵢ ≥ 0, λᵢ = 0; otherwise κᵢ = 0, λᵢ ≥ 0. Always r = s = 0.
double r2_residual(int k, const ContactElement& e) {
  const unsigned bits = static_cast<unsigned>(k - 1);
  const double kap[2] = {e.p, e.q}, lam[2] = {e.u, e.v};
  double res = std::max(std::abs(e.r), std::abs(e.s));
  for (int i = 0; i < 2; ++i) {
    const bool fiber = (bits >> (1 - i)) & 1u;
    const double zero = fiber ? lam[i] : kap[i], nonneg = fiber ? kap[i] : lam[i];
    res = std::max({res, std::abs(zero), std::max(0.0, -nonneg)});
  }
  return res;
}

/// Residual of a reduced point (κ, λ, σ) against {σ = Φ₃, Φ₃,τ = 0, κ = −Φ₃,λ}, Φ₃ = ½P².
double phi3_oracle(const Vector7d& c) {
  const Eigen::Vector3d kappa = c.head<3>();
  const double u = c[3], v = c[4], w = c[5], sigma = c[6];
  if (kappa.norm() == 0.0) {
    // P(τ) = 0 at a real τ, σ = 0
    return std::max(std::abs(sigma), std::max(0.0, quartic_min_oracle(u, v, w)));
  }
  if (kappa[2] == 0.0) return kappa.cwiseAbs().maxCoeff();
  const double t = kappa[1] / kappa[2];
  const double P = quartic(t, u, v, w), dP = 4 * t * t * t + 2 * u * t + v;
  double res = (kappa + P * Eigen::Vector3d(t * t, t, 1.0)).cwiseAbs().maxCoeff();
  res = std::max(res, std::abs(P * dP));
  return std::max(res, std::abs(sigma - 0.5 * P * P));
}

// ---------------------------------------------------------------- criteria

Outcome criterion1() {
  const auto t0 = Clock::now();
  Uniform rnd(101);
  int instances = 0;
  double gap = 0.0, kkt = 0.0, under = 0.0;
  for (int d = 1; d <= 3; ++d) {
    for (int n = 0; n < 1000;) {
      Eigen::MatrixXd Q = Eigen::MatrixXd::Identity(d, d);
      for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j < d; ++j) Q(i, j) = Q(j, i) = rnd(-0.6, 0.6);
      }
      const double lmin = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(Q).eigenvalues()[0];
      if (lmin < 0.25) continue;
      Eigen::VectorXd b(d);
      for (int i = 0; i < d; ++i) b[i] = rnd(-1.0, 1.0);
      const QPSolution s = solve_orthant_qp(OrthantQP(Q, b, 0.0));
      const double grid = grid_qp_min(Q, b, b.norm() / lmin + 0.1);
      gap = std::max(gap, grid - s.value);
      under = std::max(under, s.value - grid);
      const Eigen::VectorXd g = Q * s.minimizer + b;
      kkt = std::max({kkt, std::max(0.0, -s.minimizer.minCoeff()), std::max(0.0, -g.minCoeff()),
                      std::abs(s.minimizer.dot(g)),
                      std::abs(s.value - 0.5 * s.minimizer.dot(Q * s.minimizer) - b.dot(s.minimizer))});
      ++n;
      ++instances;
    }
  }
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = gap <= 1e-5 && under <= 1e-12 && kkt <= 1e-10 && secs <= 10.0;
  o.detail = fmt("%d instances, grid minus solver max %.2e, solver below grid by %.2e, KKT %.2e, %.1f s",
                 instances, gap, under, kkt, secs);
  return o;
}

Outcome criterion2() {
  Uniform rnd(202);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double a = rnd(-0.95, 0.95), x = rnd(-2, 2), y = rnd(-2, 2), t = rnd(-1, 1);
    Eigen::Matrix2d M;
    M << 1, -a, -a, 1;
    M /= 1 - a * a;
    const double expected = t - 0.5 * quadrant_distance_squared({x, y}, M);
    worst = std::max(worst, std::abs(envelope_r2(x, y, 0.0, t, AlphaProfile(AlphaKind::constant, a)) - expected));
  }
  return {worst <= 1e-9, fmt("100 samples, max deviation %.2e", worst)};
}

Outcome criterion3() {
  const auto t0 = Clock::now();
  Uniform rnd(303);
  int disagree = 0, in_margin = 0, members = 0;
  const int N = 100000;
  for (int i = 0; i < N; ++i) {
    const double u = rnd(-3, 3), v = rnd(-3, 3), w = rnd(-3, 3);
    const bool member = quartic_nonneg(QuarticPoint(u, v, w));
    double g = 1e300;
    for (int k = 0; k < 10000; ++k) g = std::min(g, quartic(-2.0 + k * (4.0 / 9999), u, v, w));
    members += member;
    if (member && g < -1e-6) ++disagree;
    if (!member && g > 1e-6) ++disagree;
    if (std::abs(g) <= 1e-6) ++in_margin;
  }
  const double secs = seconds_since(t0);
  return {disagree == 0 && secs <= 30.0,
          fmt("%d samples, %d members, %d disagreements, %d inside the grid margin, %.1f s", N, members,
              disagree, in_margin, secs)};
}

Outcome criterion4() {
  const auto t0 = Clock::now();
  Uniform rnd(404);
  double dist_err = 0.0, angle = 0.0, idem = 0.0;
  int n = 0;
  while (n < 1000) {
    const Eigen::Vector3d x(rnd(-3, 3), rnd(-3, 3), rnd(-3, 3));
    if (quartic_min_oracle(x[0], x[1], x[2]) >= -1e-6) continue;
    ++n;
    const Projection p = project_to_v3(x);
    const ChartHit h = boundary_oracle(x);
    dist_err = std::max(dist_err, std::abs(p.distance - h.distance));
    std::vector<Eigen::Vector3d> gens = {-v3_normal(h.tau).normalized()};
    if (h.du <= 1e-6) gens.push_back(-v3_normal(-h.tau).normalized());
    angle = std::max(angle, cone_angle((x - p.foot).normalized(), gens));
    const Projection again = project_to_v3(p.foot);
    idem = std::max({idem, again.distance, (again.foot - p.foot).norm()});
  }
  const double secs = seconds_since(t0);
  return {dist_err <= 1e-6 && angle <= 1e-6 && idem <= 1e-9,
          fmt("1000 exterior points, distance error %.2e, normal angle %.2e rad, reprojection %.2e, %.1f s",
              dist_err, angle, idem, secs)};
}

Outcome criterion5() {
  const IdealV3 ideal;
  Uniform rnd(505);
  double on = 0.0, transcription = 0.0, off_min = 1e300;
  for (int i = 0; i < 1000; ++i) {
    const double td = rnd(-1.5, 1.5), ud = rnd(-2 * td * td, 2.0), rd = rnd(0.0, 2.0);
    const long double t = td, u = ud, r = rd;
    Eigen::Matrix<long double, 7, 1> x;
    x << r * t * t + r * u / 2, r * t, r, u, -4 * t * t * t - 2 * u * t,
        3 * t * t * t * t + u * t * t - u * u / 4, 0.0L;
    const auto mine = printed_generators(x);
    const auto lib = ideal.evaluate(x);
    for (int g = 0; g < 10; ++g) {
      on = std::max({on, static_cast<double>(std::abs(mine[g])), std::abs(lib[g])});
    }
  }
  for (int i = 0; i < 1000; ++i) {
    Vector7d x;
    for (int j = 0; j < 7; ++j) x[j] = rnd(-1, 1);
    const auto mine = printed_generators<double>(x);
    const auto lib = ideal.evaluate(ContactElement(x));
    double m = 0.0;
    for (int g = 0; g < 10; ++g) {
      m = std::max(m, std::abs(mine[g]));
      transcription = std::max(transcription, std::abs(mine[g] - lib[g]) / (1 + std::abs(mine[g])));
    }
    off_min = std::min(off_min, m);
  }
  const IdealReport rep = verify_ideal(1000, 1e-9, 505);
  const bool listed = std::find(rep.annihilating.begin(), rep.annihilating.end(), "V3bar stratum 2") !=
                      rep.annihilating.end();
  Outcome o;
  o.pass = on <= 1e-9 && off_min >= 1e-3 && transcription <= 1e-12 && rep.passed && listed &&
           !rep.resolution.empty();
  o.detail = fmt("chart max |g| %.2e, off-variety min max|g| %.2e, library vs transcription %.1e, report %s",
                 on, off_min, transcription, rep.passed ? "passed with resolution recorded" : "failed");
  return o;
}

Outcome criterion6() {
  using C = std::complex<double>;
  Rng rng(606);
  double worst = 0.0, lib_worst = 0.0;
  int checks = 0;
  for (Variety v : {Variety::R1, Variety::R2, Variety::R3, Variety::V3tilde, Variety::V3bar}) {
    for (int k = 1; k <= stratum_count(v); ++k) {
      for (int i = 0; i < 100; ++i) {
        const Eigen::Vector3d a = sample_params(v, k, rng);
        const Vector7d x = stratum_coordinates<double>(v, k, a);
        for (int d = 0; d < 3; ++d) {
          // complex step: exact first derivative of the chart along e_d
          const double h = 1e-20;
          Eigen::Matrix<C, 3, 1> ac = a.cast<C>();
          ac[d] += C(0.0, h);
          const Eigen::Matrix<C, 7, 1> xc = stratum_coordinates<C>(v, k, ac);
          Vector7d dx;
          for (int j = 0; j < 7; ++j) dx[j] = xc[j].imag() / h;
          const double form = x[0] * dx[3] + x[1] * dx[4] + x[2] * dx[5] + dx[6];
          worst = std::max(worst, std::abs(form));
          lib_worst = std::max(lib_worst, std::abs(contact_tangency(v, k, a, Eigen::Vector3d::Unit(d))));
          ++checks;
        }
      }
    }
  }
  return {worst <= 1e-10 && lib_worst <= 1e-10,
          fmt("%d stratum-direction samples, complex-step max %.2e, library max %.2e", checks, worst, lib_worst)};
}

Polynomial random_poly(Uniform& rnd, int degree, double scale) {
  Polynomial out = Polynomial::constant(rnd(-scale, scale));
  std::vector<Polynomial> layer = {Polynomial::constant(1.0)};
  for (int deg = 1; deg <= degree; ++deg) {
    std::vector<Polynomial> next;
    std::set<std::string> seen;
    for (const auto& m : layer) {
      for (int i = 0; i < 7; ++i) {
        Polynomial p = m * Polynomial::variable(i);
        const std::string key = p.to_string(kContactVars);
        if (seen.insert(key).second) next.push_back(p);
      }
    }
    for (const auto& m : next) out += rnd(-scale, scale) * m;
    layer = next;
  }
  return out;
}

Outcome criterion7() {
  Uniform rnd(707);
  double worst = 0.0;
  const Polynomial base = GeneratingFamily::swallowtail().poly();
  for (int i = 0; i < 100; ++i) {
    const Polynomial K = random_poly(rnd, 2, 1.0);
    const Polynomial F = base + random_poly(rnd, 3, 0.3);
    const Eigen::Vector3d kappa(rnd(-0.5, 0.5), rnd(-0.5, 0.5), rnd(-0.5, 0.5));
    const Eigen::Vector3d mu(rnd(-0.5, 0.5), rnd(-0.5, 0.5), rnd(-0.5, 0.5));
    const double t = rnd(-0.5, 0.5);
    Vector7d x;
    x << kappa, mu, t;
    Vector7d e;
    e.head<3>() = kappa;
    double kf = 0.0;
    for (int j = 0; j < 3; ++j) {
      e[3 + j] = F.derivative(j)(x);
      kf += kappa[j] * e[3 + j];
    }
    e[6] = F(x) - kf;
    const double expected = -K(e);
    worst = std::max(worst, std::abs(lemma2_finite_difference(K, F, kappa, mu, t, 1e-4) - expected));
  }
  return {worst <= 1e-5, fmt("100 random (K, F), max |difference| %.2e at step 1e-4", worst)};
}

Outcome criterion8() {
  const auto t0 = Clock::now();
  Grid3 g;
  g.lo = {-1, -1, -0.5};
  g.hi = {1, 1, 0.5};
  g.n = {41, 41, 41};
  const AlphaProfile alpha(AlphaKind::linear, 0.3);
  struct Item {
    const char* name;
    GeneratingFamily F;
    Variety v;
  };
  const std::vector<Item> items = {
      {"item1", GeneratingFamily::smooth(), Variety::R0},
      {"item2", GeneratingFamily::fold(), Variety::R1},
      {"item3", GeneratingFamily::angle(alpha), Variety::R2},
      {"item4", GeneratingFamily::corner(0.2, -0.1, 0.3), Variety::R3},
      {"item5", GeneratingFamily::swallowtail(), Variety::V3tilde},
  };
  std::string detail;
  bool pass = true;
  for (const auto& it : items) {
    const FrontSample s = front(it.F, it.v, g);
    double oracle = 0.0, envelope = 0.0;
    const Polynomial& P = it.F.poly();
    std::array<Polynomial, 3> d1;
    std::array<std::array<Polynomial, 3>, 3> d2;
    for (int i = 0; i < 3; ++i) {
      d1[i] = P.derivative(i);
      for (int j = 0; j < 3; ++j) d2[i][j] = d1[i].derivative(j);
    }
    const int l = static_cast<int>(it.v) - static_cast<int>(Variety::R0);
    for (int i = 0; i < g.size(); ++i) {
      const Eigen::Vector3d x = g.node(i);
      const double t = s.t[i];
      double R = 0.0;
      if (it.v == Variety::V3tilde) {
        const Projection pr = project_to_v3(x);
        oracle = std::max(oracle, std::abs(t - 0.5 * pr.distance * pr.distance));
        R = envelope_v3(x[0], x[1], x[2], t);
      } else {
        Vector7d at;
        at << 0, 0, 0, x, 0.0;
        Eigen::Matrix3d Q;
        Eigen::Vector3d b;
        for (int a = 0; a < 3; ++a) {
          b[a] = d1[a](at);
          for (int c = 0; c < 3; ++c) Q(a, c) = d2[a][c](at);
        }
        const double m = P(at) + orthant_min(Q, b, l);
        oracle = std::max(oracle, std::abs(t + m));
        switch (it.v) {
          case Variety::R0: R = envelope_r0(x[0], x[1], x[2], t); break;
          case Variety::R1: R = envelope_r1(x[0], x[1], x[2], t); break;
          case Variety::R2: R = envelope_r2(x[0], x[1], x[2], t, alpha); break;
          default: {
            R3Options o;
            o.validate_with_grid = false;
            R = envelope_r3(x[0], x[1], x[2], t, it.F, o);
          }
        }
      }
      envelope = std::max(envelope, std::abs(R));
    }
    pass = pass && oracle <= 1e-6 && envelope <= 1e-6;
    detail += fmt("%s oracle %.1e envelope %.1e; ", it.name, oracle, envelope);
  }
  // item 5 against the brute-force boundary chart on a sample of nodes
  const FrontSample s5 = front(GeneratingFamily::swallowtail(), Variety::V3tilde, g);
  double brute = 0.0;
  for (int i = 0; i < g.size(); i += 997) {
    const Eigen::Vector3d x = g.node(i);
    const double d = quartic_min_oracle(x[0], x[1], x[2]) >= 0.0 ? 0.0 : boundary_oracle(x).distance;
    brute = std::max(brute, std::abs(s5.t[i] - 0.5 * d * d));
  }
  const double secs = seconds_since(t0);
  pass = pass && brute <= 1e-6 && secs <= 120.0;
  detail += fmt("item5 brute-force chart %.1e; 41^3 grid, %.1f s", brute, secs);
  return {pass, detail};
}

Outcome criterion9() {
  auto minor_rank4 = [](const Eigen::Matrix<double, 8, 4>& O) {
    // largest 4x4 minor, relative to the fourth power of the Frobenius norm
    const double n = O.norm();
    if (n == 0.0) return 0.0;
    double best = 0.0;
    for (int a = 0; a < 8; ++a)
      for (int b = a + 1; b < 8; ++b)
        for (int c = b + 1; c < 8; ++c)
          for (int d = c + 1; d < 8; ++d) {
            Eigen::Matrix4d M;
            M << O.row(a), O.row(b), O.row(c), O.row(d);
            best = std::max(best, std::abs(M.determinant()));
          }
    return best / std::pow(n, 4);
  };
  auto transcribed = [](double x, double y, double z, double t) {
    const double w = 2 * t - x * x - y * y - z * z;
    Eigen::Matrix<double, 8, 4> O;
    O << 0, 0, z, y, 0, z, 0, x, 0, y, x, 0, x, w + x * x, 0, 0, y, 0, w + y * y, 0, z, 0, 0,
        w + z * z, w, 0, 0, 0, 0, 3 * x, 2 * y, z;
    return O;
  };
  const bool origin = minor_rank4(transcribed(0, 0, 0, 0)) == 0.0 && omega_rank(0, 0, 0, 0) < 4;
  Uniform rnd(909);
  int full = 0, lib_full = 0;
  double weakest = 1e300, mismatch = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double x = rnd.normal(), y = rnd.normal(), z = rnd.normal(), t = rnd.normal();
    const double m = minor_rank4(transcribed(x, y, z, t));
    weakest = std::min(weakest, m);
    full += m > 1e-10;
    lib_full += omega_rank(x, y, z, t) == 4;
    mismatch = std::max(mismatch, (omega_matrix(x, y, z, t) - transcribed(x, y, z, t)).cwiseAbs().maxCoeff());
  }
  return {origin && full == 1000 && lib_full == 1000 && mismatch == 0.0,
          fmt("origin rank < 4: %s; rank 4 at %d/1000 (library %d/1000), weakest relative minor %.2e",
              origin ? "yes" : "no", full, lib_full, weakest)};
}

Outcome criterion10() {
  Uniform rnd(1010);
  std::vector<int> targets;
  double a1a3 = 0.0;
  for (int k = 1; k <= 4; ++k) {
    std::array<double, 4> worst{};
    for (int i = 0; i < 100; ++i) {
      Eigen::Vector3d a;
      if (k <= 2) {
        a = {rnd(0.0, 2.0), rnd(-2.0, 2.0), rnd(0.0, 2.0)};
      } else {
        const double q = rnd(-1.5, 1.5);
        a = {q, -2.0 * q * q - rnd(0.0, 2.0), rnd(0.0, 2.0)};
      }
      const ContactElement e = a1a3_substitute(m0star_point(k, a));
      for (int j = 1; j <= 4; ++j) worst[j - 1] = std::max(worst[j - 1], r2_residual(j, e));
    }
    const auto it = std::min_element(worst.begin(), worst.end());
    targets.push_back(1 + static_cast<int>(it - worst.begin()));
    a1a3 = std::max(a1a3, *it);
  }
  std::vector<int> sorted = targets;
  std::sort(sorted.begin(), sorted.end());
  const bool onto = sorted == std::vector<int>{1, 2, 3, 4} && a1a3 <= 1e-12;

  // Φ₃ reduction of the first two strata of Ṽ₃
  std::array<double, 2> phi{};
  std::array<int, 2> inside{};
  double map_diff = 0.0;
  for (int k = 1; k <= 2; ++k) {
    for (int i = 0; i < 100; ++i) {
      const double t = rnd(-1.5, 1.5), u = rnd(-2 * t * t, 2.0);
      const double v = -4 * t * t * t - 2 * u * t, w0 = 3 * t * t * t * t + u * t * t;
      Vector7d e;
      if (k == 1) {
        e << 0, 0, 0, u, v, w0 + rnd(0.0, 2.0), 0;
      } else {
        const double r = rnd(0.0, 2.0);
        e << r * t * t, r * t, r, u, v, w0, 0;
      }
      Vector7d c = e;
      c[5] = e[5] - e[2];
      c[6] = e[6] + e[2] * e[2] / 2;
      map_diff = std::max(map_diff, (phi3_reduce(ContactElement(e)).vec() - c).cwiseAbs().maxCoeff());
      const double r = phi3_oracle(c);
      phi[k - 1] = std::max(phi[k - 1], r);
      inside[k - 1] += r <= 1e-10;
    }
  }
  const bool phi_ok = phi[0] <= 1e-10 && phi[1] <= 1e-10 && map_diff == 0.0;
  return {onto && phi_ok,
          fmt("A1A3 strata -> R2 strata %d,%d,%d,%d residual %.1e (%s); Phi3 stratum 1 max %.2e (%d/100 "
              "inside), stratum 2 max %.2e (%d/100 inside)",
              targets[0], targets[1], targets[2], targets[3], a1a3, onto ? "onto" : "not onto", phi[0],
              inside[0], phi[1], inside[1])};
}

Outcome criterion11() {
  const auto t0 = Clock::now();
  auto run = [](const PointCloudBody& b, int dim, int k) { return classify(b, cube_sphere_grid(dim, k)).summary; };
  auto singular_families = [](const CatalogueSummary& s) {
    int n = 0;
    for (const auto& [label, c] : s.family_counts) n += c;
    return n;
  };
  const PointCloudBody ell = make_ellipsoid(), pea = make_peanut(), cal = make_caltrop();
  const auto e8 = run(ell, 3, 8), e16 = run(ell, 3, 16);
  const bool ell_ok = singular_families(e8) == 0 && singular_families(e16) == 0;

  const auto p8 = run(pea, 3, 8), p16 = run(pea, 3, 16), p32 = run(pea, 3, 32);
  auto one_2a1 = [&](const CatalogueSummary& s) {
    return s.family_counts.at("2A1") == 1 && singular_families(s) == 1;
  };
  const double n8 = p8.label_counts.at("2A1"), n16 = p16.label_counts.at("2A1"),
               n32 = p32.label_counts.at("2A1");
  const double r1 = n16 / n8, r2 = n32 / n16;
  const bool pea_ok = one_2a1(p8) && one_2a1(p16) && one_2a1(p32) && std::abs(r1 - 2) <= 0.3 &&
                      std::abs(r2 - 2) <= 0.3;

  const auto c8 = run(cal, 4, 8), c16 = run(cal, 4, 16);
  const bool cal_ok = c8.label_counts.at("4A1") == 1 && c16.label_counts.at("4A1") == 1 &&
                      c8.family_counts == c16.family_counts;
  const bool stable = e8.family_counts == e16.family_counts && p8.family_counts == p16.family_counts &&
                      p16.family_counts == p32.family_counts;
  const double secs = seconds_since(t0);
  return {ell_ok && pea_ok && cal_ok && stable && secs <= 120.0,
          fmt("ellipsoid families %d/%d; peanut 2A1 directions %g, %g, %g (ratios %.2f, %.2f); caltrop "
              "4A1 candidates %d/%d, 3A1 families %d/%d; %.1f s",
              singular_families(e8), singular_families(e16), n8, n16, n32, r1, r2,
              c8.label_counts.at("4A1"), c16.label_counts.at("4A1"), c8.family_counts.at("3A1"),
              c16.family_counts.at("3A1"), secs)};
}

int cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(HULLSING_CLI_PATH) + " " + args + " >" + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome criterion12() {
  const fs::path root = fs::temp_directory_path() / ("hullsing_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(root);
  fs::create_directories(root);
  const fs::path log = root / "log.txt";
  const std::vector<std::string> runs = {
      "envelope --form r2 --grid x=-1:1:21,y=-1:1:21",
      "front --family item5 --grid x=-1:1:9,y=-1:1:9,z=-0.5:0.5:9",
      "verify",
      "classify --body peanut --resolution 8",
      "swallowtail --mode section",
  };
  int files = 0, differing = 0, failed = 0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const fs::path a = root / ("a" + std::to_string(i)), b = root / ("b" + std::to_string(i));
    failed += cli(runs[i] + " --seed 7 --out " + a.string(), log) != 0;
    failed += cli(runs[i] + " --seed 7 --out " + b.string(), log) != 0;
    for (const auto& entry : fs::directory_iterator(a)) {
      ++files;
      differing += slurp(entry.path()) != slurp(b / entry.path().filename());
    }
  }
  const int clean = cli("verify --suite ideal --seed 7 --out " + (root / "clean").string(), log);
  const int tampered = cli("verify --suite ideal --tamper ideal:3 --seed 7 --out " + (root / "tamper").string(), log);
  fs::remove_all(root);
  return {failed == 0 && files > 0 && differing == 0 && clean == 0 && tampered == 1,
          fmt("%d files over %zu commands, %d differ; ideal suite exit %d, tampered exit %d", files,
              runs.size(), differing, clean, tampered)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"orthant QP oracle equivalence", criterion1},
      {"R2 metric identity", criterion2},
      {"swallowtail membership exactness", criterion3},
      {"projection correctness", criterion4},
      {"ideal verification", criterion5},
      {"contact tangency of strata", criterion6},
      {"family transport finite differences", criterion7},
      {"front and envelope zero set", criterion8},
      {"Omega rank", criterion9},
      {"A1A3 substitution and Phi3 reduction", criterion10},
      {"classification desk experiments", criterion11},
      {"CLI determinism and tamper hook", criterion12},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
