#include "hullsing/legendre.hpp"

#include <algorithm>
#include <limits>

#include <unsupported/Eigen/AutoDiff>

#include "hullsing/body.hpp"
#include "hullsing/swallowtail.hpp"

namespace hullsing {

const char* to_string(Variety v) {
  switch (v) {
    case Variety::R0: return "R0";
    case Variety::R1: return "R1";
    case Variety::R2: return "R2";
    case Variety::R3: return "R3";
    case Variety::V3tilde: return "V3tilde";
    case Variety::V3bar: return "V3bar";
    case Variety::Phi3: return "Phi3";
  }
  return "R0";
}

Variety variety_from_string(const std::string& name) {
  for (auto v : {Variety::R0, Variety::R1, Variety::R2, Variety::R3, Variety::V3tilde,
                 Variety::V3bar, Variety::Phi3}) {
    if (name == to_string(v)) return v;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown variety '" + name + "'");
}

namespace {

int rank_of(Variety v) { return static_cast<int>(v) - static_cast<int>(Variety::R0); }

bool is_r(Variety v) { return rank_of(v) >= 0 && rank_of(v) <= 3 && v != Variety::V3tilde; }

// For R̃_l: is coordinate pair i taken on its fiber side in this stratum?
bool fiber_side(int l, int stratum, int i) {
  unsigned bits = static_cast<unsigned>(stratum - 1);
  return i < l && ((bits >> (l - 1 - i)) & 1u);
}

void check_stratum(Variety v, int stratum) {
  if (stratum < 1 || stratum > stratum_count(v)) {
    throw Error(ErrorCode::ParamOutOfRange, std::string(to_string(v)) + " has no stratum " +
                                                std::to_string(stratum));
  }
}

}  // namespace

int stratum_count(Variety v) {
  switch (v) {
    case Variety::R0: return 1;
    case Variety::R1: return 2;
    case Variety::R2: return 4;
    case Variety::R3: return 8;
    case Variety::V3tilde: return 3;
    case Variety::V3bar: return 3;
    case Variety::Phi3: return 2;
  }
  return 0;
}

std::array<const char*, 3> param_names(Variety v, int stratum) {
  check_stratum(v, stratum);
  if (is_r(v)) {
    const int l = rank_of(v);
    static const char* fib[3] = {"p", "q", "r"};
    static const char* base[3] = {"u", "v", "w"};
    std::array<const char*, 3> out{};
    for (int i = 0; i < 3; ++i) out[i] = fiber_side(l, stratum, i) ? fib[i] : base[i];
    return out;
  }
  switch (v) {
    case Variety::V3tilde:
      if (stratum == 1) return {"tau", "u", "w"};
      if (stratum == 2) return {"tau", "u", "r"};
      return {"tau", "r", "q"};
    case Variety::V3bar:
      if (stratum == 1) return {"u", "v", "w"};
      if (stratum == 2) return {"tau", "u", "r"};
      return {"u", "q", "r"};
    default:
      if (stratum == 1) return {"tau", "lambda1", "lambda3"};
      return {"tau", "lambda1", "lambda2"};
  }
}

bool params_in_range(Variety v, int stratum, const Eigen::Vector3d& a, double tol) {
  if (stratum < 1 || stratum > stratum_count(v) || !a.allFinite()) return false;
  if (is_r(v)) {
    const int l = rank_of(v);
    for (int i = 0; i < l; ++i) {
      if (a[i] < -tol) return false;
    }
    return true;
  }
  if (v == Variety::V3tilde) {
    const double t = a[0], t2 = t * t;
    if (stratum == 1) return a[1] >= -2.0 * t2 - tol && a[2] >= 3.0 * t2 * t2 + a[1] * t2 - tol;
    if (stratum == 2) return a[1] >= -2.0 * t2 - tol && a[2] >= -tol;
    return a[1] >= -tol && std::abs(a[2]) <= a[1] * std::abs(t) + tol;
  }
  return true;
}

StratumPoint parametrize(Variety v, int stratum, const Eigen::Vector3d& params) {
  check_stratum(v, stratum);
  if (!params_in_range(v, stratum, params)) {
    throw Error(ErrorCode::ParamOutOfRange,
                std::string("parameters outside the range of ") + to_string(v) + " stratum " +
                    std::to_string(stratum));
  }
  StratumPoint out;
  out.variety = v;
  out.stratum_index = stratum;
  out.params = params;
  out.element = ContactElement(stratum_coordinates<double>(v, stratum, params));
  return out;
}

Eigen::Vector3d sample_params(Variety v, int stratum, Rng& rng) {
  check_stratum(v, stratum);
  if (is_r(v)) {
    const int l = rank_of(v);
    Eigen::Vector3d a;
    for (int i = 0; i < 3; ++i) a[i] = i < l ? rng.uniform(0.0, 2.0) : rng.uniform(-2.0, 2.0);
    return a;
  }
  if (v == Variety::V3bar && stratum != 2) {
    return {rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
  }
  if (v == Variety::Phi3) {
    return {rng.uniform(-1.5, 1.5), rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
  }
  const double t = rng.uniform(-1.5, 1.5);
  const double t2 = t * t;
  if (v == Variety::V3tilde && stratum == 3) {
    const double r = rng.uniform(0.0, 2.0);
    return {t, r, rng.uniform(-r * std::abs(t), r * std::abs(t))};
  }
  const double u = rng.uniform(-2.0 * t2, 2.0);
  if (v == Variety::V3tilde && stratum == 1) {
    const double w0 = 3.0 * t2 * t2 + u * t2;
    return {t, u, rng.uniform(w0, w0 + 2.0)};
  }
  return {t, u, rng.uniform(0.0, 2.0)};
}

namespace {

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

bool match_r(int l, int stratum, const ContactElement& e, double tol) {
  const Vector7d x = e.vec();
  if (!near(x[6], 0.0, tol)) return false;
  for (int i = 0; i < 3; ++i) {
    const double k = x[i], lam = x[3 + i];
    if (i >= l) {
      if (!near(k, 0.0, tol)) return false;
    } else if (fiber_side(l, stratum, i)) {
      if (!near(lam, 0.0, tol) || k < -tol) return false;
    } else {
      if (!near(k, 0.0, tol) || lam < -tol) return false;
    }
  }
  return true;
}

bool match_v3tilde(int stratum, const ContactElement& e, double tol) {
  if (!near(e.s, 0.0, tol)) return false;
  if (stratum == 1) {
    return near(e.p, 0.0, tol) && near(e.q, 0.0, tol) && near(e.r, 0.0, tol) &&
           quartic_nonneg(QuarticPoint(e.u, e.v, e.w), tol);
  }
  if (e.r < -tol) return false;
  if (stratum == 2) {
    if (e.r <= tol) return false;
    const double t = e.q / e.r, t2 = t * t;
    return near(e.p, e.r * t2, tol) && e.u >= -2.0 * t2 - tol &&
           near(e.v, -4.0 * t2 * t - 2.0 * e.u * t, tol) && near(e.w, 3.0 * t2 * t2 + e.u * t2, tol);
  }
  if (e.u > tol || !near(e.v, 0.0, tol)) return false;
  const double t = std::sqrt(std::max(0.0, -e.u / 2.0)), t2 = t * t;
  return near(e.w, t2 * t2, tol) && near(e.p, e.r * t2, tol) && std::abs(e.q) <= e.r * t + tol;
}

bool match_v3bar(int stratum, const ContactElement& e, double tol) {
  if (!near(e.s, 0.0, tol)) return false;
  if (stratum == 1) return near(e.p, 0.0, tol) && near(e.q, 0.0, tol) && near(e.r, 0.0, tol);
  if (stratum == 3) return near(e.p, 0.0, tol) && near(e.v, 0.0, tol) && near(e.w, 0.0, tol);
  if (std::abs(e.r) <= tol) {
    // r = 0 collapses the stratum onto κ = 0 with λ on the shifted discriminant
    return near(e.p, 0.0, tol) && near(e.q, 0.0, tol) &&
           std::abs(discriminant(e.u, e.v, e.w)) <= tol;
  }
  const double t = e.q / e.r, t2 = t * t;
  return near(e.p, e.r * t2 + e.r * e.u / 2.0, tol) &&
         near(e.v, -4.0 * t2 * t - 2.0 * e.u * t, tol) &&
         near(e.w, 3.0 * t2 * t2 + e.u * t2 - e.u * e.u / 4.0, tol);
}

bool match_phi3(int stratum, const ContactElement& e, double tol) {
  const QuarticPoint P(e.u, e.v, e.w);
  if (stratum == 2) {
    return e.kappa().cwiseAbs().maxCoeff() <= tol && near(e.s, 0.0, tol) &&
           quartic_min(P).value <= tol;
  }
  if (std::abs(e.r) <= tol) return false;
  const double t = e.q / e.r, t2 = t * t;
  const double Pv = P(t);
  const double dP = 4.0 * t2 * t + 2.0 * e.u * t + e.v;
  return near(e.p, -Pv * t2, tol) && near(e.r, -Pv, tol) && near(dP, 0.0, tol) &&
         near(e.s, 0.5 * Pv * Pv, tol);
}

}  // namespace

Membership membership(Variety v, const ContactElement& e, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "membership tolerance must be > 0");
  for (int k = 1; k <= stratum_count(v); ++k) {
    bool ok = false;
    if (is_r(v)) {
      ok = match_r(rank_of(v), k, e, tol);
    } else if (v == Variety::V3tilde) {
      ok = match_v3tilde(k, e, tol);
    } else if (v == Variety::V3bar) {
      ok = match_v3bar(k, e, tol);
    } else {
      ok = match_phi3(k, e, tol);
    }
    if (ok) return {true, k};
  }
  return {};
}

Eigen::Matrix<double, 7, 3> stratum_jacobian(Variety v, int stratum, const Eigen::Vector3d& params) {
  check_stratum(v, stratum);
  using AD = Eigen::AutoDiffScalar<Eigen::Vector3d>;
  Eigen::Matrix<AD, 3, 1> a;
  for (int i = 0; i < 3; ++i) a[i] = AD(params[i], 3, i);
  Eigen::Matrix<AD, 7, 1> x = stratum_coordinates<AD>(v, stratum, a);
  Eigen::Matrix<double, 7, 3> J;
  for (int i = 0; i < 7; ++i) {
    if (x[i].derivatives().size() == 0) {
      J.row(i).setZero();
    } else {
      J.row(i) = x[i].derivatives().transpose();
    }
  }
  return J;
}

double contact_tangency(Variety v, int stratum, const Eigen::Vector3d& params,
                        const Eigen::Vector3d& direction) {
  check_stratum(v, stratum);
  if (!params_in_range(v, stratum, params)) {
    throw Error(ErrorCode::ParamOutOfRange, "parameters outside the stratum");
  }
  const Vector7d x = stratum_coordinates<double>(v, stratum, params);
  const Vector7d dx = stratum_jacobian(v, stratum, params) * direction;
  return x[0] * dx[3] + x[1] * dx[4] + x[2] * dx[5] + dx[6];
}

const std::array<const char*, IdealV3::kCount>& IdealV3::printed() {
  static const std::array<const char*, kCount> gens = {
      "32 u^3 v^2 + 64 u^2 w^2 + 144 u v^2 w - 27 v^4 + 256 w^3",
      "2 p u + 3 q v + 4 r w",
      "3 p v + 4 q w - 2 r u v",
      "16 p w - 8 q u v - 8 r u w - 3 r v^2",
      "p^2 + q r v + r^2 w",
      "4 p q + r^2 v",
      "2 p r - 2 q^2 - r^2 u",
      "p r v - 4 q^2 v - 4 q r w",
      "p^2 r - 4 p q^2 + r^3 w",
      "s",
  };
  return gens;
}

IdealV3::IdealV3() {
  for (int i = 0; i < kCount; ++i) gens_[i] = Polynomial::parse(printed()[i], kContactVars);
}

IdealV3 IdealV3::tampered(int index, double delta) const {
  if (index < 1 || index > kCount) {
    throw Error(ErrorCode::InvalidArgument, "generator index must be 1..10");
  }
  IdealV3 out = *this;
  out.gens_[index - 1].add_term(Exponent{}, delta);
  return out;
}

std::array<double, IdealV3::kCount> IdealV3::evaluate(const ContactElement& e) const {
  return evaluate(Eigen::Matrix<long double, 7, 1>(e.vec().cast<long double>()));
}

std::array<double, IdealV3::kCount> IdealV3::evaluate(const Eigen::Matrix<long double, 7, 1>& x) const {
  std::array<double, kCount> out{};
  for (int i = 0; i < kCount; ++i) out[i] = static_cast<double>(gens_[i].evaluate<long double>(x));
  return out;
}

IdealReport verify_ideal(int sample_count, double tol, std::uint64_t seed, const IdealV3& ideal) {
  if (sample_count < 1 || !(tol > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "verify_ideal needs sample_count >= 1 and tol > 0");
  }
  IdealReport report;
  report.tol = tol;
  Rng rng(seed);
  for (Variety v : {Variety::V3tilde, Variety::V3bar}) {
    for (int k = 1; k <= 3; ++k) {
      IdealParamReport pr;
      pr.name = std::string(to_string(v)) + " stratum " + std::to_string(k);
      pr.variety = v;
      pr.stratum = k;
      pr.samples = sample_count;
      for (int i = 0; i < sample_count; ++i) {
        // chart coordinates in extended precision, so rounding them does not mask the residual
        const Eigen::Matrix<long double, 3, 1> a = sample_params(v, k, rng).cast<long double>();
        auto g = ideal.evaluate(stratum_coordinates<long double>(v, k, a));
        for (int j = 0; j < IdealV3::kCount; ++j) pr.max_abs[j] = std::max(pr.max_abs[j], std::abs(g[j]));
      }
      pr.annihilates = std::all_of(pr.max_abs.begin(), pr.max_abs.end(),
                                   [&](double m) { return m <= tol; });
      if (pr.annihilates) report.annihilating.push_back(pr.name);
      report.parametrizations.push_back(pr);
    }
  }

  report.off_variety_samples = sample_count;
  report.off_variety_min_of_max = std::numeric_limits<double>::infinity();
  for (int i = 0; i < sample_count; ++i) {
    Vector7d x;
    for (int j = 0; j < 7; ++j) x[j] = rng.uniform(-2.0, 2.0);
    auto g = ideal.evaluate(ContactElement(x));
    double m = 0.0;
    for (int j = 0; j < IdealV3::kCount; ++j) {
      report.off_variety_max_abs[j] = std::max(report.off_variety_max_abs[j], std::abs(g[j]));
      m = std::max(m, std::abs(g[j]));
    }
    report.off_variety_min_of_max = std::min(report.off_variety_min_of_max, m);
  }
  report.generic_nonvanishing = report.off_variety_min_of_max >= 1e-3;

  // The shift (p,w) ↦ (p + ru/2, w − u²/4) against the two second-stratum tables, and its
  // effect on the contact form along a random tangent vector.
  for (int i = 0; i < sample_count; ++i) {
    Eigen::Vector3d a = sample_params(Variety::V3tilde, 2, rng);
    Vector7d x = stratum_coordinates<double>(Variety::V3tilde, 2, a);
    Vector7d shifted = x;
    shifted[0] += x[2] * x[3] / 2.0;
    shifted[5] -= x[3] * x[3] / 4.0;
    Vector7d target = stratum_coordinates<double>(Variety::V3bar, 2, a);
    report.shift_residual = std::max(report.shift_residual, (shifted - target).cwiseAbs().maxCoeff());
    Vector7d d;
    for (int j = 0; j < 7; ++j) d[j] = rng.uniform(-1.0, 1.0);
    Vector7d ds = d;
    ds[0] += (d[2] * x[3] + x[2] * d[3]) / 2.0;
    ds[5] -= x[3] * d[3] / 2.0;
    auto form = [](const Vector7d& at, const Vector7d& dir) {
      return at[0] * dir[3] + at[1] * dir[4] + at[2] * dir[5] + dir[6];
    };
    report.shift_residual = std::max(report.shift_residual, std::abs(form(shifted, ds) - form(x, d)));
  }

  auto find = [&](const std::string& name) {
    return std::find(report.annihilating.begin(), report.annihilating.end(), name) !=
           report.annihilating.end();
  };
  const bool bar2 = find("V3bar stratum 2");
  const bool tilde2 = find("V3tilde stratum 2");
  std::string res;
  if (bar2 && !tilde2) {
    res = "The ten generators vanish on the V3bar second stratum (p = r tau^2 + r u/2, "
          "w = 3 tau^4 + u tau^2 - u^2/4) and not on the V3tilde second stratum "
          "(p = r tau^2, w = 3 tau^4 + u tau^2). ";
  } else if (tilde2 && !bar2) {
    res = "The ten generators vanish on the V3tilde second stratum and not on the V3bar one. ";
  } else if (bar2 && tilde2) {
    res = "The ten generators vanish on both second-stratum tables. ";
  } else {
    res = "No sampled stratum annihilates all ten generators. ";
  }
  if (report.shift_residual <= 1e-12) {
    res += "The contact map (p,q,r;u,v,w,s) -> (p + r u/2, q, r; u, v, w - u^2/4, s) carries the "
           "V3tilde second stratum onto the V3bar second stratum, so both tables describe the "
           "same Legendre variety up to this contactomorphism.";
  } else {
    res += "The shift between the two second-stratum tables does not match.";
  }
  report.resolution = res;
  report.passed = !report.annihilating.empty() && report.generic_nonvanishing;
  return report;
}

ContactElement phi3_reduce(const ContactElement& e) {
  return {e.p, e.q, e.r, e.u, e.v, e.w - e.r, e.s + e.r * e.r / 2.0};
}

ContactElement phi3_unreduce(const ContactElement& c) {
  return {c.p, c.q, c.r, c.u, c.v, c.w + c.r, c.s - c.r * c.r / 2.0};
}

double phi3(double tau, const Eigen::Vector3d& lambda) {
  const double P = QuarticPoint(lambda)(tau);
  return 0.5 * P * P;
}

double phi3_residual(const ContactElement& c) {
  const QuarticPoint P(c.u, c.v, c.w);
  const double kn = c.kappa().cwiseAbs().maxCoeff();
  if (kn == 0.0) {
    // κ = 0 forces P(τ) = 0 for a real τ and σ = 0
    return std::max(std::abs(c.s), std::max(0.0, quartic_min(P).value));
  }
  if (c.r == 0.0) return kn;
  const double t = c.q / c.r, t2 = t * t;
  const double Pv = P(t);
  const double dP = 4.0 * t2 * t + 2.0 * c.u * t + c.v;
  double res = (c.kappa() + Pv * Eigen::Vector3d(t2, t, 1.0)).cwiseAbs().maxCoeff();
  res = std::max(res, std::abs(Pv * dP));
  res = std::max(res, std::abs(c.s - 0.5 * Pv * Pv));
  return res;
}

ContactElement a1a3_substitute(const Vector7d& x) {
  const double pp = x[0], qp = x[1], rp = x[2], u = x[3], v = x[4], w = x[5], s = x[6];
  const double U = pp, W = qp, Q = rp, V = s;
  const double P = -u + 2.0 * U - 2.0 * W * W;
  const double R = -v - 4.0 * U * W;
  const double S = w - P * U - R * W + U * U - 4.0 * U * W * W;
  return {P, Q, R, U, V, W, S};
}

Vector7d a1a3_unsubstitute(const ContactElement& e) {
  const double P = e.p, Q = e.q, R = e.r, U = e.u, V = e.v, W = e.w, S = e.s;
  Vector7d x;
  x << U, W, Q, -P + 2.0 * U - 2.0 * W * W, -R - 4.0 * U * W,
      S + P * U + R * W - U * U + 4.0 * U * W * W, V;
  return x;
}

Vector7d m0star_point(int stratum, const Eigen::Vector3d& a) {
  if (stratum < 1 || stratum > 4) {
    throw Error(ErrorCode::ParamOutOfRange, "M0* has strata 1..4");
  }
  Vector7d x = Vector7d::Zero();
  auto fail = [] { throw Error(ErrorCode::ParamOutOfRange, "parameters outside the M0* stratum"); };
  if (!a.allFinite()) fail();
  if (stratum <= 2) {
    const double pp = a[0], qp = a[1];
    if (pp < 0.0 || a[2] < 0.0) fail();
    x[0] = pp;
    x[1] = qp;
    x[3] = 2.0 * pp - 2.0 * qp * qp;
    x[4] = -4.0 * pp * qp;
    x[5] = -pp * pp + 4.0 * pp * qp * qp;
    if (stratum == 1) {
      x[6] = a[2];
    } else {
      x[2] = a[2];
    }
  } else {
    const double qp = a[0], u = a[1];
    if (u > -2.0 * qp * qp || a[2] < 0.0) fail();
    x[1] = qp;
    x[3] = u;
    if (stratum == 3) {
      x[6] = a[2];
    } else {
      x[2] = a[2];
    }
  }
  return x;
}

std::vector<SupportElement> dual_support_elements(const PointCloudBody& body,
                                                  const std::vector<Eigen::VectorXd>& directions) {
  if (body.size() == 0) throw Error(ErrorCode::EmptyBody, "body has no points");
  std::vector<SupportElement> out;
  out.reserve(directions.size());
  for (const auto& d : directions) {
    if (d.size() != body.dim()) {
      throw Error(ErrorCode::DimensionMismatch, "direction and body dimensions differ");
    }
    Eigen::VectorXd h = body.points().transpose() * d;
    Eigen::Index idx;
    double val = h.maxCoeff(&idx);
    out.push_back({d, val, static_cast<int>(idx), body.point(static_cast<int>(idx))});
  }
  return out;
}

}  // namespace hullsing
