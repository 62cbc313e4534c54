#include "hullsing/genfam.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

namespace hullsing {

namespace {

Vector7d family_point(const Eigen::Vector3d& kappa, const Eigen::Vector3d& mu, double t) {
  Vector7d x;
  x << kappa, mu, t;
  return x;
}

}  // namespace

ContactElement fiber_map(const Polynomial& family, const Eigen::Vector3d& kappa,
                         const Eigen::Vector3d& mu, double t) {
  CompiledPolynomial F(family);
  const Vector7d x = family_point(kappa, mu, t);
  const Vector7d g = F.gradient(x);
  const Eigen::Vector3d lambda = g.head<3>();
  const double s = F.value(x) - kappa.dot(lambda);
  return {kappa[0], kappa[1], kappa[2], lambda[0], lambda[1], lambda[2], s};
}

namespace {

Vector7d field(const CompiledPolynomial& K, const Vector7d& x) {
  const double k = K.value(x);
  const Vector7d g = K.gradient(x);
  const Eigen::Vector3d kappa = x.head<3>();
  const Eigen::Vector3d K_kappa = g.head<3>();
  const Eigen::Vector3d K_lambda = g.segment<3>(3);
  const double K_s = g[6];
  Vector7d out;
  out.head<3>() = kappa * K_s - K_lambda;
  out.segment<3>(3) = K_kappa;
  out[6] = k - kappa.dot(K_kappa);
  return out;
}

Vector7d rk4(const CompiledPolynomial& K, Vector7d x, double horizon, double step) {
  if (horizon == 0.0) return x;
  const int n = std::max(1, static_cast<int>(std::ceil(std::abs(horizon) / step - 1e-9)));
  const double h = horizon / n;
  for (int i = 0; i < n; ++i) {
    Vector7d k1 = field(K, x);
    Vector7d k2 = field(K, x + 0.5 * h * k1);
    Vector7d k3 = field(K, x + 0.5 * h * k2);
    Vector7d k4 = field(K, x + h * k3);
    x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return x;
}

}  // namespace

Vector7d contact_field(const GeneratingFunction& K, const ContactElement& e) {
  return field(CompiledPolynomial(K), e.vec());
}

ContactElement contact_flow(const GeneratingFunction& K, const ContactElement& e, double horizon,
                            double step) {
  if (!(step > 0.0)) throw Error(ErrorCode::InvalidArgument, "flow step must be > 0");
  return ContactElement(rk4(CompiledPolynomial(K), e.vec(), horizon, step));
}

Polynomial lemma2_action(const GeneratingFunction& K, const Polynomial& F) {
  std::array<Polynomial, kNumVars> inner;
  Polynomial s = F;
  for (int i = 0; i < 3; ++i) {
    inner[i] = Polynomial::variable(i);
    inner[3 + i] = F.derivative(i);
    s -= Polynomial::variable(i) * inner[3 + i];
  }
  inner[6] = s;
  return -compose(K, inner);
}

double transported_family(const GeneratingFunction& K, const Polynomial& family,
                          const Eigen::Vector3d& kappa, const Eigen::Vector3d& mu, double t,
                          double eps) {
  CompiledPolynomial Kc(K);
  CompiledPolynomial F(family);
  auto image = [&](const Eigen::Vector3d& k0) {
    const Vector7d x = family_point(k0, mu, t);
    const Vector7d g = F.gradient(x);
    Vector7d e;
    e.head<3>() = k0;
    e.segment<3>(3) = g.head<3>();
    e[6] = F.value(x) - k0.dot(g.head<3>());
    return rk4(Kc, e, -eps, 1e-3);
  };
  // κ₀ with image κ-component equal to κ; the flow is O(ε)-close to the identity
  Eigen::Vector3d k0 = kappa;
  Vector7d img = image(k0);
  for (int it = 0; it < 100; ++it) {
    Eigen::Vector3d r = kappa - img.head<3>();
    if (r.cwiseAbs().maxCoeff() <= 1e-16 * (1.0 + kappa.norm())) break;
    k0 += r;
    img = image(k0);
  }
  return img[6] + kappa.dot(img.segment<3>(3));
}

double lemma2_finite_difference(const GeneratingFunction& K, const Polynomial& family,
                                const Eigen::Vector3d& kappa, const Eigen::Vector3d& mu, double t,
                                double h) {
  return (transported_family(K, family, kappa, mu, t, h) -
          transported_family(K, family, kappa, mu, t, -h)) /
         (2.0 * h);
}

GeneratingFunction bracket(const GeneratingFunction& K, const GeneratingFunction& L) {
  const Polynomial Ks = K.derivative(6), Ls = L.derivative(6);
  Polynomial out = K * Ls - Ks * L;
  for (int i = 0; i < 3; ++i) {
    const Polynomial kap = Polynomial::variable(i);
    const Polynomial Ki = K.derivative(i), Li = L.derivative(i);
    out += kap * Ks * Li;
    out -= K.derivative(3 + i) * Li;
    out += Ki * L.derivative(3 + i);
    out -= kap * Ki * Ls;
  }
  return out;
}

double bracket_finite_difference(const GeneratingFunction& K, const GeneratingFunction& L,
                                 const ContactElement& e, double h) {
  CompiledPolynomial Kc(K), Lc(L);
  const Vector7d x = e.vec();
  auto jacobian = [&](const CompiledPolynomial& P) {
    Eigen::Matrix<double, 7, 7> J;
    for (int j = 0; j < 7; ++j) {
      Vector7d d = Vector7d::Zero();
      d[j] = h;
      J.col(j) = (field(P, x + d) - field(P, x - d)) / (2.0 * h);
    }
    return J;
  };
  const Vector7d X = field(Kc, x), Y = field(Lc, x);
  const Vector7d br = jacobian(Lc) * X - jacobian(Kc) * Y;
  return x[0] * br[3] + x[1] * br[4] + x[2] * br[5] + br[6];
}

Eigen::Matrix<double, 8, 4> omega_matrix(double x, double y, double z, double t) {
  const double w = 2.0 * t - x * x - y * y - z * z;
  Eigen::Matrix<double, 8, 4> O;
  // clang-format off
  O << 0, 0, z, y,
       0, z, 0, x,
       0, y, x, 0,
       x, w + x * x, 0, 0,
       y, 0, w + y * y, 0,
       z, 0, 0, w + z * z,
       w, 0, 0, 0,
       0, 3 * x, 2 * y, z;
  // clang-format on
  return O;
}

int omega_rank(double x, double y, double z, double t) {
  const auto O = omega_matrix(x, y, z, t);
  const double norm = O.norm();
  if (norm == 0.0) return 0;
  Eigen::JacobiSVD<Eigen::Matrix<double, 8, 4>> svd(O);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv[i] > 1e-10 * norm) ++rank;
  }
  return rank;
}

Eigen::Vector3d Grid3::node(int i, int j, int k) const {
  Eigen::Vector3d out;
  const int idx[3] = {i, j, k};
  for (int a = 0; a < 3; ++a) {
    out[a] = n[a] == 1 ? lo[a] : lo[a] + (hi[a] - lo[a]) * idx[a] / (n[a] - 1);
  }
  return out;
}

Eigen::Vector3d Grid3::node(int flat) const {
  const int k = flat % n[2];
  const int j = (flat / n[2]) % n[1];
  const int i = flat / (n[1] * n[2]);
  return node(i, j, k);
}

FamilyEnvelope::FamilyEnvelope(const GeneratingFamily& F, Variety v, const FrontOptions& options)
    : options_(options) {
  options_.orthant.validate_with_grid = false;
  switch (v) {
    case Variety::R0:
    case Variety::R1:
    case Variety::R2:
    case Variety::R3:
      kind_ = Kind::orthant;
      dim_ = static_cast<int>(v) - static_cast<int>(Variety::R0);
      quadratic_ = F.quadratic_in_fiber();
      compiled_ = CompiledPolynomial(F.poly());
      return;
    case Variety::V3tilde:
      if (F.poly() == GeneratingFamily::swallowtail().poly()) {
        kind_ = Kind::v3;
        return;
      }
      if (F.poly() == GeneratingFamily::swallowtail_reduced().poly()) {
        kind_ = Kind::v3_slice;
        return;
      }
      throw Error(ErrorCode::InvalidArgument,
                  "fronts over V3tilde are available for the swallowtail families only");
    default:
      break;
  }
  throw Error(ErrorCode::InvalidArgument, std::string("no front for variety ") + to_string(v));
}

double FamilyEnvelope::operator()(double x, double y, double z, double t) const {
  switch (kind_) {
    case Kind::v3: return envelope_v3(x, y, z, t, options_.projection);
    case Kind::v3_slice: return envelope_v3_slice(x, y, z, t, options_.projection);
    case Kind::orthant: break;
  }
  try {
    return minimize_over_orthant(compiled_, quadratic_, dim_, Eigen::Vector4d(x, y, z, t),
                                 options_.orthant)
        .value;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NotPositiveDefinite) {
      throw Error(ErrorCode::GridOutOfDomain,
                  "fiber Hessian not positive definite at (" + std::to_string(x) + ", " +
                      std::to_string(y) + ", " + std::to_string(z) + ")");
    }
    throw;
  }
}

double FamilyEnvelope::front_height(double x, double y, double z) const {
  auto env = [&](double t) { return (*this)(x, y, z, t); };
  // slope in t is 1 for the normal families, so −env(0) is the root up to the higher terms
  const double guess = -env(0.0);
  double width = options_.tol;
  double lo = guess - width, hi = guess + width;
  double flo = env(lo), fhi = env(hi);
  for (int it = 0; it < 200 && !(flo <= 0.0 && fhi >= 0.0); ++it) {
    width *= 2.0;
    if (flo > 0.0) {
      hi = lo;
      fhi = flo;
      lo = guess - width;
      flo = env(lo);
    } else {
      lo = hi;
      flo = fhi;
      hi = guess + width;
      fhi = env(hi);
    }
  }
  if (!(flo <= 0.0 && fhi >= 0.0)) {
    throw Error(ErrorCode::NonConvergence, "could not bracket the front height");
  }
  while (hi - lo > options_.tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (env(mid) <= 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double family_envelope(const GeneratingFamily& F, Variety v, double x, double y, double z,
                       double t, const FrontOptions& options) {
  return FamilyEnvelope(F, v, options)(x, y, z, t);
}

double front_height(const GeneratingFamily& F, Variety v, double x, double y, double z,
                    const FrontOptions& options) {
  return FamilyEnvelope(F, v, options).front_height(x, y, z);
}

FrontSample front(const GeneratingFamily& F, Variety v, const Grid3& grid,
                  const FrontOptions& options) {
  for (int a = 0; a < 3; ++a) {
    if (grid.n[a] < 1) throw Error(ErrorCode::InvalidArgument, "grid must be non-empty");
  }
  FrontSample out;
  out.grid = grid;
  out.variety = v;
  out.t.resize(static_cast<std::size_t>(grid.size()));
  FamilyEnvelope env(F, v, options);
  for (int i = 0; i < grid.size(); ++i) {
    const Eigen::Vector3d m = grid.node(i);
    out.t[i] = env.front_height(m[0], m[1], m[2]);
  }
  return out;
}

}  // namespace hullsing
