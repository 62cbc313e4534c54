#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>

#include "commands.hpp"
#include "hullsing/genfam.hpp"
#include "hullsing/legendre.hpp"
#include "hullsing/rng.hpp"

namespace hullsing::cli {

namespace {

const std::vector<std::string> kSuites = {"ideal", "contact", "lemma2", "bracket",
                                          "omega", "phi3",    "a1a3"};

void exponents(int degree, int var, Exponent& e, std::vector<Exponent>& out) {
  if (var == kNumVars) {
    out.push_back(e);
    return;
  }
  for (int k = 0; k <= degree; ++k) {
    e[var] = static_cast<std::uint8_t>(k);
    exponents(degree - k, var + 1, e, out);
  }
  e[var] = 0;
}

/// Dense polynomial of total degree ≤ degree, coefficients uniform in [−scale, scale].
Polynomial random_polynomial(Rng& rng, int degree, double scale) {
  std::vector<Exponent> es;
  Exponent e{};
  exponents(degree, 0, e, es);
  Polynomial out;
  for (const auto& x : es) out.add_term(x, rng.uniform(-scale, scale));
  return out;
}

Eigen::Vector3d random_vec3(Rng& rng, double lo, double hi) {
  return {rng.uniform(lo, hi), rng.uniform(lo, hi), rng.uniform(lo, hi)};
}

/// Distance of e from stratum k of R̃_l: coordinates outside the stratum chart plus negative parts
/// of the sign-constrained ones.
double r_stratum_residual(int l, int k, const ContactElement& e) {
  const Vector7d x = e.vec();
  Eigen::Vector3d a;
  const unsigned bits = static_cast<unsigned>(k - 1);
  double neg = 0.0;
  for (int i = 0; i < 3; ++i) {
    const bool fiber = i < l && (bits >> (l - 1 - i)) & 1u;
    a[i] = fiber ? x[i] : x[3 + i];
    if (i < l) neg = std::max(neg, -a[i]);
  }
  const Variety v = static_cast<Variety>(static_cast<int>(Variety::R0) + l);
  return std::max(neg, (x - stratum_coordinates<double>(v, k, a)).cwiseAbs().maxCoeff());
}

struct Suite {
  json report;
  bool passed = true;
};

int samples_or(int configured, int fallback) { return configured > 0 ? configured : fallback; }

Suite run_ideal(const json& c, int samples, std::uint64_t seed) {
  Suite s;
  IdealV3 ideal;
  const std::string tamper = get_string(c, "tamper");
  json tampered = nullptr;
  if (!tamper.empty()) {
    const std::string prefix = "ideal:";
    if (tamper.rfind(prefix, 0) != 0) throw UsageError("'tamper' must look like ideal:N");
    int index = 0;
    try {
      std::size_t used = 0;
      index = std::stoi(tamper.substr(prefix.size()), &used);
      if (used != tamper.size() - prefix.size()) throw std::invalid_argument(tamper);
    } catch (const std::exception&) {
      throw UsageError("'tamper' must look like ideal:N");
    }
    if (index < 1 || index > IdealV3::kCount) throw UsageError("tamper index must be 1..10");
    ideal = ideal.tampered(index, get_number(c, "tamper_delta"));
    tampered = index;
  }
  const IdealReport r = verify_ideal(samples_or(samples, 1000), positive(c, "tol"), seed, ideal);
  json params = json::array();
  for (const auto& p : r.parametrizations) {
    params.push_back({{"name", p.name},
                      {"samples", p.samples},
                      {"max_abs", p.max_abs},
                      {"annihilates", p.annihilates}});
  }
  // worst generator on the annihilating parametrization, or on V3bar stratum 2 if none annihilates
  json worst = nullptr;
  for (const auto& p : r.parametrizations) {
    if (p.name != "V3bar stratum 2") continue;
    const auto it = std::max_element(p.max_abs.begin(), p.max_abs.end());
    worst = {{"parametrization", p.name},
             {"generator", 1 + (it - p.max_abs.begin())},
             {"max_abs", *it}};
  }
  std::vector<std::string> printed(IdealV3::printed().begin(), IdealV3::printed().end());
  s.report = {{"generators", printed},
              {"tol", r.tol},
              {"tampered_generator", tampered},
              {"parametrizations", params},
              {"annihilating", r.annihilating},
              {"off_variety_samples", r.off_variety_samples},
              {"off_variety_min_of_max", r.off_variety_min_of_max},
              {"off_variety_max_abs", r.off_variety_max_abs},
              {"generic_nonvanishing", r.generic_nonvanishing},
              {"shift_residual", r.shift_residual},
              {"resolution", r.resolution},
              {"worst", worst}};
  s.passed = r.passed;
  return s;
}

Suite run_contact(const json& c, int samples, std::uint64_t seed) {
  Suite s;
  const double tol = positive(c, "contact_tol");
  Rng rng(seed);
  json rows = json::array();
  double worst = 0.0;
  json worst_at = nullptr;
  for (Variety v : {Variety::R0, Variety::R1, Variety::R2, Variety::R3, Variety::V3tilde,
                    Variety::V3bar}) {
    for (int k = 1; k <= stratum_count(v); ++k) {
      double m = 0.0;
      const int n = samples_or(samples, 100);
      for (int i = 0; i < n; ++i) {
        const Eigen::Vector3d a = sample_params(v, k, rng);
        for (int d = 0; d < 3; ++d) {
          const double r = std::abs(contact_tangency(v, k, a, Eigen::Vector3d::Unit(d)));
          m = std::max(m, r);
          if (r > worst) {
            worst = r;
            worst_at = {{"variety", to_string(v)}, {"stratum", k}, {"params", {a[0], a[1], a[2]}},
                        {"direction", d}};
          }
        }
      }
      rows.push_back({{"variety", to_string(v)}, {"stratum", k}, {"samples", n}, {"max_abs", m}});
    }
  }
  s.passed = worst <= tol;
  s.report = {{"tol", tol}, {"strata", rows}, {"max_abs", worst}, {"worst", worst_at}};
  return s;
}

Suite run_lemma2(const json& c, int samples, std::uint64_t seed) {
  Suite s;
  const double tol = positive(c, "lemma2_tol"), h = positive(c, "lemma2_step");
  Rng rng(seed);
  const int n = samples_or(samples, 100);
  double worst = 0.0;
  json worst_at = nullptr;
  for (int i = 0; i < n; ++i) {
    const Polynomial K = random_polynomial(rng, 2, 1.0);
    Polynomial F = GeneratingFamily::swallowtail().poly() + random_polynomial(rng, 3, 0.3);
    const Eigen::Vector3d kappa = random_vec3(rng, -0.5, 0.5), mu = random_vec3(rng, -0.5, 0.5);
    const double t = rng.uniform(-0.5, 0.5);
    Vector7d x;
    x << kappa, mu, t;
    const double analytic = lemma2_action(K, F)(x);
    const double fd = lemma2_finite_difference(K, F, kappa, mu, t, h);
    const double r = std::abs(fd - analytic);
    if (r > worst || worst_at.is_null()) {
      worst = std::max(worst, r);
      worst_at = {{"sample", i}, {"analytic", analytic}, {"finite_difference", fd}};
    }
  }
  s.passed = worst <= tol;
  s.report = {{"tol", tol}, {"step", h}, {"samples", n}, {"max_abs", worst}, {"worst", worst_at}};
  return s;
}

Suite run_bracket(const json& c, int samples, std::uint64_t seed) {
  Suite s;
  const double tol = positive(c, "bracket_tol");
  Rng rng(seed);
  const int n = samples_or(samples, 100);
  double worst = 0.0;
  json worst_at = nullptr;
  for (int i = 0; i < n; ++i) {
    const Polynomial K = random_polynomial(rng, 3, 1.0), L = random_polynomial(rng, 3, 1.0);
    Vector7d x;
    for (int j = 0; j < 7; ++j) x[j] = rng.uniform(-1.0, 1.0);
    const ContactElement e(x);
    const double analytic = bracket(K, L)(x);
    const double fd = bracket_finite_difference(K, L, e);
    const double r = std::abs(fd - analytic) / (1.0 + std::abs(analytic));
    if (r > worst || worst_at.is_null()) {
      worst = std::max(worst, r);
      worst_at = {{"sample", i}, {"analytic", analytic}, {"finite_difference", fd}};
    }
  }
  s.passed = worst <= tol;
  s.report = {{"tol", tol}, {"samples", n}, {"max_rel", worst}, {"worst", worst_at}};
  return s;
}

Suite run_omega(int samples, std::uint64_t seed) {
  Suite s;
  Rng rng(seed);
  const int n = samples_or(samples, 1000);
  const int origin = omega_rank(0, 0, 0, 0);
  int full = 0;
  json first_miss = nullptr;
  for (int i = 0; i < n; ++i) {
    Eigen::Vector4d p;
    for (int j = 0; j < 4; ++j) p[j] = rng.normal();
    const int rank = omega_rank(p[0], p[1], p[2], p[3]);
    if (rank == 4) {
      ++full;
    } else if (first_miss.is_null()) {
      first_miss = {{"point", {p[0], p[1], p[2], p[3]}}, {"rank", rank}};
    }
  }
  s.passed = origin < 4 && full == n;
  s.report = {{"rank_at_origin", origin},
              {"samples", n},
              {"rank4_count", full},
              {"first_deficient", first_miss}};
  return s;
}

Suite run_phi3(const json& c, int samples, std::uint64_t seed) {
  Suite s;
  const double tol = positive(c, "phi3_tol");
  Rng rng(seed);
  const int n = samples_or(samples, 100);
  json strata = json::array();
  for (int k = 1; k <= 2; ++k) {
    double worst = 0.0;
    int on = 0;
    for (int i = 0; i < n; ++i) {
      const Eigen::Vector3d a = sample_params(Variety::V3tilde, k, rng);
      const ContactElement e(stratum_coordinates<double>(Variety::V3tilde, k, a));
      const double r = phi3_residual(phi3_reduce(e));
      worst = std::max(worst, r);
      on += r <= tol;
    }
    const bool checked = k == 2;
    if (checked) s.passed = worst <= tol;
    strata.push_back({{"stratum", k},
                      {"samples", n},
                      {"on_phi3", on},
                      {"max_residual", worst},
                      {"checked", checked}});
  }
  s.report = {{"tol", tol},
              {"strata", strata},
              {"note",
               "stratum 1 points (kappa = 0, w free above the double-root sheet) reach Phi3 only "
               "where the quartic has a real root; its counts are informational"}};
  return s;
}

Suite run_a1a3(const json& c, int samples, std::uint64_t seed) {
  Suite s;
  const double tol = positive(c, "a1a3_tol");
  Rng rng(seed);
  const int n = samples_or(samples, 100);
  json rows = json::array();
  std::vector<int> targets;
  for (int k = 1; k <= 4; ++k) {
    std::array<double, 4> worst{};
    for (int i = 0; i < n; ++i) {
      Eigen::Vector3d a;
      if (k <= 2) {
        a = {rng.uniform(0.0, 2.0), rng.uniform(-2.0, 2.0), rng.uniform(0.0, 2.0)};
      } else {
        const double q = rng.uniform(-1.5, 1.5);
        a = {q, -2.0 * q * q - rng.uniform(0.0, 2.0), rng.uniform(0.0, 2.0)};
      }
      const ContactElement e = a1a3_substitute(m0star_point(k, a));
      for (int j = 1; j <= 4; ++j) {
        worst[j - 1] = std::max(worst[j - 1], r_stratum_residual(2, j, e));
      }
    }
    const int target = 1 + static_cast<int>(std::min_element(worst.begin(), worst.end()) - worst.begin());
    const double residual = worst[target - 1];
    if (residual > tol) s.passed = false;
    targets.push_back(target);
    rows.push_back({{"m0star_stratum", k}, {"r2_stratum", target}, {"samples", n},
                    {"max_residual", residual}});
  }
  std::vector<int> sorted = targets;
  std::sort(sorted.begin(), sorted.end());
  const bool onto = sorted == std::vector<int>{1, 2, 3, 4};
  s.passed = s.passed && onto;
  s.report = {{"tol", tol}, {"strata", rows}, {"onto", onto}};
  return s;
}

}  // namespace

int cmd_verify(const json& c, const Stamp& stamp, const std::string& out) {
  const std::string suite = get_string(c, "suite");
  std::vector<std::string> chosen;
  if (suite == "all") {
    chosen = kSuites;
  } else if (std::find(kSuites.begin(), kSuites.end(), suite) != kSuites.end()) {
    chosen = {suite};
  } else {
    throw UsageError("'suite' must be all, ideal, contact, lemma2, bracket, omega, phi3 or a1a3");
  }
  const int samples = get_int(c, "samples");
  if (samples < 0) throw UsageError("'samples' must be >= 0 (0 = suite default)");
  if (!get_string(c, "tamper").empty() &&
      std::find(chosen.begin(), chosen.end(), "ideal") == chosen.end()) {
    throw UsageError("'tamper' needs the ideal suite");
  }
  const std::uint64_t seed = stamp.seed;
  json suites = json::object();
  std::vector<std::string> failures;
  for (const auto& name : chosen) {
    // each suite draws from its own stream so that selecting one suite reproduces its part of all
    const std::uint64_t s = seed * 1000003ull +
                            static_cast<std::uint64_t>(std::find(kSuites.begin(), kSuites.end(), name) -
                                                       kSuites.begin());
    Suite r;
    if (name == "ideal") r = run_ideal(c, samples, s);
    if (name == "contact") r = run_contact(c, samples, s);
    if (name == "lemma2") r = run_lemma2(c, samples, s);
    if (name == "bracket") r = run_bracket(c, samples, s);
    if (name == "omega") r = run_omega(samples, s);
    if (name == "phi3") r = run_phi3(c, samples, s);
    if (name == "a1a3") r = run_a1a3(c, samples, s);
    r.report["passed"] = r.passed;
    suites[name] = r.report;
    if (!r.passed) failures.push_back(name);
  }
  write_json((std::filesystem::path(out) / "verify.json").string(), stamp,
             {{"suite", suite}, {"suites", suites}, {"failures", failures},
              {"passed", failures.empty()}});
  return failures.empty() ? 0 : 1;
}

}  // namespace hullsing::cli
