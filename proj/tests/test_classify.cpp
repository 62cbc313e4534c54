#include "doctest.h"

#include <cmath>
#include <functional>

#include "hullsing/body.hpp"
#include "hullsing/classify.hpp"

using namespace hullsing;

namespace {

bool code_is(ErrorCode code, const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code() == code;
  }
  return false;
}

/// Epigraph side of x₃ = g(ξ) over [−1,1]², closed off at height 3.
PointCloudBody graph_body(const std::function<double(double, double)>& g, double step) {
  std::vector<Eigen::Vector3d> pts;
  const int n = static_cast<int>(std::lround(2.0 / step));
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      const double a = -1 + i * step, b = -1 + j * step;
      pts.emplace_back(a, b, g(a, b));
      pts.emplace_back(a, b, 3.0);
    }
  }
  Eigen::MatrixXd m(3, static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = pts[i];
  return PointCloudBody(m);
}

SupportRecord scan_one(const PointCloudBody& body, const Eigen::VectorXd& d) {
  return support_scan(body, {d}).front();
}

}  // namespace

TEST_CASE("cube-sphere grid") {
  for (int k : {2, 4, 8}) {
    const DirectionGrid g3 = cube_sphere_grid(3, k);
    CHECK(g3.directions.size() == static_cast<std::size_t>(6 * k * k + 2));
    CHECK(g3.spacing == doctest::Approx(M_PI / (2 * k)));
    const DirectionGrid g4 = cube_sphere_grid(4, k);
    CHECK(g4.directions.size() ==
          static_cast<std::size_t>(std::pow(k + 1, 4) - std::pow(k - 1, 4)));
    for (const auto& d : g4.directions) CHECK(d.norm() == doctest::Approx(1.0));
    bool axis = false;
    for (const auto& d : g4.directions) axis |= (d - Eigen::Vector4d(0, 0, 0, -1)).norm() < 1e-12;
    CHECK(axis);
  }
  CHECK(code_is(ErrorCode::InvalidArgument, [] { cube_sphere_grid(2, 4); }));
}

TEST_CASE("ellipsoid directions touch one cluster") {
  const PointCloudBody body = make_ellipsoid();
  const DirectionGrid g = cube_sphere_grid(3, 4);
  for (const auto& r : support_scan(body, g.directions)) {
    CHECK(r.clusters.size() == 1);
    CHECK_FALSE(r.singular_candidate());
  }
}

TEST_CASE("peanut waist direction touches two clusters") {
  const PointCloudBody body = make_peanut();
  const SupportRecord r = scan_one(body, Eigen::Vector3d(0, 0, 1));
  REQUIRE(r.clusters.size() == 2);
  CHECK(r.clusters[0].centroid[0] * r.clusters[1].centroid[0] < 0);
  CHECK(catalogue_label(3, 2, {}) == "2A1");
}

TEST_CASE("caltrop symmetric direction touches four clusters") {
  const PointCloudBody body = make_caltrop();
  const SupportRecord r = scan_one(body, caltrop_symmetric_direction());
  REQUIRE(r.clusters.size() == 4);
  for (const auto& c : r.clusters) {
    double best = 1e9;
    for (int i = 0; i < 4; ++i) best = std::min(best, (c.centroid - caltrop_vertex(i)).norm());
    CHECK(best < 0.1);
  }
}

TEST_CASE("sphere contact is A1") {
  const PointCloudBody body = make_ellipsoid(1.0, {1, 1, 1});
  const SupportRecord r = scan_one(body, Eigen::Vector3d(0.3, -0.5, 0.8).normalized());
  const TangencyFit fit = tangency_fit(body, r, 0);
  CHECK(fit.label == Tangency::A1);
  // unit sphere: height ≈ |ξ|²/2
  CHECK(fit.hessian_eigenvalues[0] == doctest::Approx(1.0).epsilon(0.1));
  CHECK(fit.hessian_eigenvalues[1] == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("quartic contact is A3") {
  const PointCloudBody body = graph_body([](double a, double b) { return a * a * a * a + b * b; }, 0.02);
  const SupportRecord r = scan_one(body, Eigen::Vector3d(0, 0, -1));
  REQUIRE(r.clusters.size() == 1);
  const TangencyFit fit = tangency_fit(body, r, 0);
  CHECK(fit.label == Tangency::A3);
  CHECK(tangency_order(body, r, 0) == Tangency::A3);
  CHECK(fit.kernel_quartic == doctest::Approx(1.0).epsilon(0.2));
}

TEST_CASE("flat contact is refused") {
  const PointCloudBody body = graph_body([](double, double) { return 0.0; }, 0.02);
  const SupportRecord r = scan_one(body, Eigen::Vector3d(0, 0, -1));
  REQUIRE(r.clusters.size() == 1);
  const TangencyFit fit = tangency_fit(body, r, 0);
  CHECK(fit.label == Tangency::unknown);
  CHECK(fit.hessian_eigenvalues.cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("catalogue labels") {
  using T = Tangency;
  CHECK(catalogue_label(3, 1, {T::A1}) == "A1");
  CHECK(catalogue_label(3, 3, {T::A1, T::A1, T::A1}) == "3A1");
  CHECK(catalogue_label(3, 4, {}) == "unresolved");
  CHECK(catalogue_label(4, 4, {}) == "4A1");
  CHECK(catalogue_label(4, 2, {T::A1, T::A3}) == "A1A3");
  CHECK(catalogue_label(4, 1, {T::A3}) == "A3");
  CHECK(catalogue_label(4, 2, {T::A1, T::unknown}) == "unresolved");
  CHECK(catalogue_label(3, 0, {}) == "unresolved");
}

TEST_CASE("catalogue summary groups neighbouring directions") {
  std::vector<SupportRecord> recs(5);
  const double h = 0.05;
  for (int i = 0; i < 5; ++i) {
    recs[i].direction = Eigen::Vector3d(std::cos(i * h), std::sin(i * h), 0);
    recs[i].catalogue_label = "2A1";
  }
  recs[4].direction = Eigen::Vector3d(0, 0, 1);
  const CatalogueSummary s = catalogue_assign(recs, h);
  CHECK(s.label_counts.at("2A1") == 5);
  CHECK(s.family_counts.at("2A1") == 2);
  CHECK(s.predicted_strata.at("2A1") == 3);
  CHECK(s.predicted_strata.at("4A1") == 15);
  CHECK(s.predicted_strata.at("A1A3") == 5);
}

TEST_CASE("classification of the built-in bodies") {
  const auto ell = classify(make_ellipsoid(), cube_sphere_grid(3, 8));
  CHECK(ell.summary.families.empty());
  CHECK(ell.summary.label_counts.at("A1") == ell.summary.directions);

  const auto p8 = classify(make_peanut(), cube_sphere_grid(3, 8));
  const auto p16 = classify(make_peanut(), cube_sphere_grid(3, 16));
  CHECK(p8.summary.family_counts.at("2A1") == 1);
  CHECK(p16.summary.family_counts.at("2A1") == 1);
  const double ratio = double(p16.summary.label_counts.at("2A1")) / p8.summary.label_counts.at("2A1");
  CHECK(ratio == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("invalid inputs") {
  const PointCloudBody body = make_ellipsoid();
  ClassifyOptions bad;
  bad.cluster_tol = 0.0;
  CHECK(code_is(ErrorCode::InvalidArgument,
                [&] { support_scan(body, {Eigen::Vector3d(1, 0, 0)}, bad); }));
  CHECK(code_is(ErrorCode::DimensionMismatch,
                [&] { support_scan(body, {Eigen::Vector4d(1, 0, 0, 0)}); }));
  CHECK(code_is(ErrorCode::EmptyBody, [] { PointCloudBody(Eigen::MatrixXd::Zero(3, 3)); }));
  CHECK(code_is(ErrorCode::InvalidArgument, [] { PointCloudBody(Eigen::MatrixXd::Zero(2, 5)); }));
  CHECK(code_is(ErrorCode::InvalidArgument, [] { make_builtin_body("cube"); }));
  ClassifyOptions one;
  one.threads = 1;
  CHECK(scan_threads(one) == 1);
}
