#include "hullsing/classify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <numeric>
#include <set>
#include <thread>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

namespace hullsing {

const char* to_string(Tangency t) {
  switch (t) {
    case Tangency::A1: return "A1";
    case Tangency::A3: return "A3";
    case Tangency::unknown: return "unknown";
  }
  return "unknown";
}

int scan_threads(const ClassifyOptions& options) {
  if (options.threads > 0) return options.threads;
  if (const char* env = std::getenv("THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return static_cast<int>(std::min(n, 256L));
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

// Runs body(i) for i in [0, n) on contiguous chunks; each index is written by one worker only.
void parallel_for(int n, int threads, const std::function<void(int)>& body) {
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (int w = 0; w < threads; ++w) {
    const int lo = static_cast<int>(static_cast<long long>(n) * w / threads);
    const int hi = static_cast<int>(static_cast<long long>(n) * (w + 1) / threads);
    pool.emplace_back([&, lo, hi, w] {
      try {
        for (int i = lo; i < hi; ++i) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

// Monomials of total degree ≤ 4 in m variables, graded.
std::vector<std::vector<int>> monomials(int m) {
  std::vector<std::vector<int>> out;
  std::vector<int> e(m, 0);
  for (int deg = 0; deg <= 4; ++deg) {
    std::function<void(int, int)> rec = [&](int var, int left) {
      if (var == m - 1) {
        e[var] = left;
        out.push_back(e);
        return;
      }
      for (int k = left; k >= 0; --k) {
        e[var] = k;
        rec(var + 1, left - k);
      }
    };
    rec(0, deg);
  }
  return out;
}

double monomial_value(const std::vector<int>& e, const Eigen::VectorXd& x) {
  double v = 1.0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    for (int k = 0; k < e[i]; ++k) v *= x[static_cast<Eigen::Index>(i)];
  }
  return v;
}

int degree(const std::vector<int>& e) { return std::accumulate(e.begin(), e.end(), 0); }

}  // namespace

DirectionGrid cube_sphere_grid(int dim, int k) {
  if (dim != 3 && dim != 4) throw Error(ErrorCode::InvalidArgument, "grid dimension must be 3 or 4");
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "grid resolution must be >= 1");
  DirectionGrid g;
  g.dim = dim;
  g.resolution = k;
  g.spacing = std::numbers::pi / (2.0 * k);
  std::vector<double> tans(k + 1);
  for (int j = 0; j <= k; ++j) {
    tans[j] = 2 * j == k ? 0.0 : std::tan(std::numbers::pi / 4.0 * (2.0 * j / k - 1.0));
  }
  tans.front() = -1.0;
  tans.back() = 1.0;
  std::set<std::vector<long long>> seen;
  const int m = dim - 1;
  int total = 1;
  for (int i = 0; i < m; ++i) total *= k + 1;
  for (int axis = 0; axis < dim; ++axis) {
    for (int sign : {1, -1}) {
      for (int flat = 0; flat < total; ++flat) {
        Eigen::VectorXd v(dim);
        int rest = flat;
        for (int a = 0; a < dim; ++a) {
          if (a == axis) {
            v[a] = sign;
            continue;
          }
          v[a] = tans[rest % (k + 1)];
          rest /= k + 1;
        }
        v.normalize();
        std::vector<long long> key(dim);
        for (int a = 0; a < dim; ++a) key[a] = std::llround(v[a] * 1e9);
        if (seen.insert(key).second) g.directions.push_back(v);
      }
    }
  }
  return g;
}

std::vector<SupportRecord> support_scan(const PointCloudBody& body,
                                        const std::vector<Eigen::VectorXd>& directions,
                                        const ClassifyOptions& options) {
  if (body.size() == 0) throw Error(ErrorCode::EmptyBody, "body has no points");
  if (!(options.cluster_tol > 0.0) || !(options.link_tol > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "cluster tolerances must be > 0");
  }
  for (const auto& d : directions) {
    if (d.size() != body.dim()) {
      throw Error(ErrorCode::DimensionMismatch, "direction and body dimensions differ");
    }
  }
  const Eigen::MatrixXd& P = body.points();
  const double band = options.cluster_tol * body.diameter();
  const double link2 = std::pow(options.link_tol * body.diameter(), 2);
  std::vector<SupportRecord> out(directions.size());
  parallel_for(static_cast<int>(directions.size()), scan_threads(options), [&](int i) {
    SupportRecord& rec = out[i];
    rec.direction = directions[i].normalized();
    const Eigen::VectorXd h = P.transpose() * rec.direction;
    rec.support_value = h.maxCoeff();
    std::vector<int> cand;
    for (int j = 0; j < h.size(); ++j) {
      if (h[j] >= rec.support_value - band) cand.push_back(j);
    }
    const int m = static_cast<int>(cand.size());
    UnionFind uf(m);
    for (int a = 0; a < m; ++a) {
      for (int b = a + 1; b < m; ++b) {
        if (uf.find(a) == uf.find(b)) continue;
        if ((P.col(cand[a]) - P.col(cand[b])).squaredNorm() <= link2) uf.unite(a, b);
      }
    }
    std::vector<int> root_to_cluster(m, -1);
    for (int a = 0; a < m; ++a) {
      const int r = uf.find(a);
      if (root_to_cluster[r] < 0) {
        root_to_cluster[r] = static_cast<int>(rec.clusters.size());
        rec.clusters.emplace_back();
      }
      rec.clusters[root_to_cluster[r]].members.push_back(cand[a]);
    }
    for (auto& c : rec.clusters) {
      c.centroid = Eigen::VectorXd::Zero(body.dim());
      int best = c.members.front();
      for (int j : c.members) {
        c.centroid += P.col(j);
        if (h[j] > h[best]) best = j;
      }
      c.centroid /= static_cast<double>(c.members.size());
      c.touching_index = best;
      for (int j : c.members) c.spread = std::max(c.spread, (P.col(j) - c.centroid).norm());
    }
    std::stable_sort(rec.clusters.begin(), rec.clusters.end(),
                     [&](const ContactCluster& a, const ContactCluster& b) {
                       return h[a.touching_index] > h[b.touching_index];
                     });
  });
  return out;
}

TangencyFit tangency_fit(const PointCloudBody& body, const SupportRecord& record,
                         int cluster_index, const ClassifyOptions& options) {
  if (cluster_index < 0 || cluster_index >= static_cast<int>(record.clusters.size())) {
    throw Error(ErrorCode::InvalidArgument, "cluster index out of range");
  }
  const int n = body.dim(), m = n - 1;
  const ContactCluster& cl = record.clusters[cluster_index];
  const Eigen::VectorXd d = record.direction.normalized();
  const Eigen::VectorXd x0 = body.point(cl.touching_index);
  const double h = record.support_value;
  const Eigen::MatrixXd Q = d.householderQr().householderQ();
  const Eigen::MatrixXd B = Q.rightCols(m);
  const auto monos = monomials(m);
  const int unknowns = static_cast<int>(monos.size());

  std::vector<Eigen::VectorXd> xi;
  std::vector<double> eta;
  double window = 0.0;
  for (int j : cl.members) window = std::max(window, (B.transpose() * (body.point(j) - x0)).norm());
  window = std::max(window, 1e-3 * body.diameter());

  if (options.use_analytic && body.analytic()) {
    const auto& f = body.analytic()->f;
    const Eigen::VectorXd base = x0 + (h - d.dot(x0)) * d;
    const int per_axis = m == 2 ? 13 : 7;
    int total = 1;
    for (int a = 0; a < m; ++a) total *= per_axis;
    const double step = window / 10.0;
    for (int flat = 0; flat < total; ++flat) {
      Eigen::VectorXd c(m);
      int rest = flat;
      for (int a = 0; a < m; ++a) {
        c[a] = window * (2.0 * (rest % per_axis) / (per_axis - 1) - 1.0);
        rest /= per_axis;
      }
      const Eigen::VectorXd p = base + B * c;
      double lo = 0.0, hi = -1.0;
      for (double s = 0.0; s <= 2.0 * body.diameter(); s += step) {
        if (f(p - s * d) <= 0.0) {
          hi = s;
          break;
        }
        lo = s;
      }
      if (hi < 0.0) continue;
      if (hi == 0.0) {
        xi.push_back(c);
        eta.push_back(0.0);
        continue;
      }
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (f(p - mid * d) <= 0.0 ? hi : lo) = mid;
      }
      xi.push_back(c);
      eta.push_back(0.5 * (lo + hi));
    }
  } else {
    const double band = options.cluster_tol * body.diameter();
    const Eigen::VectorXd heights = (h - (body.points().transpose() * d).array()).matrix();
    for (int expand = 0; expand <= 4 && static_cast<int>(xi.size()) < 2 * unknowns; ++expand) {
      xi.clear();
      eta.clear();
      const double b = band * std::pow(2.0, expand);
      const double r = window * std::pow(std::sqrt(2.0), expand);
      for (int j = 0; j < body.size(); ++j) {
        if (heights[j] > b) continue;
        const Eigen::VectorXd diff = body.point(j) - x0;
        if (diff.norm() > r) continue;
        xi.push_back(B.transpose() * diff);
        eta.push_back(heights[j]);
      }
    }
    window = 0.0;
    for (const auto& c : xi) window = std::max(window, c.norm());
  }
  const int count = static_cast<int>(xi.size());
  if (count < 2 * unknowns || !(window > 0.0)) {
    throw Error(ErrorCode::InsufficientSamples,
                std::to_string(count) + " samples near the contact, need " +
                    std::to_string(2 * unknowns));
  }

  Eigen::MatrixXd A(count, unknowns);
  Eigen::VectorXd rhs(count);
  for (int i = 0; i < count; ++i) {
    const Eigen::VectorXd s = xi[i] / window;
    for (int k = 0; k < unknowns; ++k) A(i, k) = monomial_value(monos[k], s);
    rhs[i] = eta[i];
  }
  Eigen::VectorXd coef = A.colPivHouseholderQr().solve(rhs);
  for (int k = 0; k < unknowns; ++k) coef[k] /= std::pow(window, degree(monos[k]));

  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(m, m);
  for (int k = 0; k < unknowns; ++k) {
    if (degree(monos[k]) != 2) continue;
    std::vector<int> idx;
    for (int a = 0; a < m; ++a) {
      for (int e = 0; e < monos[k][a]; ++e) idx.push_back(a);
    }
    if (idx[0] == idx[1]) {
      H(idx[0], idx[0]) = 2.0 * coef[k];
    } else {
      H(idx[0], idx[1]) = H(idx[1], idx[0]) = coef[k];
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
  TangencyFit fit;
  fit.samples = count;
  fit.hessian_eigenvalues = es.eigenvalues();
  const Eigen::VectorXd kernel = es.eigenvectors().col(0);
  for (int k = 0; k < unknowns; ++k) {
    if (degree(monos[k]) == 4) fit.kernel_quartic += coef[k] * monomial_value(monos[k], kernel);
  }
  const double lmax = fit.hessian_eigenvalues[m - 1];
  const double lmin = fit.hessian_eigenvalues[0];
  const double near_zero = options.hessian_ratio * lmax;
  if (!(lmax > options.hessian_floor)) {
    fit.label = Tangency::unknown;
  } else if (lmin >= near_zero) {
    fit.label = Tangency::A1;
  } else if ((m < 2 || fit.hessian_eigenvalues[1] >= near_zero) &&
             std::abs(lmin) < near_zero && fit.kernel_quartic > options.quartic_threshold) {
    fit.label = Tangency::A3;
  } else {
    fit.label = Tangency::unknown;
  }
  return fit;
}

Tangency tangency_order(const PointCloudBody& body, const SupportRecord& record, int cluster_index,
                        const ClassifyOptions& options) {
  return tangency_fit(body, record, cluster_index, options).label;
}

std::string catalogue_label(int dim, int clusters, const std::vector<Tangency>& labels) {
  if (clusters < 1 || clusters > dim) return "unresolved";
  if (labels.empty()) return clusters == 1 ? "A1" : std::to_string(clusters) + "A1";
  if (static_cast<int>(labels.size()) != clusters) return "unresolved";
  const auto a3 = std::count(labels.begin(), labels.end(), Tangency::A3);
  if (std::count(labels.begin(), labels.end(), Tangency::unknown) > 0) return "unresolved";
  if (a3 == 0) return clusters == 1 ? "A1" : std::to_string(clusters) + "A1";
  if (a3 == 1 && clusters == 1) return "A3";
  if (a3 == 1 && clusters == 2) return "A1A3";
  return "unresolved";
}

CatalogueSummary catalogue_assign(const std::vector<SupportRecord>& records, double grid_spacing,
                                  const ClassifyOptions& options) {
  CatalogueSummary s;
  s.directions = static_cast<int>(records.size());
  if (!records.empty()) s.dim = static_cast<int>(records.front().direction.size());
  for (const char* label : {"A1", "2A1", "3A1", "4A1", "A3", "A1A3", "unresolved"}) {
    s.label_counts[label] = 0;
  }
  std::map<std::string, std::vector<int>> by_label;
  for (int i = 0; i < s.directions; ++i) {
    const std::string& label = records[i].catalogue_label;
    ++s.label_counts[label];
    if (label != "A1" && label != "unresolved") by_label[label].push_back(i);
  }
  const double cos_radius = std::cos(std::min(std::numbers::pi, options.family_radius * grid_spacing));
  for (const char* label : {"2A1", "3A1", "4A1", "A3", "A1A3"}) {
    s.family_counts[label] = 0;
    const auto it = by_label.find(label);
    if (it == by_label.end()) continue;
    const auto& idx = it->second;
    const int m = static_cast<int>(idx.size());
    UnionFind uf(m);
    for (int a = 0; a < m; ++a) {
      for (int b = a + 1; b < m; ++b) {
        if (records[idx[a]].direction.dot(records[idx[b]].direction) >= cos_radius) uf.unite(a, b);
      }
    }
    std::map<int, DirectionFamily> groups;
    for (int a = 0; a < m; ++a) {
      auto& fam = groups[uf.find(a)];
      fam.label = label;
      fam.members.push_back(idx[a]);
    }
    for (auto& [root, fam] : groups) {
      Eigen::VectorXd mean = Eigen::VectorXd::Zero(s.dim);
      for (int i : fam.members) mean += records[i].direction;
      // closest member to the normalized mean (the mean of a closed curve may vanish)
      int best = fam.members.front();
      for (int i : fam.members) {
        if (records[i].direction.dot(mean) > records[best].direction.dot(mean)) best = i;
      }
      fam.representative = records[best].direction;
      s.families.push_back(std::move(fam));
      ++s.family_counts[label];
    }
  }
  s.predicted_strata = {{"A1", 1}, {"2A1", 3}, {"3A1", 7}, {"4A1", 15}, {"A1A3", 5}};
  s.singularities = {
      {"A1", "R0"},
      {"2A1", "R0 inside the segment, R1 at its endpoints"},
      {"3A1", "R0 inside the triangle, R1 on its sides, R2^0 at typical vertices, R2^+- at "
              "finitely many"},
      {"4A1", "R0 inside the tetrahedron, R1 on its faces, R2 on its edges, R3 at its vertices"},
      {"A1A3", "R0 inside the segment, R2^0 at the A3 end, V3 at the A1 end"},
  };
  return s;
}

ClassifyResult classify(const PointCloudBody& body, const DirectionGrid& grid,
                        const ClassifyOptions& options) {
  ClassifyResult out;
  out.records = support_scan(body, grid.directions, options);
  parallel_for(static_cast<int>(out.records.size()), scan_threads(options), [&](int i) {
    SupportRecord& rec = out.records[i];
    const int c = static_cast<int>(rec.clusters.size());
    if ((options.tangency_all || c >= 2) && c <= body.dim()) {
      for (int k = 0; k < c; ++k) {
        try {
          rec.tangency_labels.push_back(tangency_order(body, rec, k, options));
        } catch (const Error& e) {
          if (e.code() != ErrorCode::InsufficientSamples) throw;
          rec.tangency_labels.push_back(Tangency::unknown);
        }
      }
    }
    rec.catalogue_label = catalogue_label(body.dim(), c, rec.tangency_labels);
  });
  out.summary = catalogue_assign(out.records, grid.spacing, options);
  return out;
}

}  // namespace hullsing
