#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "hullsing/body.hpp"

namespace hullsing {

/// Unit directions on S^{n−1} with the nominal angular spacing between grid neighbours.
struct DirectionGrid {
  int dim = 3;
  int resolution = 0;
  double spacing = 0.0;
  std::vector<Eigen::VectorXd> directions;
};

/// Equiangular cube-sphere grid: every face of the cube [−1,1]ⁿ carries (k+1)^{n−1} nodes
/// tan(π/4·(2j/k − 1)) per axis; shared nodes appear once. Even k includes the axes.
DirectionGrid cube_sphere_grid(int dim, int k);

struct ClassifyOptions {
  /// Points within cluster_tol·diameter of the support plane are contact candidates.
  double cluster_tol = 1e-2;
  /// Single-linkage distance, relative to the diameter.
  double link_tol = 0.15;
  /// Hessian eigenvalue "near zero" threshold, relative to the largest eigenvalue.
  double hessian_ratio = 1e-3;
  /// Largest eigenvalue below this (in 1/length) counts as a vanishing Hessian.
  double hessian_floor = 1e-6;
  double quartic_threshold = 1e-6;
  /// Run tangency_order on single-cluster records too (needed to see A₃ planes).
  bool tangency_all = false;
  /// Use the analytic descriptor, when present, to resample the height function.
  bool use_analytic = false;
  /// Neighbour radius for family grouping, in units of the grid spacing.
  double family_radius = 2.0;
  /// 0 = THREADS environment variable or hardware concurrency.
  int threads = 0;
};

struct ContactCluster {
  Eigen::VectorXd centroid;
  double spread = 0.0;
  /// Sample of largest support value in the cluster.
  int touching_index = -1;
  std::vector<int> members;
};

enum class Tangency { A1, A3, unknown };
const char* to_string(Tangency t);

struct SupportRecord {
  Eigen::VectorXd direction;
  double support_value = 0.0;
  std::vector<ContactCluster> clusters;
  std::vector<Tangency> tangency_labels;
  std::string catalogue_label = "unresolved";

  bool singular_candidate() const { return clusters.size() >= 2; }
};

/// One record per direction. Throws EmptyBody, InvalidArgument for a non-positive tolerance or
/// a direction of the wrong dimension.
std::vector<SupportRecord> support_scan(const PointCloudBody& body,
                                        const std::vector<Eigen::VectorXd>& directions,
                                        const ClassifyOptions& options = {});

struct TangencyFit {
  Tangency label = Tangency::unknown;
  /// Hessian eigenvalues of the fitted height function, ascending.
  Eigen::VectorXd hessian_eigenvalues;
  /// Quartic coefficient along the eigenvector of the smallest eigenvalue.
  double kernel_quartic = 0.0;
  int samples = 0;
};

/// Fits the height of the body below the support plane over the tangent chart at the cluster,
/// by a polynomial of degree 4. Throws InsufficientSamples.
TangencyFit tangency_fit(const PointCloudBody& body, const SupportRecord& record,
                         int cluster_index, const ClassifyOptions& options = {});
Tangency tangency_order(const PointCloudBody& body, const SupportRecord& record, int cluster_index,
                        const ClassifyOptions& options = {});

/// A1, 2A1, 3A1, 4A1 for all-A₁ clusters, A3 / A1A3 with one A₃ cluster, unresolved otherwise
/// (no cluster, more clusters than the dimension, unknown tangency). Empty `labels` means the
/// tangency was not assessed and the clusters count as A₁.
std::string catalogue_label(int dim, int clusters, const std::vector<Tangency>& labels);

struct DirectionFamily {
  std::string label;
  std::vector<int> members;
  Eigen::VectorXd representative;
};

struct CatalogueSummary {
  int dim = 3;
  int directions = 0;
  std::map<std::string, int> label_counts;
  /// Connected groups of singular directions (2A1 and beyond, A3) per label.
  std::vector<DirectionFamily> families;
  std::map<std::string, int> family_counts;
  /// Boundary strata near one plane of each type: faces of the support simplex for kA₁
  /// (2^k − 1), five near an A₁A₃ segment.
  std::map<std::string, int> predicted_strata;
  /// Hull singularities at the simplex faces, by label.
  std::map<std::string, std::string> singularities;
};

CatalogueSummary catalogue_assign(const std::vector<SupportRecord>& records, double grid_spacing,
                                  const ClassifyOptions& options = {});

struct ClassifyResult {
  std::vector<SupportRecord> records;
  CatalogueSummary summary;
};

/// support_scan, then tangency_order on the clusters of singular candidates (all records with
/// tangency_all), then catalogue_assign.
ClassifyResult classify(const PointCloudBody& body, const DirectionGrid& grid,
                        const ClassifyOptions& options = {});

/// Worker count: options.threads, else THREADS, else hardware concurrency (at least 1).
int scan_threads(const ClassifyOptions& options);

}  // namespace hullsing
