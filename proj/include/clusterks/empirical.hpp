#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "clusterks/bounds.hpp"
#include "clusterks/coefficients.hpp"

namespace clusterks {

struct Observation {
  double value;
  std::string cluster;
};

// Observations tagged with the block (cluster) they belong to. Clusters are
// identified by label; row order is irrelevant.
class ClusteredSample {
 public:
  explicit ClusteredSample(std::vector<Observation> observations,
                           bool labels_inferred = false);

  // Every value its own cluster (iid data).
  static ClusteredSample independent(std::span<const double> values);

  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  const ClusterSpec& clusters() const noexcept { return clusters_; }
  const std::vector<std::string>& cluster_labels() const noexcept { return labels_; }
  // True when cluster labels were absent and each row became its own cluster.
  bool labels_inferred() const noexcept { return labels_inferred_; }

 private:
  std::vector<double> values_;
  std::vector<std::string> labels_;  // sorted, one per cluster
  ClusterSpec clusters_;
  bool labels_inferred_;
};

// Right-continuous nondecreasing step function that starts at 0 and ends at 1.
class StepCdf {
 public:
  StepCdf(std::vector<double> jump_points, std::vector<double> values);

  const std::vector<double>& jump_points() const noexcept { return jumps_; }
  const std::vector<double>& values() const noexcept { return values_; }

  double operator()(double r) const;
  // lim_{s -> r-} F(s)
  double left_limit(double r) const;

 private:
  std::vector<double> jumps_;
  std::vector<double> values_;
};

StepCdf ecdf(std::span<const double> values);
StepCdf ecdf(const ClusteredSample& sample);

// Exact sup over R of |F - G| (TwoSided), (F - G)^+ (PlusSide) or
// (F - G)^- (MinusSide).
double sup_distance_two_sample(const StepCdf& f, const StepCdf& g, TailSide side);

using ReferenceCdf = std::function<double(double)>;

// Exact sup over R of the distance between a step CDF and a continuous
// reference CDF. A reference that jumps must list its jump locations in
// `extra_points`; its left limit there is read one ulp below.
double sup_distance_reference(const StepCdf& f, const ReferenceCdf& reference,
                              TailSide side,
                              std::span<const double> extra_points = {});

// Per-unit trajectories on a shared time grid in [0, 1], each declared
// Lipschitz with constant k_lip.
class TrajectoryPanel {
 public:
  TrajectoryPanel(std::vector<double> times,
                  std::vector<std::vector<double>> unit_values, double k_lip);

  const std::vector<double>& times() const noexcept { return times_; }
  const std::vector<std::vector<double>>& unit_values() const noexcept {
    return units_;
  }
  std::size_t unit_count() const noexcept { return units_.size(); }
  double k_lip() const noexcept { return k_lip_; }

  // Largest distance from any t in [0, 1] to the nearest grid point, doubled:
  // the interior spacing, or twice the uncovered margin at either end.
  double delta() const noexcept;

  // Cross-unit mean at each grid time.
  std::vector<double> mean_path() const;

 private:
  std::vector<double> times_;
  std::vector<std::vector<double>> units_;
  double k_lip_;
};

struct SupInterval {
  double lower;
  double upper;
};

// Bracket for sup_t |mean_f(t) - mean_g(t)| over [0, 1]. The difference is
// 2K-Lipschitz, so between grid points it can exceed the grid maximum by at
// most 2K * delta / 2.
SupInterval lipschitz_sup_interval(const TrajectoryPanel& f, const TrajectoryPanel& g);

}  // namespace clusterks
