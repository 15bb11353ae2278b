#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "clusterks/bounds.hpp"

namespace clusterks {

// Range (lo, hi) of a single coordinate or parameter; only the width enters
// the coefficient formulas.
class RangeSpec {
 public:
  RangeSpec(double lo, double hi);

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  double width() const noexcept { return hi_ - lo_; }

 private:
  double lo_;
  double hi_;
};

// Cluster sizes of a block-independent sample.
class ClusterSpec {
 public:
  explicit ClusterSpec(std::vector<std::size_t> sizes);

  const std::vector<std::size_t>& sizes() const noexcept { return sizes_; }
  std::size_t cluster_count() const noexcept { return sizes_.size(); }
  std::size_t total() const noexcept { return total_; }

  // Mean cluster size a_n.
  double mean_size() const noexcept;
  // Population (divide-by-K) variance of cluster sizes s_n^2.
  double size_variance() const noexcept;
  // Effective sample size K / (1 + s_n^2 / a_n^2).
  double effective_size() const noexcept;

 private:
  std::vector<std::size_t> sizes_;
  std::size_t total_ = 0;
};

// n^2 / sum (b_i - a_i)^2.
double mcdiarmid_from_ranges(std::span<const RangeSpec> ranges);

// n^2 / sum size_k^2 for the clustered average; equals the effective size.
double mcdiarmid_from_clusters(const ClusterSpec& spec);

namespace downward {

// Finitely many parameters, each with its own range.
struct FiniteTheta {
  std::vector<RangeSpec> ranges;
};

// Monotone real-valued function with range (a, b).
struct MonotoneReal {
  RangeSpec range;
};

struct LipschitzDifferentiable {
  RangeSpec range;
  double k_lip;
};

struct LipschitzOneSided {
  RangeSpec range;
  double k_lip;
};

}  // namespace downward

using DownwardVariationCase =
    std::variant<downward::FiniteTheta, downward::MonotoneReal,
                 downward::LipschitzDifferentiable, downward::LipschitzOneSided>;

// FiniteTheta: (sum of widths)^2; MonotoneReal: width^2;
// Lipschitz cases: (width + K)^2.
double downward_variation(const DownwardVariationCase& variation);

enum class TimeDomain {
  Continuous,  // paths K-Lipschitz on [0, 1]
  FiniteGrid,  // sup over a finite set of time points
};

// Coefficients of the difference of two averages of n unit-level processes.
// Continuous: `k` is the Lipschitz constant, C = n/4, D = 4 (1 + k)^2.
// FiniteGrid: `k` is the number of time points, C = n/4, D = 4 k^2.
BoundParams lipschitz_difference_params(std::size_t n_units, double k,
                                        TimeDomain domain = TimeDomain::Continuous);

}  // namespace clusterks
