#include "clusterks/coefficients.hpp"

#include <cassert>
#include <cmath>
#include <string>

#include "clusterks/errors.hpp"

namespace clusterks {

RangeSpec::RangeSpec(double lo, double hi) : lo_(lo), hi_(hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    throw ValidationError("degenerate range (" + std::to_string(lo) + ", " +
                          std::to_string(hi) + "): need finite lo < hi");
  }
}

ClusterSpec::ClusterSpec(std::vector<std::size_t> sizes) : sizes_(std::move(sizes)) {
  if (sizes_.empty()) throw ValidationError("cluster spec needs at least one cluster");
  for (std::size_t i = 0; i < sizes_.size(); ++i) {
    if (sizes_[i] == 0) {
      throw ValidationError("cluster " + std::to_string(i) + " has size zero");
    }
    total_ += sizes_[i];
  }
}

double ClusterSpec::mean_size() const noexcept {
  return static_cast<double>(total_) / static_cast<double>(sizes_.size());
}

double ClusterSpec::size_variance() const noexcept {
  const double mean = mean_size();
  double acc = 0.0;
  for (auto s : sizes_) {
    const double dev = static_cast<double>(s) - mean;
    acc += dev * dev;
  }
  return acc / static_cast<double>(sizes_.size());
}

double ClusterSpec::effective_size() const noexcept {
  const double mean = mean_size();
  return static_cast<double>(sizes_.size()) / (1.0 + size_variance() / (mean * mean));
}

double mcdiarmid_from_ranges(std::span<const RangeSpec> ranges) {
  if (ranges.empty()) throw ValidationError("need at least one range");
  double sum_sq = 0.0;
  for (const auto& r : ranges) sum_sq += r.width() * r.width();
  const double n = static_cast<double>(ranges.size());
  return n * n / sum_sq;
}

double mcdiarmid_from_clusters(const ClusterSpec& spec) {
  // Integer sums are exact up to ~4e9 observations per cluster.
  long double sum_sq = 0.0L;
  for (auto s : spec.sizes()) sum_sq += static_cast<long double>(s) * static_cast<long double>(s);
  const long double n = static_cast<long double>(spec.total());
  const double c = static_cast<double>(n * n / sum_sq);
  assert(std::abs(c - spec.effective_size()) <= 1e-12 * c);
  return c;
}

double downward_variation(const DownwardVariationCase& variation) {
  auto check_k = [](double k) {
    if (!(k >= 0.0) || !std::isfinite(k)) {
      throw ValidationError("Lipschitz constant must be finite and >= 0");
    }
  };
  struct Visitor {
    decltype(check_k)& check;
    double operator()(const downward::FiniteTheta& v) const {
      if (v.ranges.empty()) throw ValidationError("finite parameter set is empty");
      double total = 0.0;
      for (const auto& r : v.ranges) total += r.width();
      return total * total;
    }
    double operator()(const downward::MonotoneReal& v) const {
      return v.range.width() * v.range.width();
    }
    double operator()(const downward::LipschitzDifferentiable& v) const {
      check(v.k_lip);
      const double s = v.range.width() + v.k_lip;
      return s * s;
    }
    double operator()(const downward::LipschitzOneSided& v) const {
      check(v.k_lip);
      const double s = v.range.width() + v.k_lip;
      return s * s;
    }
  };
  return std::visit(Visitor{check_k}, variation);
}

BoundParams lipschitz_difference_params(std::size_t n_units, double k,
                                        TimeDomain domain) {
  if (n_units == 0) throw ValidationError("need at least one unit");
  if (!(k >= 0.0) || !std::isfinite(k)) {
    throw ValidationError("k must be finite and >= 0");
  }
  const double c = static_cast<double>(n_units) / 4.0;
  const double spread = domain == TimeDomain::Continuous ? 1.0 + k : k;
  // BoundParams rejects c*d <= 1.
  return BoundParams(c, 4.0 * spread * spread);
}

}  // namespace clusterks
