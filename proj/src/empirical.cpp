#include "clusterks/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "clusterks/errors.hpp"

namespace clusterks {

namespace {

ClusterSpec tally_clusters(const std::vector<Observation>& observations,
                           std::vector<std::string>& labels) {
  std::map<std::string, std::size_t> counts;
  for (const auto& obs : observations) ++counts[obs.cluster];
  std::vector<std::size_t> sizes;
  sizes.reserve(counts.size());
  labels.clear();
  for (const auto& [label, count] : counts) {
    labels.push_back(label);
    sizes.push_back(count);
  }
  return ClusterSpec(std::move(sizes));
}

std::vector<Observation> checked(std::vector<Observation> observations) {
  if (observations.empty()) throw ValidationError("sample is empty");
  for (std::size_t i = 0; i < observations.size(); ++i) {
    if (!std::isfinite(observations[i].value)) {
      throw ValidationError("observation " + std::to_string(i + 1) + " is not finite");
    }
  }
  return observations;
}

}  // namespace

ClusteredSample::ClusteredSample(std::vector<Observation> observations, bool labels_inferred)
    : clusters_(tally_clusters(checked(observations), labels_)),
      labels_inferred_(labels_inferred) {
  values_.reserve(observations.size());
  for (const auto& obs : observations) values_.push_back(obs.value);
}

ClusteredSample ClusteredSample::independent(std::span<const double> values) {
  std::vector<Observation> obs;
  obs.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    obs.push_back({values[i], std::to_string(i)});
  }
  return ClusteredSample(std::move(obs), true);
}

StepCdf::StepCdf(std::vector<double> jump_points, std::vector<double> values)
    : jumps_(std::move(jump_points)), values_(std::move(values)) {
  if (jumps_.empty() || jumps_.size() != values_.size()) {
    throw ValidationError("step CDF needs matching, nonempty jump and value lists");
  }
  double prev = 0.0;
  for (std::size_t i = 0; i < jumps_.size(); ++i) {
    if (!std::isfinite(jumps_[i]) || (i > 0 && !(jumps_[i] > jumps_[i - 1]))) {
      throw ValidationError("step CDF jump points must be finite and strictly increasing");
    }
    if (!(values_[i] >= prev) || values_[i] > 1.0 + 1e-12) {
      throw ValidationError("step CDF values must be nondecreasing within [0, 1]");
    }
    prev = values_[i];
  }
  if (std::abs(values_.back() - 1.0) > 1e-12) {
    throw ValidationError("step CDF must end at 1");
  }
  values_.back() = 1.0;
}

double StepCdf::operator()(double r) const {
  const auto it = std::upper_bound(jumps_.begin(), jumps_.end(), r);
  if (it == jumps_.begin()) return 0.0;
  return values_[static_cast<std::size_t>(it - jumps_.begin()) - 1];
}

double StepCdf::left_limit(double r) const {
  const auto it = std::lower_bound(jumps_.begin(), jumps_.end(), r);
  if (it == jumps_.begin()) return 0.0;
  return values_[static_cast<std::size_t>(it - jumps_.begin()) - 1];
}

StepCdf ecdf(std::span<const double> values) {
  if (values.empty()) throw ValidationError("cannot build an ECDF from an empty sample");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  std::vector<double> jumps;
  std::vector<double> levels;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (!std::isfinite(sorted[i])) throw ValidationError("ECDF input must be finite");
    if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) continue;
    jumps.push_back(sorted[i]);
    levels.push_back(static_cast<double>(i + 1) / n);
  }
  return StepCdf(std::move(jumps), std::move(levels));
}

StepCdf ecdf(const ClusteredSample& sample) { return ecdf(sample.values()); }

// Both functions are constant between consecutive points of the merged jump
// set, so the supremum is attained at one of those points (right values);
// the left limit at each point equals the right value at the previous one,
// and both functions vanish at -infinity and agree at +infinity.
double sup_distance_two_sample(const StepCdf& f, const StepCdf& g, TailSide side) {
  const auto& fj = f.jump_points();
  const auto& gj = g.jump_points();
  std::size_t i = 0;
  std::size_t j = 0;
  double fv = 0.0;
  double gv = 0.0;
  double plus = 0.0;
  double minus = 0.0;
  while (i < fj.size() || j < gj.size()) {
    double x;
    if (j == gj.size() || (i < fj.size() && fj[i] <= gj[j])) {
      x = fj[i];
    } else {
      x = gj[j];
    }
    if (i < fj.size() && fj[i] == x) fv = f.values()[i++];
    if (j < gj.size() && gj[j] == x) gv = g.values()[j++];
    plus = std::max(plus, fv - gv);
    minus = std::max(minus, gv - fv);
  }
  switch (side) {
    case TailSide::PlusSide:
      return plus;
    case TailSide::MinusSide:
      return minus;
    case TailSide::TwoSided:
      break;
  }
  return std::max(plus, minus);
}

// With a continuous nondecreasing reference, F - ref peaks at the left end
// of each constant piece of F and ref - F approaches its peak just before
// the next jump.
double sup_distance_reference(const StepCdf& f, const ReferenceCdf& reference,
                              TailSide side, std::span<const double> extra_points) {
  if (!reference) throw ValidationError("reference CDF is empty");
  double plus = 0.0;
  double minus = 0.0;
  auto ref_at = [&](double r) {
    const double v = reference(r);
    if (!(v >= 0.0 && v <= 1.0)) {
      throw ValidationError("reference CDF returned a value outside [0, 1]");
    }
    return v;
  };
  // The reference is continuous except possibly at the extra points, where
  // its left limit is taken one ulp below.
  std::vector<double> jumps(extra_points.begin(), extra_points.end());
  std::sort(jumps.begin(), jumps.end());
  auto ref_left = [&](double r, double ref) {
    if (!std::binary_search(jumps.begin(), jumps.end(), r)) return ref;
    return ref_at(std::nextafter(r, -std::numeric_limits<double>::infinity()));
  };
  double before = 0.0;
  for (std::size_t i = 0; i < f.jump_points().size(); ++i) {
    const double r = f.jump_points()[i];
    const double ref = ref_at(r);
    const double left_ref = ref_left(r, ref);
    plus = std::max({plus, f.values()[i] - ref, before - left_ref});
    minus = std::max({minus, ref - f.values()[i], left_ref - before});
    before = f.values()[i];
  }
  for (double p : jumps) {
    const double ref = ref_at(p);
    const double left_ref = ref_left(p, ref);
    plus = std::max({plus, f(p) - ref, f.left_limit(p) - left_ref});
    minus = std::max({minus, ref - f(p), left_ref - f.left_limit(p)});
  }
  switch (side) {
    case TailSide::PlusSide:
      return plus;
    case TailSide::MinusSide:
      return minus;
    case TailSide::TwoSided:
      break;
  }
  return std::max(plus, minus);
}

TrajectoryPanel::TrajectoryPanel(std::vector<double> times,
                                 std::vector<std::vector<double>> unit_values, double k_lip)
    : times_(std::move(times)), units_(std::move(unit_values)), k_lip_(k_lip) {
  if (times_.empty()) throw ValidationError("trajectory panel needs at least one time");
  if (units_.empty()) throw ValidationError("trajectory panel needs at least one unit");
  if (!(k_lip_ >= 0.0) || !std::isfinite(k_lip_)) {
    throw ValidationError("Lipschitz constant must be finite and >= 0");
  }
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (!(times_[i] >= 0.0 && times_[i] <= 1.0)) {
      throw ValidationError("time " + std::to_string(times_[i]) + " outside [0, 1]");
    }
    if (i > 0 && !(times_[i] > times_[i - 1])) {
      throw ValidationError("times must be strictly increasing (row " +
                            std::to_string(i + 1) + ")");
    }
  }
  double worst_excess = 0.0;
  std::string worst;
  for (std::size_t u = 0; u < units_.size(); ++u) {
    const auto& path = units_[u];
    if (path.size() != times_.size()) {
      throw ValidationError("unit " + std::to_string(u + 1) + " has " +
                            std::to_string(path.size()) + " values for " +
                            std::to_string(times_.size()) + " times");
    }
    for (std::size_t i = 0; i < path.size(); ++i) {
      if (!(path[i] >= 0.0 && path[i] <= 1.0)) {
        throw ValidationError("unit " + std::to_string(u + 1) + " value " +
                              std::to_string(path[i]) + " outside [0, 1]");
      }
      if (i == 0) continue;
      const double dt = times_[i] - times_[i - 1];
      const double dv = std::abs(path[i] - path[i - 1]);
      const double excess = dv - (k_lip_ * dt + 1e-9);
      if (excess > worst_excess) {
        worst_excess = excess;
        std::ostringstream msg;
        msg << "unit " << (u + 1) << " changes by " << dv << " between t=" << times_[i - 1]
            << " and t=" << times_[i] << " (slope " << dv / dt << " > k_lip " << k_lip_ << ")";
        worst = msg.str();
      }
    }
  }
  if (worst_excess > 0.0) {
    throw ValidationError("Lipschitz consistency violated: " + worst);
  }
}

double TrajectoryPanel::delta() const noexcept {
  double d = std::max(2.0 * times_.front(), 2.0 * (1.0 - times_.back()));
  for (std::size_t i = 1; i < times_.size(); ++i) {
    d = std::max(d, times_[i] - times_[i - 1]);
  }
  return d;
}

std::vector<double> TrajectoryPanel::mean_path() const {
  std::vector<double> mean(times_.size(), 0.0);
  for (const auto& path : units_) {
    for (std::size_t i = 0; i < path.size(); ++i) mean[i] += path[i];
  }
  for (auto& m : mean) m /= static_cast<double>(units_.size());
  return mean;
}

SupInterval lipschitz_sup_interval(const TrajectoryPanel& f, const TrajectoryPanel& g) {
  if (f.times() != g.times()) throw ValidationError("panels use different time grids");
  if (f.unit_count() != g.unit_count()) {
    throw ValidationError("panels have different unit counts");
  }
  if (f.k_lip() != g.k_lip()) {
    throw ValidationError("panels declare different Lipschitz constants");
  }
  const auto mf = f.mean_path();
  const auto mg = g.mean_path();
  double lower = 0.0;
  for (std::size_t i = 0; i < mf.size(); ++i) lower = std::max(lower, std::abs(mf[i] - mg[i]));
  return {lower, lower + f.k_lip() * f.delta()};
}

}  // namespace clusterks
