#include "clusterks/hypothesis.hpp"

#include <algorithm>
#include <cmath>

#include "clusterks/errors.hpp"

namespace clusterks {

namespace {

constexpr const char* kInferredNote =
    "cluster labels absent: each observation treated as its own cluster";

void require_alphas(std::span<const double> alphas) {
  for (double a : alphas) {
    if (!(a > 0.0 && a < 1.0)) {
      throw DomainError("alpha levels must lie in (0, 1), got " + std::to_string(a));
    }
  }
}

BoundParams effective_params(const ClusteredSample& sample, const char* which) {
  const double nu = sample.clusters().effective_size();
  if (!(nu > 1.0)) {
    throw DomainError(std::string(which) + " effective sample size " + std::to_string(nu) +
                      " <= 1: the bound is inapplicable");
  }
  return BoundParams(nu, 1.0);
}

KsOutcome single_params_outcome(std::string test, double statistic, TailSide side,
                                const BoundParams& params, std::span<const double> alphas) {
  require_alphas(alphas);
  KsOutcome out;
  out.test = std::move(test);
  out.statistic = statistic;
  out.side = side;
  out.params = {params};
  out.p_upper_raw = p_value_upper_raw(params, side, statistic);
  out.p_upper = std::min(1.0, out.p_upper_raw);
  for (double a : alphas) out.critical.push_back({a, critical_statistic(params, side, a)});
  return out;
}

// Per-sample factor of the two-sample bound: probability that one empirical
// CDF strays more than eps/2 from the common expected CDF.
double half_distance_tail(double size, TailSide side, double eps) {
  const double half = eps / 2.0;
  if (side == TailSide::TwoSided) {
    const double z = std::sqrt(size) * half / denominator(size);
    return 2.0 * std::exp(-2.0 * z * z);
  }
  const double z = std::max(0.0, std::sqrt(size) * half - one_sided_shift(size));
  return std::exp(-2.0 * z * z);
}

// Smallest eps with two_sample_p_upper(eps) <= alpha, by bisection on the
// nonincreasing p-value bound.
double two_sample_critical(double nu, double xi, TailSide side, double alpha) {
  double lo = 0.0;
  double hi = 1.0;
  while (two_sample_p_upper(nu, xi, side, hi) > alpha) {
    lo = hi;
    hi *= 2.0;
  }
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    if (two_sample_p_upper(nu, xi, side, mid) > alpha) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

}  // namespace

double two_sample_p_upper(double nu, double xi, TailSide side, double eps) {
  if (!(nu > 1.0) || !(xi > 1.0)) {
    throw DomainError("two-sample bound needs both effective sizes > 1");
  }
  if (!(eps >= 0.0)) throw DomainError("distance must be >= 0");
  const double keep_f = std::max(0.0, 1.0 - half_distance_tail(nu, side, eps));
  const double keep_g = std::max(0.0, 1.0 - half_distance_tail(xi, side, eps));
  return std::clamp(1.0 - keep_f * keep_g, 0.0, 1.0);
}

KsOutcome one_sample_clustered(const ClusteredSample& sample, const ReferenceCdf& reference,
                               TailSide side, std::span<const double> alphas,
                               std::span<const double> extra_points) {
  const BoundParams params = effective_params(sample, "sample");
  const double d = sup_distance_reference(ecdf(sample), reference, side, extra_points);
  auto out = single_params_outcome("one-sample-clustered", d, side, params, alphas);
  if (sample.labels_inferred()) out.notes.emplace_back(kInferredNote);
  return out;
}

KsOutcome two_sample_clustered(const ClusteredSample& f, const ClusteredSample& g,
                               TailSide side, std::span<const double> alphas) {
  require_alphas(alphas);
  const BoundParams pf = effective_params(f, "first sample");
  const BoundParams pg = effective_params(g, "second sample");
  KsOutcome out;
  out.test = "two-sample-clustered";
  out.statistic = sup_distance_two_sample(ecdf(f), ecdf(g), side);
  out.side = side;
  out.params = {pf, pg};
  out.p_upper = two_sample_p_upper(pf.c(), pg.c(), side, out.statistic);
  out.p_upper_raw = out.p_upper;
  for (double a : alphas) {
    out.critical.push_back({a, two_sample_critical(pf.c(), pg.c(), side, a)});
  }
  if (f.labels_inferred() || g.labels_inferred()) out.notes.emplace_back(kInferredNote);
  return out;
}

KsOutcome lipschitz_two_sample(const TrajectoryPanel& f, const TrajectoryPanel& g,
                               TimeDomain domain, std::span<const double> alphas) {
  const auto interval = lipschitz_sup_interval(f, g);
  const double k = domain == TimeDomain::Continuous
                       ? f.k_lip()
                       : static_cast<double>(f.times().size());
  const BoundParams params = lipschitz_difference_params(f.unit_count(), k, domain);
  const bool continuous = domain == TimeDomain::Continuous;
  const double statistic = continuous ? interval.upper : interval.lower;
  auto out = single_params_outcome(continuous ? "lipschitz-two-sample" : "grid-two-sample",
                                   statistic, TailSide::TwoSided, params, alphas);
  out.statistic_lower = interval.lower;
  out.conservative = continuous;
  return out;
}

KsOutcome finite_theta_test(std::span<const ThetaStatistic> stats,
                            std::span<const RangeSpec> ranges, double c,
                            std::span<const double> alphas) {
  if (stats.empty()) throw ValidationError("need at least one statistic");
  if (stats.size() != ranges.size()) {
    throw ValidationError("need one range per statistic");
  }
  double d = 0.0;
  for (const auto& s : stats) {
    if (!std::isfinite(s.observed) || !std::isfinite(s.expected)) {
      throw ValidationError("statistics must be finite");
    }
    d = std::max(d, std::abs(s.observed - s.expected));
  }
  const double dv = downward_variation(
      downward::FiniteTheta{std::vector<RangeSpec>(ranges.begin(), ranges.end())});
  return single_params_outcome("finite-theta", d, TailSide::TwoSided, BoundParams(c, dv),
                               alphas);
}

}  // namespace clusterks
