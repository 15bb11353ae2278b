#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "clusterks/bounds.hpp"
#include "clusterks/coefficients.hpp"
#include "clusterks/empirical.hpp"

namespace clusterks {

inline const std::vector<double> kDefaultAlphas{0.01, 0.05, 0.1};

struct CriticalValue {
  double alpha;
  double value;

  friend bool operator==(const CriticalValue&, const CriticalValue&) = default;
};

// Outcome of a supremum-distance test. `params` holds one coefficient pair
// for one-sample tests and one per sample for two-sample tests.
struct KsOutcome {
  std::string test;
  double statistic = 0.0;
  // Grid maximum for Lipschitz tests, where `statistic` is the certified
  // upper end of the supremum.
  std::optional<double> statistic_lower;
  TailSide side = TailSide::TwoSided;
  std::vector<BoundParams> params;
  double p_upper = 1.0;
  double p_upper_raw = 1.0;
  std::vector<CriticalValue> critical;
  bool conservative = false;
  std::vector<std::string> notes;

  bool rejects(double alpha) const { return p_upper < alpha; }

  friend bool operator==(const KsOutcome&, const KsOutcome&) = default;
};

// Clustered one-sample test against a reference CDF: C = effective size,
// D = 1 (monotone indicator family).
KsOutcome one_sample_clustered(const ClusteredSample& sample, const ReferenceCdf& reference,
                               TailSide side,
                               std::span<const double> alphas = kDefaultAlphas,
                               std::span<const double> extra_points = {});

// Two independent clustered samples under H0: equal expected CDFs.
KsOutcome two_sample_clustered(const ClusteredSample& f, const ClusteredSample& g,
                               TailSide side,
                               std::span<const double> alphas = kDefaultAlphas);

// p-value bound of the two-sample test for effective sizes nu and xi at an
// observed distance eps.
double two_sample_p_upper(double nu, double xi, TailSide side, double eps);

// Two-sided test for averages of n unit-level Lipschitz paths. With
// TimeDomain::FiniteGrid the sup is only over the grid points and no slack is
// added.
KsOutcome lipschitz_two_sample(const TrajectoryPanel& f, const TrajectoryPanel& g,
                               TimeDomain domain = TimeDomain::Continuous,
                               std::span<const double> alphas = kDefaultAlphas);

struct ThetaStatistic {
  double observed;
  double expected;
};

// Finite parameter set: D = (sum of range widths)^2, C supplied by caller.
KsOutcome finite_theta_test(std::span<const ThetaStatistic> stats,
                            std::span<const RangeSpec> ranges, double c,
                            std::span<const double> alphas = kDefaultAlphas);

}  // namespace clusterks
