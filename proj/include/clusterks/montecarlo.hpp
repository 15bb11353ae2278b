#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "clusterks/bounds.hpp"
#include "clusterks/rng.hpp"

namespace clusterks {

// RNG stream identifiers; one per experiment so reports never share draws.
enum class SimStream : std::uint64_t { Grid = 1, Coverage = 2, Sharpness = 3, Refutation = 4 };

struct SimConfig {
  std::uint64_t n = 1;
  std::vector<std::uint64_t> m;  // grid sizes (binomial experiments)
  std::uint64_t trials = 1;
  std::uint64_t seed = 0;
  std::vector<double> eps_grid;
  TailSide side = TailSide::TwoSided;

  friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

struct SimRow {
  std::string label;
  double eps = 0.0;
  double empirical = 0.0;
  double bound = 1.0;
  double std_error = 0.0;
  bool violation = false;
  std::optional<double> exact;  // exact probability when computable

  friend bool operator==(const SimRow&, const SimRow&) = default;
};

struct SimReport {
  std::string experiment;
  std::string statistic;
  SimConfig config;
  double violation_sigmas = 3.0;
  std::vector<std::pair<std::string, double>> metadata;
  std::vector<std::string> notes;
  std::vector<SimRow> rows;

  std::size_t violation_count() const;
  friend bool operator==(const SimReport&, const SimReport&) = default;
};

// Builds a row from an exceedance count; violation iff
// empirical > bound + sigmas * stderr with stderr = sqrt(p (1 - p) / trials).
SimRow make_row(std::string label, double eps, std::uint64_t hits, std::uint64_t trials,
                double bound, std::optional<double> exact, double sigmas);

// Exact Binomial(n, 1/2) probabilities. Integer arithmetic for n <= 64.
std::vector<double> binomial_half_pmf(std::uint64_t n);
double binomial_half_cdf(std::uint64_t n, std::int64_t k);

// Binomial(n, 1/2) sampler. For n <= 64 this is exact inversion of the
// integer CDF with an n-bit uniform integer; above that it counts n fair bits.
class BinomialHalfSampler {
 public:
  explicit BinomialHalfSampler(std::uint64_t n);

  std::uint64_t operator()(CounterRng& rng) const;
  std::uint64_t n() const noexcept { return n_; }

 private:
  std::uint64_t n_;
  std::vector<unsigned __int128> cumulative_;  // counts out of 2^n, n <= 64
};

// One draw of the counterexample statistic max_j |U_j - n/2| / (n m) with
// U_0, ..., U_{m-1} iid Binomial(n, 1/2).
double binomial_grid_sup(std::uint64_t n, std::uint64_t m, CounterRng& rng);
double binomial_grid_sup(std::uint64_t n, std::uint64_t m, std::uint64_t seed);

// Empirical distribution of binomial_grid_sup over `trials` draws; returns
// (value, frequency) pairs sorted by value.
std::vector<std::pair<double, double>> binomial_grid_distribution(
    std::uint64_t n, std::uint64_t m, std::uint64_t trials, std::uint64_t seed,
    unsigned threads = 0);

// P(max_j |U_j/n - 1/2| > eps) for each m, against the conjectured
// sub-Gaussian bound 2 exp(-2 n eps^2) that the counterexample breaks.
SimReport conjecture_refutation_experiment(std::uint64_t n, std::span<const std::uint64_t> m_list,
                                           double eps, std::uint64_t trials,
                                           std::uint64_t seed, unsigned threads = 0);

// Coverage of the deflated sup statistic on iid uniform samples, with the
// undeflated sqrt(n) * D statistic reported alongside for comparison.
SimReport iid_coverage(std::uint64_t n, std::uint64_t trials, std::uint64_t seed,
                       std::span<const double> eps_grid, TailSide side,
                       unsigned threads = 0);

inline constexpr std::uint64_t kMaxSharpnessGrid = 10'000'000;

// Fixed-n slice of the sharpness construction: k = round(l_target * n),
// m_n = ceil(1 / P(Bin(n, 1/2) <= k)).
SimReport sharpness_experiment(std::uint64_t n, double l_target, std::uint64_t trials,
                               std::uint64_t seed, unsigned threads = 0);

// Runs body(trial, counts) for every trial, split across threads, and sums the
// per-trial counters. The result does not depend on the thread count.
std::vector<std::uint64_t> count_over_trials(
    std::uint64_t trials, std::size_t counters, unsigned threads,
    const std::function<void(std::uint64_t, std::span<std::uint64_t>)>& body);

}  // namespace clusterks
