#include "clusterks/montecarlo.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>
#include <thread>

#include "clusterks/empirical.hpp"
#include "clusterks/errors.hpp"

namespace clusterks {

namespace {

using u128 = unsigned __int128;

constexpr std::uint64_t kExactLimit = 64;

std::string format_short(double v) {
  std::string s = std::to_string(v);
  while (!s.empty() && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

std::vector<u128> binomial_counts(std::uint64_t n) {
  std::vector<u128> c(n + 1);
  c[0] = 1;
  for (std::uint64_t k = 1; k <= n; ++k) c[k] = c[k - 1] * (n - k + 1) / k;
  return c;
}

double u128_to_double(u128 v) {
  const auto hi = static_cast<std::uint64_t>(v >> 64);
  const auto lo = static_cast<std::uint64_t>(v);
  return std::ldexp(static_cast<double>(hi), 64) + static_cast<double>(lo);
}

// P(|2U - n| > 2 eps n) for U ~ Binomial(n, 1/2).
double binomial_half_deviation_tail(std::uint64_t n, double eps) {
  const auto pmf = binomial_half_pmf(n);
  const double limit = 2.0 * eps * static_cast<double>(n);
  long double tail = 0.0L;
  for (std::uint64_t u = 0; u <= n; ++u) {
    const double dev = std::abs(2.0 * static_cast<double>(u) - static_cast<double>(n));
    if (dev > limit) tail += pmf[u];
  }
  return static_cast<double>(tail);
}

// 1 - (1 - q)^m without cancellation.
double at_least_once(double q, std::uint64_t m) {
  if (q >= 1.0) return 1.0;
  return -std::expm1(static_cast<double>(m) * std::log1p(-q));
}

void require_positive(std::uint64_t v, const char* what) {
  if (v == 0) throw ValidationError(std::string(what) + " must be >= 1");
}

}  // namespace

std::size_t SimReport::violation_count() const {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [](const SimRow& r) { return r.violation; }));
}

SimRow make_row(std::string label, double eps, std::uint64_t hits, std::uint64_t trials,
                double bound, std::optional<double> exact, double sigmas) {
  SimRow row;
  row.label = std::move(label);
  row.eps = eps;
  row.empirical = static_cast<double>(hits) / static_cast<double>(trials);
  row.bound = bound;
  row.std_error = std::sqrt(row.empirical * (1.0 - row.empirical) / static_cast<double>(trials));
  row.violation = row.empirical > bound + sigmas * row.std_error;
  row.exact = exact;
  return row;
}

std::vector<double> binomial_half_pmf(std::uint64_t n) {
  std::vector<double> pmf(n + 1);
  if (n <= kExactLimit) {
    const auto counts = binomial_counts(n);
    for (std::uint64_t k = 0; k <= n; ++k) {
      pmf[k] = std::ldexp(u128_to_double(counts[k]), -static_cast<int>(n));
    }
    return pmf;
  }
  const long double log_total = static_cast<long double>(n) * std::log(2.0L);
  for (std::uint64_t k = 0; k <= n; ++k) {
    const long double log_c = std::lgamma(static_cast<long double>(n) + 1.0L) -
                              std::lgamma(static_cast<long double>(k) + 1.0L) -
                              std::lgamma(static_cast<long double>(n - k) + 1.0L);
    pmf[k] = static_cast<double>(std::exp(log_c - log_total));
  }
  return pmf;
}

double binomial_half_cdf(std::uint64_t n, std::int64_t k) {
  if (k < 0) return 0.0;
  if (static_cast<std::uint64_t>(k) >= n) return 1.0;
  if (n <= kExactLimit) {
    const auto counts = binomial_counts(n);
    u128 acc = 0;
    for (std::int64_t j = 0; j <= k; ++j) acc += counts[static_cast<std::size_t>(j)];
    return std::ldexp(u128_to_double(acc), -static_cast<int>(n));
  }
  const auto pmf = binomial_half_pmf(n);
  long double acc = 0.0L;
  for (std::int64_t j = 0; j <= k; ++j) acc += pmf[static_cast<std::size_t>(j)];
  return static_cast<double>(acc);
}

BinomialHalfSampler::BinomialHalfSampler(std::uint64_t n) : n_(n) {
  require_positive(n, "binomial trial count n");
  if (n <= kExactLimit) {
    const auto counts = binomial_counts(n);
    cumulative_.resize(n + 1);
    u128 acc = 0;
    for (std::uint64_t k = 0; k <= n; ++k) {
      acc += counts[k];
      cumulative_[k] = acc;
    }
  }
}

std::uint64_t BinomialHalfSampler::operator()(CounterRng& rng) const {
  if (n_ <= kExactLimit) {
    // Uniform integer v in [0, 2^n); the draw is the smallest k with
    // cumulative count > v.
    const std::uint64_t r = rng();
    const u128 v = n_ == 64 ? u128{r} : u128{r >> (64 - n_)};
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), v);
    return static_cast<std::uint64_t>(it - cumulative_.begin());
  }
  std::uint64_t total = 0;
  std::uint64_t remaining = n_;
  while (remaining >= 64) {
    total += static_cast<std::uint64_t>(std::popcount(rng()));
    remaining -= 64;
  }
  if (remaining > 0) {
    total += static_cast<std::uint64_t>(std::popcount(rng() >> (64 - remaining)));
  }
  return total;
}

namespace {

// max_j |2 U_j - n| over m iid draws; also reports min_j U_j.
struct GridDraw {
  std::uint64_t max_abs_dev;
  std::uint64_t min_count;
};

GridDraw draw_grid(const BinomialHalfSampler& sampler, std::uint64_t m, CounterRng& rng) {
  const std::uint64_t n = sampler.n();
  GridDraw out{0, n};
  for (std::uint64_t j = 0; j < m; ++j) {
    const std::uint64_t u = sampler(rng);
    const std::uint64_t dev = 2 * u >= n ? 2 * u - n : n - 2 * u;
    out.max_abs_dev = std::max(out.max_abs_dev, dev);
    out.min_count = std::min(out.min_count, u);
  }
  return out;
}

double grid_statistic(std::uint64_t max_abs_dev, std::uint64_t n, std::uint64_t m) {
  return static_cast<double>(max_abs_dev) /
         (2.0 * static_cast<double>(n) * static_cast<double>(m));
}

}  // namespace

double binomial_grid_sup(std::uint64_t n, std::uint64_t m, CounterRng& rng) {
  require_positive(n, "n");
  require_positive(m, "m");
  const BinomialHalfSampler sampler(n);
  return grid_statistic(draw_grid(sampler, m, rng).max_abs_dev, n, m);
}

double binomial_grid_sup(std::uint64_t n, std::uint64_t m, std::uint64_t seed) {
  CounterRng rng(seed, static_cast<std::uint64_t>(SimStream::Grid), 0);
  return binomial_grid_sup(n, m, rng);
}

std::vector<std::uint64_t> count_over_trials(
    std::uint64_t trials, std::size_t counters, unsigned threads,
    const std::function<void(std::uint64_t, std::span<std::uint64_t>)>& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const std::uint64_t workers = std::min<std::uint64_t>(threads, std::max<std::uint64_t>(trials, 1));
  std::vector<std::vector<std::uint64_t>> partial(workers,
                                                  std::vector<std::uint64_t>(counters, 0));
  auto run_block = [&](std::uint64_t w) {
    const std::uint64_t begin = trials * w / workers;
    const std::uint64_t end = trials * (w + 1) / workers;
    for (std::uint64_t t = begin; t < end; ++t) body(t, partial[w]);
  };
  if (workers == 1) {
    run_block(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::uint64_t w = 0; w < workers; ++w) pool.emplace_back(run_block, w);
  }
  std::vector<std::uint64_t> total(counters, 0);
  for (const auto& p : partial) {
    for (std::size_t i = 0; i < counters; ++i) total[i] += p[i];
  }
  return total;
}

std::vector<std::pair<double, double>> binomial_grid_distribution(
    std::uint64_t n, std::uint64_t m, std::uint64_t trials, std::uint64_t seed,
    unsigned threads) {
  require_positive(n, "n");
  require_positive(m, "m");
  require_positive(trials, "trials");
  const BinomialHalfSampler sampler(n);
  const auto counts = count_over_trials(
      trials, n + 1, threads, [&](std::uint64_t trial, std::span<std::uint64_t> c) {
        CounterRng rng(seed, static_cast<std::uint64_t>(SimStream::Grid), trial);
        ++c[draw_grid(sampler, m, rng).max_abs_dev];
      });
  std::vector<std::pair<double, double>> out;
  for (std::uint64_t dev = 0; dev <= n; ++dev) {
    if (counts[dev] == 0) continue;
    out.emplace_back(grid_statistic(dev, n, m),
                     static_cast<double>(counts[dev]) / static_cast<double>(trials));
  }
  return out;
}

SimReport conjecture_refutation_experiment(std::uint64_t n, std::span<const std::uint64_t> m_list,
                                           double eps, std::uint64_t trials,
                                           std::uint64_t seed, unsigned threads) {
  require_positive(n, "n");
  require_positive(trials, "trials");
  if (!(eps > 0.0 && eps < 0.5)) {
    throw DomainError("refutation threshold eps must lie in (0, 1/2), got " +
                      std::to_string(eps));
  }
  if (m_list.empty()) throw ValidationError("need at least one grid size m");

  SimReport report;
  report.experiment = "conjecture-refutation";
  report.statistic = "max_j |U_j/n - 1/2| > eps, U_j iid Binomial(n, 1/2); bound: conjectured 2exp(-2 n eps^2)";
  report.config.n = n;
  report.config.m.assign(m_list.begin(), m_list.end());
  report.config.trials = trials;
  report.config.seed = seed;
  report.config.eps_grid = {eps};

  const BinomialHalfSampler sampler(n);
  const double limit = 2.0 * eps * static_cast<double>(n);
  const double single = binomial_half_deviation_tail(n, eps);
  const double naive = std::min(1.0, tail_bound_raw(TailSide::TwoSided,
                                                    eps * std::sqrt(static_cast<double>(n))));
  report.metadata.emplace_back("single_column_probability", single);
  for (std::size_t idx = 0; idx < m_list.size(); ++idx) {
    const std::uint64_t m = m_list[idx];
    require_positive(m, "m");
    const std::uint64_t stream = static_cast<std::uint64_t>(SimStream::Refutation) + (idx << 8);
    const auto hits = count_over_trials(
        trials, 1, threads, [&](std::uint64_t trial, std::span<std::uint64_t> c) {
          CounterRng rng(seed, stream, trial);
          if (static_cast<double>(draw_grid(sampler, m, rng).max_abs_dev) > limit) ++c[0];
        });
    report.rows.push_back(make_row("m=" + std::to_string(m), eps, hits[0], trials, naive,
                                   at_least_once(single, m), report.violation_sigmas));
  }
  return report;
}

SimReport iid_coverage(std::uint64_t n, std::uint64_t trials, std::uint64_t seed,
                       std::span<const double> eps_grid, TailSide side, unsigned threads) {
  if (n < 2) throw DomainError("coverage needs n >= 2");
  if (trials < 100) throw ValidationError("coverage needs at least 100 trials");
  if (eps_grid.empty()) throw ValidationError("need at least one eps value");
  if (!std::is_sorted(eps_grid.begin(), eps_grid.end()) || eps_grid.front() < 0.0) {
    throw ValidationError("eps grid must be nonnegative and sorted ascending");
  }

  SimReport report;
  report.experiment = "iid-coverage";
  report.statistic = side == TailSide::TwoSided
                         ? "deflated: sqrt(n) D / L(n); massart: sqrt(n) D"
                         : "deflated: sqrt(n) D - S(n); massart: sqrt(n) D";
  report.config.n = n;
  report.config.trials = trials;
  report.config.seed = seed;
  report.config.eps_grid.assign(eps_grid.begin(), eps_grid.end());
  report.config.side = side;

  const BoundParams params(static_cast<double>(n), 1.0);
  const double root_n = std::sqrt(static_cast<double>(n));
  const ReferenceCdf uniform = [](double r) { return std::clamp(r, 0.0, 1.0); };
  const std::size_t k = eps_grid.size();
  const auto counts = count_over_trials(
      trials, 2 * k, threads, [&](std::uint64_t trial, std::span<std::uint64_t> c) {
        CounterRng rng(seed, static_cast<std::uint64_t>(SimStream::Coverage), trial);
        std::vector<double> draws(n);
        for (auto& v : draws) v = rng.uniform01();
        const double d = sup_distance_reference(ecdf(draws), uniform, side);
        const double deflated = normalized_statistic(params, side, d);
        const double raw = root_n * d;
        for (std::size_t i = 0; i < k; ++i) {
          if (deflated > eps_grid[i]) ++c[i];
          if (raw > eps_grid[i]) ++c[k + i];
        }
      });
  for (std::size_t i = 0; i < k; ++i) {
    report.rows.push_back(make_row("deflated", eps_grid[i], counts[i], trials,
                                   tail_bound(params, side, eps_grid[i]), std::nullopt,
                                   report.violation_sigmas));
  }
  for (std::size_t i = 0; i < k; ++i) {
    report.rows.push_back(make_row("massart", eps_grid[i], counts[k + i], trials,
                                   tail_bound(params, side, eps_grid[i]), std::nullopt,
                                   report.violation_sigmas));
  }
  return report;
}

SimReport sharpness_experiment(std::uint64_t n, double l_target, std::uint64_t trials,
                               std::uint64_t seed, unsigned threads) {
  require_positive(n, "n");
  require_positive(trials, "trials");
  if (!(l_target > 0.0 && l_target < 0.5)) {
    throw DomainError("L target must lie in (0, 1/2)");
  }
  const auto k = static_cast<std::int64_t>(std::llround(l_target * static_cast<double>(n)));
  if (k <= 0 || 2 * static_cast<std::uint64_t>(k) >= n) {
    throw DomainError("k(n) = round(L n) = " + std::to_string(k) +
                      " must satisfy 0 < k < n/2");
  }

  SimReport report;
  report.experiment = "sharpness";
  report.statistic =
      "T = max_j |U_j/n - 1/2| over m_n columns; rows delta: P(T > (1+delta)(1/2 - k/n)) "
      "against the bound 2exp(-2 (sqrt(n) t / L(n m^2))^2)";

  const double lower_tail = binomial_half_cdf(n, k);
  std::uint64_t m_n;
  if (n <= kExactLimit) {
    // ceil(2^n / count) in integers.
    const auto counts = binomial_counts(n);
    u128 acc = 0;
    for (std::int64_t j = 0; j <= k; ++j) acc += counts[static_cast<std::size_t>(j)];
    const u128 total = u128{1} << n;
    const u128 m = (total + acc - 1) / acc;
    m_n = m > kMaxSharpnessGrid ? kMaxSharpnessGrid + 1 : static_cast<std::uint64_t>(m);
  } else {
    const double m = std::ceil(1.0 / lower_tail);
    m_n = m > static_cast<double>(kMaxSharpnessGrid) ? kMaxSharpnessGrid + 1
                                                     : static_cast<std::uint64_t>(m);
  }
  if (m_n > kMaxSharpnessGrid) {
    report.notes.push_back("m_n exceeds " + std::to_string(kMaxSharpnessGrid) +
                           " and was truncated to that value");
    m_n = kMaxSharpnessGrid;
  }

  report.config.n = n;
  report.config.m = {m_n};
  report.config.trials = trials;
  report.config.seed = seed;
  report.metadata = {{"k", static_cast<double>(k)},
                     {"l_target", l_target},
                     {"lower_tail_probability", lower_tail},
                     {"m_n", static_cast<double>(m_n)}};

  const double gap = 0.5 - static_cast<double>(k) / static_cast<double>(n);
  constexpr double kDeltas[] = {-0.1, 0.0, 0.1};
  std::vector<double> thresholds;
  for (double delta : kDeltas) thresholds.push_back((1.0 + delta) * gap);
  report.config.eps_grid = thresholds;

  const BinomialHalfSampler sampler(n);
  const double nd = static_cast<double>(n);
  const auto counts = count_over_trials(
      trials, 1 + thresholds.size(), threads,
      [&](std::uint64_t trial, std::span<std::uint64_t> c) {
        CounterRng rng(seed, static_cast<std::uint64_t>(SimStream::Sharpness), trial);
        const auto draw = draw_grid(sampler, m_n, rng);
        if (draw.min_count <= static_cast<std::uint64_t>(k)) ++c[0];
        for (std::size_t i = 0; i < thresholds.size(); ++i) {
          if (static_cast<double>(draw.max_abs_dev) > 2.0 * thresholds[i] * nd) ++c[1 + i];
        }
      });

  const double exact_min = at_least_once(lower_tail, m_n);
  report.rows.push_back(make_row("min_j U_j <= k", static_cast<double>(k) / nd, counts[0],
                                 trials, exact_min, exact_min, report.violation_sigmas));
  const double x = nd * static_cast<double>(m_n) * static_cast<double>(m_n);
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    const double t = thresholds[i];
    const double z = std::sqrt(nd) * t / denominator(x);
    const double bound = std::min(1.0, 2.0 * std::exp(-2.0 * z * z));
    const double exact = at_least_once(binomial_half_deviation_tail(n, t), m_n);
    report.rows.push_back(make_row("delta=" + format_short(kDeltas[i]), t, counts[1 + i],
                                   trials, bound, exact, report.violation_sigmas));
  }
  return report;
}

}  // namespace clusterks
