#include <doctest.h>

#include <random>
#include <vector>

#include "clusterks/coefficients.hpp"
#include "clusterks/errors.hpp"

using namespace clusterks;

TEST_CASE("McDiarmid coefficient from ranges") {
  std::vector<RangeSpec> four(4, RangeSpec(0.0, 1.0));
  CHECK(mcdiarmid_from_ranges(four) == 4.0);
  std::vector<RangeSpec> mixed{RangeSpec(0.0, 1.0), RangeSpec(0.0, 3.0)};
  CHECK(mcdiarmid_from_ranges(mixed) == doctest::Approx(0.4));
  std::vector<RangeSpec> seven(7, RangeSpec(0.25, 0.75));
  CHECK(mcdiarmid_from_ranges(seven) == doctest::Approx(28.0));
  CHECK_THROWS_AS(mcdiarmid_from_ranges({}), ValidationError);
  CHECK_THROWS_AS(RangeSpec(1.0, 1.0), ValidationError);
  CHECK_THROWS_AS(RangeSpec(2.0, 1.0), ValidationError);
}

TEST_CASE("cluster statistics") {
  const ClusterSpec equal({5, 5, 5, 5});
  CHECK(equal.effective_size() == 4.0);
  CHECK(mcdiarmid_from_clusters(equal) == 4.0);

  const ClusterSpec uneven({1, 3});
  CHECK(uneven.mean_size() == 2.0);
  CHECK(uneven.size_variance() == 1.0);
  CHECK(uneven.effective_size() == doctest::Approx(1.6));
  CHECK(mcdiarmid_from_clusters(uneven) == doctest::Approx(1.6));

  const ClusterSpec three({2, 3, 5});
  CHECK(mcdiarmid_from_clusters(three) == doctest::Approx(100.0 / 38.0).epsilon(1e-14));
  CHECK(three.effective_size() == doctest::Approx(100.0 / 38.0).epsilon(1e-14));

  CHECK_THROWS_AS(ClusterSpec({}), ValidationError);
  CHECK_THROWS_AS(ClusterSpec({3, 0, 2}), ValidationError);
}

TEST_CASE("effective size identity and bounds, fuzzed") {
  std::mt19937_64 gen(77);
  std::uniform_int_distribution<std::size_t> count_dist(1, 60);
  std::uniform_int_distribution<std::size_t> size_dist(1, 500);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<std::size_t> sizes(count_dist(gen));
    for (auto& s : sizes) s = size_dist(gen);
    const ClusterSpec spec(sizes);
    const double nu = spec.effective_size();
    const double c = mcdiarmid_from_clusters(spec);
    CHECK(std::abs(c - nu) <= 1e-12 * nu);
    CHECK(nu >= 1.0 - 1e-12);
    CHECK(nu <= static_cast<double>(sizes.size()) + 1e-9);
    const bool all_equal = std::all_of(sizes.begin(), sizes.end(),
                                       [&](std::size_t s) { return s == sizes.front(); });
    if (all_equal) {
      CHECK(nu == static_cast<double>(sizes.size()));
    } else {
      CHECK(nu < static_cast<double>(sizes.size()));
    }

    // Merging two clusters never increases C.
    if (sizes.size() >= 2) {
      std::uniform_int_distribution<std::size_t> pick(0, sizes.size() - 1);
      const std::size_t i = pick(gen);
      std::size_t j = pick(gen);
      if (j == i) j = (i + 1) % sizes.size();
      auto merged = sizes;
      merged[i] += merged[j];
      merged.erase(merged.begin() + static_cast<std::ptrdiff_t>(j));
      CHECK(mcdiarmid_from_clusters(ClusterSpec(merged)) <= c * (1 + 1e-12));
    }
  }
}

TEST_CASE("downward variation cases") {
  using namespace downward;
  CHECK(downward_variation(MonotoneReal{RangeSpec(0.0, 1.0)}) == 1.0);
  CHECK(downward_variation(FiniteTheta{{RangeSpec(0, 1), RangeSpec(2, 3), RangeSpec(-1, 0)}}) ==
        9.0);
  CHECK(downward_variation(LipschitzOneSided{RangeSpec(-1.0, 1.0), 2.0}) == 16.0);
  CHECK(downward_variation(LipschitzDifferentiable{RangeSpec(0.0, 1.0), 0.5}) == 2.25);
  CHECK_THROWS_AS(downward_variation(LipschitzOneSided{RangeSpec(0.0, 1.0), -1.0}),
                  ValidationError);
  CHECK_THROWS_AS(downward_variation(FiniteTheta{}), ValidationError);
}

TEST_CASE("downward variation is scale covariant") {
  using namespace downward;
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> w(0.01, 10.0);
  for (int i = 0; i < 200; ++i) {
    const double s = w(gen);
    std::vector<RangeSpec> base;
    std::vector<RangeSpec> scaled;
    for (int k = 0; k < 4; ++k) {
      const double lo = w(gen);
      const double width = w(gen);
      base.emplace_back(lo, lo + width);
      scaled.emplace_back(lo * s, lo * s + width * s);
    }
    CHECK(downward_variation(FiniteTheta{scaled}) ==
          doctest::Approx(s * s * downward_variation(FiniteTheta{base})).epsilon(1e-12));
    CHECK(downward_variation(MonotoneReal{scaled[0]}) ==
          doctest::Approx(s * s * downward_variation(MonotoneReal{base[0]})).epsilon(1e-12));
  }
}

TEST_CASE("Lipschitz difference parameters") {
  const auto p = lipschitz_difference_params(100, 0.0);
  CHECK(p.c() == 25.0);
  CHECK(p.d() == 4.0);
  CHECK(p.product() == 100.0);

  const auto q = lipschitz_difference_params(4, 1.0);
  CHECK(q.c() == 1.0);
  CHECK(q.d() == 16.0);

  const auto grid = lipschitz_difference_params(100, 5.0, TimeDomain::FiniteGrid);
  CHECK(grid.c() == 25.0);
  CHECK(grid.product() == 2500.0);

  // n = 1, K = 0 gives c*d = 1: the bound is inapplicable.
  CHECK_THROWS_AS(lipschitz_difference_params(1, 0.0), DomainError);
  CHECK_THROWS_AS(lipschitz_difference_params(0, 1.0), ValidationError);
}
