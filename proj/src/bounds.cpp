#include "clusterks/bounds.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "clusterks/errors.hpp"
#include "clusterks/golden_section.hpp"

namespace clusterks {

namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr double kPi = std::numbers::pi;

void require_above_one(double x, const char* what) {
  if (!(x > 1.0) || !std::isfinite(x)) {
    throw DomainError(std::string(what) + ": argument must be a finite value > 1, got " +
                      std::to_string(x));
  }
}

void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError("alpha must lie in (0, 1), got " + std::to_string(alpha));
  }
}

}  // namespace

std::string_view to_string(TailSide side) {
  switch (side) {
    case TailSide::TwoSided:
      return "two";
    case TailSide::PlusSide:
      return "plus";
    case TailSide::MinusSide:
      return "minus";
  }
  return "two";
}

TailSide parse_side(std::string_view text) {
  if (text == "two") return TailSide::TwoSided;
  if (text == "plus") return TailSide::PlusSide;
  if (text == "minus") return TailSide::MinusSide;
  throw ValidationError("unknown side '" + std::string(text) +
                        "' (expected two, plus or minus)");
}

BoundParams::BoundParams(double c, double d) : c_(c), d_(d) {
  if (!(c > 0.0) || !(d > 0.0) || !std::isfinite(c) || !std::isfinite(d)) {
    throw DomainError("bound coefficients must be finite and positive (c=" +
                      std::to_string(c) + ", d=" + std::to_string(d) + ")");
  }
  if (!(c * d > 1.0)) {
    throw DomainError("bound requires c*d > 1, got c*d=" + std::to_string(c * d));
  }
}

double residual(double x) {
  require_above_one(x, "residual");
  const double root_ln = std::sqrt(std::log(x));
  const double quarter_root = std::pow(kPi / 2.0, 0.25);
  return std::sqrt(2.0 / kLn2) * std::log(quarter_root * (2.0 * root_ln + 1.0)) /
         root_ln;
}

double residual_star(double x) { return std::sqrt(kLn2 / 2.0) * residual(x); }

double denominator(double x) {
  const double r = residual(x);
  return 1.0 + std::sqrt(std::log(x) / (2.0 * kLn2)) + r;
}

double one_sided_shift(double x) {
  const double r = residual_star(x);
  return std::sqrt(std::log(x)) + r;
}

double tail_bound_raw(TailSide side, double eps) {
  if (!(eps >= 0.0)) {
    throw DomainError("eps must be >= 0, got " + std::to_string(eps));
  }
  const double tail = std::exp(-2.0 * eps * eps);
  return side == TailSide::TwoSided ? 2.0 * tail : tail;
}

double tail_bound(const BoundParams& /*params*/, TailSide side, double eps) {
  return std::min(1.0, tail_bound_raw(side, eps));
}

double normalized_statistic(const BoundParams& params, TailSide side,
                            double sup_distance) {
  if (!(sup_distance >= 0.0)) {
    throw DomainError("sup distance must be >= 0, got " +
                      std::to_string(sup_distance));
  }
  const double x = params.product();
  const double scaled = std::sqrt(params.c()) * sup_distance;
  if (side == TailSide::TwoSided) return scaled / denominator(x);
  return scaled - one_sided_shift(x);
}

double p_value_upper_raw(const BoundParams& params, TailSide side,
                         double sup_distance) {
  const double eps = normalized_statistic(params, side, sup_distance);
  return tail_bound_raw(side, std::max(0.0, eps));
}

double p_value_upper(const BoundParams& params, TailSide side,
                     double sup_distance) {
  return std::min(1.0, p_value_upper_raw(params, side, sup_distance));
}

double critical_statistic(const BoundParams& params, TailSide side,
                          double alpha) {
  require_alpha(alpha);
  const double x = params.product();
  const double root_c = std::sqrt(params.c());
  if (side == TailSide::TwoSided) {
    const double eps = std::sqrt(std::log(2.0 / alpha) / 2.0);
    return eps * denominator(x) / root_c;
  }
  const double eps = std::sqrt(std::log(1.0 / alpha) / 2.0);
  return (eps + one_sided_shift(x)) / root_c;
}

double entropy_objective(double x, double p) {
  require_above_one(x, "entropy_objective");
  if (!(p > 0.0) || !std::isfinite(p)) {
    throw DomainError("entropy exponent p must be finite and > 0");
  }
  const double two_3_2 = std::pow(2.0, 1.5);
  const double erf_term = 1.0 + std::erf(p / two_3_2);
  const double half_ln_x = 0.5 * std::log(x);
  if (p * p / 8.0 <= 500.0) {
    const double integral =
        std::sqrt(kPi) * std::exp(p * p / 8.0) * p * p * erf_term / two_3_2;
    return std::log1p(std::exp(half_ln_x) * (p + integral)) / p;
  }
  // e^{p^2/8} overflows; assemble ln(sqrt(x) (p + I) + 1) from logarithms.
  const double log_integral = 0.5 * std::log(kPi) + p * p / 8.0 + 2.0 * std::log(p) +
                              std::log(erf_term) - 1.5 * kLn2;
  const double log_inner =
      half_ln_x + log_integral + std::log1p(p * std::exp(-log_integral));
  return (log_inner + std::log1p(std::exp(-log_inner))) / p;
}

EntropyEval entropy_exact_expfamily(double x) {
  require_above_one(x, "entropy_exact_expfamily");
  constexpr std::size_t kScanPoints = 64;
  const double lo = 1e-3;
  const double hi = std::max(6.0 * std::sqrt(std::log(x)), 2.0 * lo);

  std::array<double, kScanPoints> grid{};
  const double log_step = std::log(hi / lo) / static_cast<double>(kScanPoints - 1);
  for (std::size_t i = 0; i < kScanPoints; ++i) {
    grid[i] = lo * std::exp(log_step * static_cast<double>(i));
  }
  grid.back() = hi;

  std::size_t best = 0;
  double best_value = entropy_objective(x, grid[0]);
  for (std::size_t i = 1; i < kScanPoints; ++i) {
    const double v = entropy_objective(x, grid[i]);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  if (best == kScanPoints - 1) {
    throw ConvergenceError("entropy objective minimum not bracketed in [" +
                           std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }

  // When best == 0 the infimum is approached as p -> 0+ (where Phi -> sqrt(x));
  // the refinement then settles on the lower edge of the search interval.
  const double a = best == 0 ? lo : grid[best - 1];
  const double b = grid[best + 1];
  const auto refined = golden_section_minimize(
      [x](double p) { return entropy_objective(x, p); }, a, b, 1e-8);
  double p_star = refined.argmin;
  double phi = refined.value;
  if (best_value < phi) {
    p_star = grid[best];
    phi = best_value;
  }

  return EntropyEval{x, p_star, 1.0 + std::sqrt(kLn2 / 2.0) * phi, denominator(x)};
}

}  // namespace clusterks
