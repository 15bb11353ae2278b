#pragma once

#include <string_view>

namespace clusterks {

enum class TailSide { TwoSided, PlusSide, MinusSide };

std::string_view to_string(TailSide side);
// Accepts "two", "plus", "minus" (the CLI spelling).
TailSide parse_side(std::string_view text);

// McDiarmid coefficient C and downward-variation coefficient D of a
// randomized function. Every bound is evaluated at the product C*D, which
// must exceed 1.
class BoundParams {
 public:
  BoundParams(double c, double d);

  double c() const noexcept { return c_; }
  double d() const noexcept { return d_; }
  double product() const noexcept { return c_ * d_; }

  friend bool operator==(const BoundParams&, const BoundParams&) = default;

 private:
  double c_;
  double d_;
};

// R(x) = sqrt(2/ln 2) * ln((pi/2)^(1/4) * (2 sqrt(ln x) + 1)) / sqrt(ln x).
double residual(double x);

// R*(x) = sqrt(ln 2 / 2) * R(x).
double residual_star(double x);

// L(x) = 1 + sqrt(log4 x) + R(x), the deflation of the two-sided statistic.
double denominator(double x);

// S(x) = sqrt(ln x) + R*(x), the shift of the one-sided statistics.
double one_sided_shift(double x);

// Upper bound on the probability that the normalized statistic exceeds eps:
// 2 exp(-2 eps^2) for TwoSided, exp(-2 eps^2) for the one-sided variants.
// The two-sided statistic is sqrt(C) / L(C*D) * sup|F - EF|; the one-sided
// ones are sqrt(C) * sup(F - EF)^(+/-) - S(C*D).
double tail_bound_raw(TailSide side, double eps);
double tail_bound(const BoundParams& params, TailSide side, double eps);

// Maps an observed supremum distance to the eps the theorems are stated in.
// One-sided values may be negative, meaning the shift is not yet exhausted.
double normalized_statistic(const BoundParams& params, TailSide side,
                            double sup_distance);

// p-value upper bound for an observed supremum distance (capped at 1).
double p_value_upper(const BoundParams& params, TailSide side,
                     double sup_distance);
double p_value_upper_raw(const BoundParams& params, TailSide side,
                         double sup_distance);

// Smallest supremum distance at which the p-value bound reaches alpha.
double critical_statistic(const BoundParams& params, TailSide side,
                          double alpha);

// Result of minimizing the entropy objective over the exponential family
// H(y) = e^{p y} - 1.
struct EntropyEval {
  double x;
  double p_star;
  double value;        // 1 + sqrt(ln 2 / 2) * min_p Phi(x, p)
  double upper_bound;  // 1 + sqrt(log4 x) + R(x)
};

// Phi(x, p) = ln(sqrt(x) * (p + I(p)) + 1) / p with
// I(p) = sqrt(pi) e^{p^2/8} p^2 (1 + erf(p / 2^{3/2})) / 2^{3/2}.
double entropy_objective(double x, double p);

EntropyEval entropy_exact_expfamily(double x);

}  // namespace clusterks
