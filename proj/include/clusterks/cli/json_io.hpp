#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "clusterks/bounds.hpp"
#include "clusterks/hypothesis.hpp"
#include "clusterks/montecarlo.hpp"

namespace clusterks::cli {

// Tail bound at one normalized eps, with the quantities that produced it.
struct BoundEvaluation {
  double c = 0.0;
  double d = 0.0;
  TailSide side = TailSide::TwoSided;
  double eps = 0.0;
  double x = 0.0;            // c * d
  double denominator = 0.0;  // L(x)
  double shift = 0.0;        // S(x)
  double p_upper = 1.0;
  double p_upper_raw = 1.0;

  friend bool operator==(const BoundEvaluation&, const BoundEvaluation&) = default;
};

BoundEvaluation evaluate_bound(const BoundParams& params, TailSide side, double eps);

struct CriticalTable {
  double c = 0.0;
  double d = 0.0;
  TailSide side = TailSide::TwoSided;
  std::vector<CriticalValue> critical;

  friend bool operator==(const CriticalTable&, const CriticalTable&) = default;
};

CriticalTable critical_table(const BoundParams& params, TailSide side,
                             const std::vector<double>& alphas);

nlohmann::json to_json(const BoundEvaluation& value);
nlohmann::json to_json(const CriticalTable& value);
nlohmann::json to_json(const KsOutcome& value);
nlohmann::json to_json(const SimReport& value);

BoundEvaluation bound_evaluation_from_json(const nlohmann::json& j);
CriticalTable critical_table_from_json(const nlohmann::json& j);
KsOutcome ks_outcome_from_json(const nlohmann::json& j);
SimReport sim_report_from_json(const nlohmann::json& j);

// Shortest decimal text that parses back to the same double.
std::string format_number(double v);

}  // namespace clusterks::cli
