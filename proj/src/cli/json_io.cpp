#include "clusterks/cli/json_io.hpp"

#include <array>
#include <charconv>

#include "clusterks/errors.hpp"

namespace clusterks::cli {

using nlohmann::json;

namespace {

json params_json(const BoundParams& p) { return json{{"c", p.c()}, {"d", p.d()}}; }

json critical_json(const std::vector<CriticalValue>& values) {
  json arr = json::array();
  for (const auto& cv : values) arr.push_back({{"alpha", cv.alpha}, {"value", cv.value}});
  return arr;
}

std::vector<CriticalValue> critical_from(const json& arr) {
  std::vector<CriticalValue> out;
  for (const auto& e : arr) out.push_back({e.at("alpha").get<double>(), e.at("value").get<double>()});
  return out;
}

TailSide side_from(const json& j) { return parse_side(j.at("side").get<std::string>()); }

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> optional_from(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

}  // namespace

std::string format_number(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

BoundEvaluation evaluate_bound(const BoundParams& params, TailSide side, double eps) {
  BoundEvaluation out;
  out.c = params.c();
  out.d = params.d();
  out.side = side;
  out.eps = eps;
  out.x = params.product();
  out.denominator = denominator(out.x);
  out.shift = one_sided_shift(out.x);
  out.p_upper_raw = tail_bound_raw(side, eps);
  out.p_upper = tail_bound(params, side, eps);
  return out;
}

CriticalTable critical_table(const BoundParams& params, TailSide side,
                             const std::vector<double>& alphas) {
  CriticalTable out{params.c(), params.d(), side, {}};
  for (double a : alphas) out.critical.push_back({a, critical_statistic(params, side, a)});
  return out;
}

json to_json(const BoundEvaluation& v) {
  return json{{"c", v.c},
              {"d", v.d},
              {"side", std::string(to_string(v.side))},
              {"eps", v.eps},
              {"x", v.x},
              {"denominator", v.denominator},
              {"shift", v.shift},
              {"p_upper", v.p_upper},
              {"p_upper_raw", v.p_upper_raw}};
}

json to_json(const CriticalTable& v) {
  return json{{"c", v.c},
              {"d", v.d},
              {"side", std::string(to_string(v.side))},
              {"critical", critical_json(v.critical)}};
}

json to_json(const KsOutcome& v) {
  json j{{"test", v.test},
         {"statistic", v.statistic},
         {"statistic_lower", optional_number(v.statistic_lower)},
         {"side", std::string(to_string(v.side))},
         {"p_upper", v.p_upper},
         {"p_upper_raw", v.p_upper_raw},
         {"critical", critical_json(v.critical)},
         {"conservative", v.conservative},
         {"notes", v.notes}};
  json params = json::array();
  for (const auto& p : v.params) params.push_back(params_json(p));
  j["params"] = params;
  if (!v.params.empty()) {
    j["c"] = v.params[0].c();
    j["d"] = v.params[0].d();
  }
  const bool clustered = v.test.find("clustered") != std::string::npos;
  j["nu"] = clustered && !v.params.empty() ? json(v.params[0].c()) : json(nullptr);
  j["xi"] = clustered && v.params.size() > 1 ? json(v.params[1].c()) : json(nullptr);
  return j;
}

json to_json(const SimReport& v) {
  json metadata = json::array();
  for (const auto& [name, value] : v.metadata) metadata.push_back({{"name", name}, {"value", value}});
  json rows = json::array();
  for (const auto& r : v.rows) {
    rows.push_back({{"label", r.label},
                    {"eps", r.eps},
                    {"empirical", r.empirical},
                    {"bound", r.bound},
                    {"stderr", r.std_error},
                    {"violation", r.violation},
                    {"exact", optional_number(r.exact)}});
  }
  return json{{"experiment", v.experiment},
              {"statistic", v.statistic},
              {"config",
               {{"n", v.config.n},
                {"m", v.config.m},
                {"trials", v.config.trials},
                {"seed", v.config.seed},
                {"eps_grid", v.config.eps_grid},
                {"side", std::string(to_string(v.config.side))}}},
              {"violation_sigmas", v.violation_sigmas},
              {"metadata", metadata},
              {"notes", v.notes},
              {"rows", rows}};
}

BoundEvaluation bound_evaluation_from_json(const json& j) {
  BoundEvaluation v;
  v.c = j.at("c").get<double>();
  v.d = j.at("d").get<double>();
  v.side = side_from(j);
  v.eps = j.at("eps").get<double>();
  v.x = j.at("x").get<double>();
  v.denominator = j.at("denominator").get<double>();
  v.shift = j.at("shift").get<double>();
  v.p_upper = j.at("p_upper").get<double>();
  v.p_upper_raw = j.at("p_upper_raw").get<double>();
  return v;
}

CriticalTable critical_table_from_json(const json& j) {
  return CriticalTable{j.at("c").get<double>(), j.at("d").get<double>(), side_from(j),
                       critical_from(j.at("critical"))};
}

KsOutcome ks_outcome_from_json(const json& j) {
  KsOutcome v;
  v.test = j.at("test").get<std::string>();
  v.statistic = j.at("statistic").get<double>();
  v.statistic_lower = optional_from(j, "statistic_lower");
  v.side = side_from(j);
  for (const auto& p : j.at("params")) {
    v.params.emplace_back(p.at("c").get<double>(), p.at("d").get<double>());
  }
  v.p_upper = j.at("p_upper").get<double>();
  v.p_upper_raw = j.at("p_upper_raw").get<double>();
  v.critical = critical_from(j.at("critical"));
  v.conservative = j.at("conservative").get<bool>();
  v.notes = j.at("notes").get<std::vector<std::string>>();
  return v;
}

SimReport sim_report_from_json(const json& j) {
  SimReport v;
  v.experiment = j.at("experiment").get<std::string>();
  v.statistic = j.at("statistic").get<std::string>();
  const auto& cfg = j.at("config");
  v.config.n = cfg.at("n").get<std::uint64_t>();
  v.config.m = cfg.at("m").get<std::vector<std::uint64_t>>();
  v.config.trials = cfg.at("trials").get<std::uint64_t>();
  v.config.seed = cfg.at("seed").get<std::uint64_t>();
  v.config.eps_grid = cfg.at("eps_grid").get<std::vector<double>>();
  v.config.side = side_from(cfg);
  v.violation_sigmas = j.at("violation_sigmas").get<double>();
  for (const auto& e : j.at("metadata")) {
    v.metadata.emplace_back(e.at("name").get<std::string>(), e.at("value").get<double>());
  }
  v.notes = j.at("notes").get<std::vector<std::string>>();
  for (const auto& r : j.at("rows")) {
    SimRow row;
    row.label = r.at("label").get<std::string>();
    row.eps = r.at("eps").get<double>();
    row.empirical = r.at("empirical").get<double>();
    row.bound = r.at("bound").get<double>();
    row.std_error = r.at("stderr").get<double>();
    row.violation = r.at("violation").get<bool>();
    row.exact = optional_from(r, "exact");
    v.rows.push_back(std::move(row));
  }
  return v;
}

}  // namespace clusterks::cli
