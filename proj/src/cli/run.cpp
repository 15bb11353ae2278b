#include "clusterks/cli/run.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "clusterks/cli/ingest.hpp"
#include "clusterks/cli/json_io.hpp"
#include "clusterks/errors.hpp"
#include "clusterks/hypothesis.hpp"
#include "clusterks/montecarlo.hpp"

namespace clusterks::cli {

namespace {

using nlohmann::json;

const std::vector<double> kDefaultCoverageEps{0.25, 0.5, 1.0, 1.5, 2.0};

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) return parts;
    start = pos + 1;
  }
}

double reference_arg(std::string_view text, std::string_view spec) {
  double v = 0.0;
  if (!parse_decimal(text, v)) {
    throw ValidationError("bad number '" + std::string(text) + "' in reference '" +
                          std::string(spec) + "'");
  }
  return v;
}

BoundParams require_params(const RunConfig& cfg) {
  if (!cfg.c || !cfg.d) throw ValidationError("--c and --d are required");
  return BoundParams(*cfg.c, *cfg.d);
}

void require_inputs(const RunConfig& cfg, std::size_t count) {
  if (cfg.inputs.size() != count) {
    throw ValidationError("expected " + std::to_string(count) + " input file(s), got " +
                          std::to_string(cfg.inputs.size()));
  }
}

std::vector<double> checked_alphas(std::vector<double> alphas) {
  if (alphas.empty()) throw ValidationError("need at least one alpha level");
  for (double a : alphas) {
    if (!(a > 0.0 && a < 1.0)) {
      throw ValidationError("alpha levels must lie in (0, 1), got " + format_number(a));
    }
  }
  std::sort(alphas.begin(), alphas.end());
  alphas.erase(std::unique(alphas.begin(), alphas.end()), alphas.end());
  return alphas;
}

double single_eps(const RunConfig& cfg) {
  if (cfg.eps.size() != 1) throw ValidationError("exactly one --eps value is required");
  return cfg.eps.front();
}

ClusteredSample load_sample(const std::string& path, std::ostream& err) {
  auto sample = ingest_clustered_csv(path);
  if (sample.labels_inferred()) {
    err << "notice: " << path
        << " has no cluster column; treating every row as its own cluster\n";
  }
  return sample;
}

// ---- rendering ----

std::string render_json(const json& j) { return j.dump(2) + "\n"; }

std::string csv_bool(bool b) { return b ? "1" : "0"; }

void table_line(std::ostringstream& os, std::string_view key, const std::string& value) {
  os << std::left << std::setw(22) << key << value << '\n';
}

std::string render_critical_table(const std::vector<CriticalValue>& critical) {
  std::ostringstream os;
  for (const auto& cv : critical) {
    table_line(os, "critical@" + format_number(cv.alpha), format_number(cv.value));
  }
  return os.str();
}

std::string render(const KsOutcome& o, OutputFormat format) {
  switch (format) {
    case OutputFormat::JsonOutput:
      return render_json(to_json(o));
    case OutputFormat::PlotCsv:
      return "statistic,side,p_upper,conservative\n" + format_number(o.statistic) + "," +
             std::string(to_string(o.side)) + "," + format_number(o.p_upper) + "," +
             csv_bool(o.conservative) + "\n";
    case OutputFormat::HumanTable:
      break;
  }
  std::ostringstream os;
  table_line(os, "test", o.test);
  table_line(os, "side", std::string(to_string(o.side)));
  table_line(os, "statistic", format_number(o.statistic));
  if (o.statistic_lower) table_line(os, "statistic (grid max)", format_number(*o.statistic_lower));
  for (std::size_t i = 0; i < o.params.size(); ++i) {
    const std::string tag = o.params.size() > 1 ? "[" + std::to_string(i + 1) + "]" : "";
    table_line(os, "c" + tag, format_number(o.params[i].c()));
    table_line(os, "d" + tag, format_number(o.params[i].d()));
  }
  table_line(os, "p_upper", format_number(o.p_upper));
  table_line(os, "conservative", o.conservative ? "yes" : "no");
  os << render_critical_table(o.critical);
  for (const auto& note : o.notes) table_line(os, "note", note);
  return os.str();
}

std::string render(const SimReport& r, OutputFormat format) {
  switch (format) {
    case OutputFormat::JsonOutput:
      return render_json(to_json(r));
    case OutputFormat::PlotCsv: {
      std::string s = "eps,empirical,bound,stderr,violation,label\n";
      for (const auto& row : r.rows) {
        s += format_number(row.eps) + "," + format_number(row.empirical) + "," +
             format_number(row.bound) + "," + format_number(row.std_error) + "," +
             csv_bool(row.violation) + "," + row.label + "\n";
      }
      return s;
    }
    case OutputFormat::HumanTable:
      break;
  }
  std::ostringstream os;
  os << r.experiment << ": " << r.statistic << '\n';
  os << "n=" << r.config.n << " trials=" << r.config.trials << " seed=" << r.config.seed
     << " side=" << to_string(r.config.side) << '\n';
  for (const auto& [name, value] : r.metadata) os << name << "=" << format_number(value) << '\n';
  for (const auto& note : r.notes) os << "note: " << note << '\n';
  os << std::left << std::setw(18) << "label" << std::setw(12) << "eps" << std::setw(14)
     << "empirical" << std::setw(14) << "bound" << std::setw(14) << "stderr" << std::setw(14)
     << "exact" << "violation\n";
  os << std::fixed << std::setprecision(6);
  for (const auto& row : r.rows) {
    os << std::setw(18) << row.label << std::setw(12) << row.eps << std::setw(14)
       << row.empirical << std::setw(14) << row.bound << std::setw(14) << row.std_error;
    if (row.exact) {
      os << std::setw(14) << *row.exact;
    } else {
      os << std::setw(14) << "-";
    }
    os << (row.violation ? "YES" : "no") << '\n';
  }
  return os.str();
}

std::string render(const BoundParams& params, TailSide side, const RunConfig& cfg) {
  if (cfg.format == OutputFormat::PlotCsv) {
    std::vector<double> grid = cfg.eps;
    if (grid.empty()) {
      for (int i = 0; i <= 60; ++i) grid.push_back(0.05 * i);
    }
    std::string s = "eps,bound\n";
    for (double e : grid) {
      s += format_number(e) + "," + format_number(tail_bound(params, side, e)) + "\n";
    }
    return s;
  }
  const auto eval = evaluate_bound(params, side, single_eps(cfg));
  if (cfg.format == OutputFormat::JsonOutput) return render_json(to_json(eval));
  std::ostringstream os;
  table_line(os, "c", format_number(eval.c));
  table_line(os, "d", format_number(eval.d));
  table_line(os, "side", std::string(to_string(eval.side)));
  table_line(os, "eps", format_number(eval.eps));
  table_line(os, "x = c*d", format_number(eval.x));
  table_line(os, "L(x)", format_number(eval.denominator));
  table_line(os, "S(x)", format_number(eval.shift));
  table_line(os, "p_upper", format_number(eval.p_upper));
  table_line(os, "p_upper (uncapped)", format_number(eval.p_upper_raw));
  return os.str();
}

std::string render(const CriticalTable& t, OutputFormat format) {
  switch (format) {
    case OutputFormat::JsonOutput:
      return render_json(to_json(t));
    case OutputFormat::PlotCsv: {
      std::string s = "alpha,critical\n";
      for (const auto& cv : t.critical) {
        s += format_number(cv.alpha) + "," + format_number(cv.value) + "\n";
      }
      return s;
    }
    case OutputFormat::HumanTable:
      break;
  }
  std::ostringstream os;
  table_line(os, "c", format_number(t.c));
  table_line(os, "d", format_number(t.d));
  table_line(os, "side", std::string(to_string(t.side)));
  os << render_critical_table(t.critical);
  return os.str();
}

std::string execute(const RunConfig& cfg, std::ostream& err) {
  const auto alphas = checked_alphas(cfg.alpha_levels);
  switch (cfg.command) {
    case Command::BoundEval:
      return render(require_params(cfg), cfg.side, cfg);
    case Command::Critical:
      return render(critical_table(require_params(cfg), cfg.side, alphas), cfg.format);
    case Command::KsOneSample: {
      require_inputs(cfg, 1);
      const auto sample = load_sample(cfg.inputs[0], err);
      return render(one_sample_clustered(sample, make_reference(cfg.reference), cfg.side, alphas),
                    cfg.format);
    }
    case Command::KsTwoSample: {
      require_inputs(cfg, 2);
      const auto f = load_sample(cfg.inputs[0], err);
      const auto g = load_sample(cfg.inputs[1], err);
      return render(two_sample_clustered(f, g, cfg.side, alphas), cfg.format);
    }
    case Command::LipschitzTest: {
      require_inputs(cfg, 2);
      if (cfg.side != TailSide::TwoSided) {
        throw ValidationError("the Lipschitz test is two-sided only");
      }
      const auto f = ingest_trajectory_csv(cfg.inputs[0], cfg.k_lip);
      const auto g = ingest_trajectory_csv(cfg.inputs[1], cfg.k_lip);
      const auto domain = cfg.finite_grid ? TimeDomain::FiniteGrid : TimeDomain::Continuous;
      return render(lipschitz_two_sample(f, g, domain, alphas), cfg.format);
    }
    case Command::SimulateGrid: {
      const std::vector<std::uint64_t> m =
          cfg.m.empty() ? std::vector<std::uint64_t>{1, 10, 100, 1000} : cfg.m;
      const double eps = cfg.eps.empty() ? 0.25 : single_eps(cfg);
      return render(conjecture_refutation_experiment(cfg.n.value_or(16), m, eps,
                                                     cfg.trials.value_or(2000), cfg.seed,
                                                     cfg.threads),
                    cfg.format);
    }
    case Command::SimulateCoverage: {
      const auto& eps = cfg.eps.empty() ? kDefaultCoverageEps : cfg.eps;
      return render(iid_coverage(cfg.n.value_or(100), cfg.trials.value_or(10000), cfg.seed, eps,
                                 cfg.side, cfg.threads),
                    cfg.format);
    }
    case Command::SimulateSharpness:
      return render(sharpness_experiment(cfg.n.value_or(16), cfg.l_target,
                                         cfg.trials.value_or(5000), cfg.seed, cfg.threads),
                    cfg.format);
  }
  throw ValidationError("unknown command");
}

}  // namespace

OutputFormat parse_format(std::string_view text) {
  if (text == "json") return OutputFormat::JsonOutput;
  if (text == "csv") return OutputFormat::PlotCsv;
  if (text == "table") return OutputFormat::HumanTable;
  throw ValidationError("unknown format '" + std::string(text) + "' (expected json, csv or table)");
}

ReferenceCdf make_reference(std::string_view spec) {
  const auto parts = split(spec, ':');
  const auto kind = parts.front();
  auto arg = [&](std::size_t i, double fallback) {
    return parts.size() > i ? reference_arg(parts[i], spec) : fallback;
  };
  if (kind == "uniform" && (parts.size() == 1 || parts.size() == 3)) {
    const double a = arg(1, 0.0);
    const double b = arg(2, 1.0);
    if (!(a < b)) throw ValidationError("uniform reference needs a < b");
    return [a, b](double r) { return std::clamp((r - a) / (b - a), 0.0, 1.0); };
  }
  if (kind == "normal" && (parts.size() == 1 || parts.size() == 3)) {
    const double mu = arg(1, 0.0);
    const double sigma = arg(2, 1.0);
    if (!(sigma > 0.0)) throw ValidationError("normal reference needs sigma > 0");
    return [mu, sigma](double r) {
      return 0.5 * std::erfc(-(r - mu) / (sigma * std::sqrt(2.0)));
    };
  }
  if (kind == "exponential" && parts.size() <= 2) {
    const double rate = arg(1, 1.0);
    if (!(rate > 0.0)) throw ValidationError("exponential reference needs rate > 0");
    return [rate](double r) { return r <= 0.0 ? 0.0 : -std::expm1(-rate * r); };
  }
  throw ValidationError("unknown reference '" + std::string(spec) +
                        "' (expected uniform[:a:b], normal[:mu:sigma] or exponential[:rate])");
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    const std::string result = execute(config, err);
    if (config.output) {
      std::ofstream file(*config.output, std::ios::binary);
      if (!file) throw IoError("cannot open " + *config.output + " for writing");
      file << result;
      if (!file.flush()) throw IoError("failed writing " + *config.output);
    } else {
      out << result;
      out.flush();
    }
    return kExitOk;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    // Domain, validation, parse and convergence errors.
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
}

}  // namespace clusterks::cli
