#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "clusterks/bounds.hpp"
#include "clusterks/empirical.hpp"

namespace clusterks::cli {

enum class Command {
  BoundEval,
  Critical,
  KsOneSample,
  KsTwoSample,
  LipschitzTest,
  SimulateGrid,
  SimulateCoverage,
  SimulateSharpness,
};

enum class OutputFormat { JsonOutput, PlotCsv, HumanTable };

OutputFormat parse_format(std::string_view text);

// Exit codes of run().
inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitValidation = 2;

struct RunConfig {
  Command command = Command::BoundEval;
  std::vector<std::string> inputs;  // sample / panel files, in order
  std::vector<double> alpha_levels{0.01, 0.05, 0.1};
  TailSide side = TailSide::TwoSided;
  std::optional<std::string> output;  // stdout when absent
  OutputFormat format = OutputFormat::JsonOutput;

  std::optional<double> c;
  std::optional<double> d;
  std::vector<double> eps;
  std::optional<std::uint64_t> n;
  std::vector<std::uint64_t> m;
  std::optional<std::uint64_t> trials;
  std::uint64_t seed = 0;
  double k_lip = 0.0;
  bool finite_grid = false;  // Lipschitz test: sup over grid points only
  std::string reference = "uniform";
  double l_target = 0.25;
  unsigned threads = 0;
};

// Builds a reference CDF from "uniform[:a:b]", "normal[:mu:sigma]" or
// "exponential[:rate]".
ReferenceCdf make_reference(std::string_view spec);

// Executes the command. Results go to `out` (or the configured file);
// diagnostics go to `err` only.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace clusterks::cli
