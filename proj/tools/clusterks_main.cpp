// Command-line front end for the clusterks library.
//
//   clusterks bound eval --c 100 --d 1 --side two --eps 0.5
//   clusterks bound critical --c 100 --d 1 --alpha 0.05
//   clusterks kstest one-sample --f sample.csv --ref uniform
//   clusterks kstest two-sample --f a.csv --g b.csv
//   clusterks kstest lipschitz --f a.csv --g b.csv --k-lip 1
//   clusterks simulate grid|coverage|sharpness ...

#include <iostream>

#include <CLI11.hpp>

#include "clusterks/cli/run.hpp"

namespace {

using clusterks::cli::Command;
using clusterks::cli::RunConfig;

struct Flags {
  std::string side = "two";
  std::string format = "json";
  std::string out;
  std::string f;
  std::string g;
  double c = 0.0;
  double d = 0.0;
};

void add_common(CLI::App* app, RunConfig& cfg, Flags& flags) {
  app->add_option("--side", flags.side, "two, plus or minus")
      ->check(CLI::IsMember({"two", "plus", "minus"}));
  app->add_option("--format", flags.format, "json, csv or table")
      ->check(CLI::IsMember({"json", "csv", "table"}));
  app->add_option("--out", flags.out, "write results to PATH instead of stdout");
  app->add_option("--alpha", cfg.alpha_levels, "significance levels")->delimiter(',');
}

void add_coefficients(CLI::App* app, Flags& flags) {
  app->add_option("--c", flags.c, "McDiarmid coefficient")->required();
  app->add_option("--d", flags.d, "downward-variation coefficient")->required();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distribution-free sup-distance bounds and cluster-robust KS tests"};
  app.require_subcommand(1);

  RunConfig cfg;
  Flags flags;
  std::uint64_t n = 0;
  std::uint64_t trials = 0;

  auto* bound = app.add_subcommand("bound", "evaluate or invert the tail bound");
  bound->require_subcommand(1);
  auto* bound_eval = bound->add_subcommand("eval", "tail bound at normalized eps");
  add_coefficients(bound_eval, flags);
  add_common(bound_eval, cfg, flags);
  bound_eval->add_option("--eps", cfg.eps, "normalized eps (one, or a list for csv)")
      ->delimiter(',');
  bound_eval->callback([&] { cfg.command = Command::BoundEval; });

  auto* bound_crit = bound->add_subcommand("critical", "critical sup distance per alpha");
  add_coefficients(bound_crit, flags);
  add_common(bound_crit, cfg, flags);
  bound_crit->callback([&] { cfg.command = Command::Critical; });

  auto* kstest = app.add_subcommand("kstest", "supremum-distance hypothesis tests");
  kstest->require_subcommand(1);
  auto* one = kstest->add_subcommand("one-sample", "clustered sample vs reference CDF");
  add_common(one, cfg, flags);
  one->add_option("--f", flags.f, "CSV with header value,cluster")->required();
  one->add_option("--ref", cfg.reference,
                  "uniform[:a:b], normal[:mu:sigma] or exponential[:rate]");
  one->callback([&] {
    cfg.command = Command::KsOneSample;
    cfg.inputs = {flags.f};
  });

  auto* two = kstest->add_subcommand("two-sample", "two independent clustered samples");
  add_common(two, cfg, flags);
  two->add_option("--f", flags.f, "first sample CSV")->required();
  two->add_option("--g", flags.g, "second sample CSV")->required();
  two->callback([&] {
    cfg.command = Command::KsTwoSample;
    cfg.inputs = {flags.f, flags.g};
  });

  auto* lip = kstest->add_subcommand("lipschitz", "two panels of Lipschitz trajectories");
  add_common(lip, cfg, flags);
  lip->add_option("--f", flags.f, "first panel CSV (time,unit_1,...)")->required();
  lip->add_option("--g", flags.g, "second panel CSV")->required();
  lip->add_option("--k-lip", cfg.k_lip, "declared Lipschitz constant")->required();
  lip->add_flag("--grid", cfg.finite_grid, "sup over the grid points only");
  lip->callback([&] {
    cfg.command = Command::LipschitzTest;
    cfg.inputs = {flags.f, flags.g};
  });

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo experiments");
  simulate->require_subcommand(1);
  auto add_sim = [&](CLI::App* sub) {
    add_common(sub, cfg, flags);
    sub->add_option("--n", n, "units / binomial size");
    sub->add_option("--trials", trials, "number of trials");
    sub->add_option("--seed", cfg.seed, "64-bit seed");
    sub->add_option("--threads", cfg.threads, "worker threads (0 = all cores)");
  };
  auto* grid = simulate->add_subcommand("grid", "binomial-grid counterexample");
  add_sim(grid);
  grid->add_option("--m", cfg.m, "grid sizes")->delimiter(',');
  grid->add_option("--eps", cfg.eps, "threshold on |U/n - 1/2|");
  grid->callback([&] { cfg.command = Command::SimulateGrid; });

  auto* coverage = simulate->add_subcommand("coverage", "iid coverage of the bounds");
  add_sim(coverage);
  coverage->add_option("--eps", cfg.eps, "eps grid")->delimiter(',');
  coverage->callback([&] { cfg.command = Command::SimulateCoverage; });

  auto* sharp = simulate->add_subcommand("sharpness", "fixed-n sharpness construction");
  add_sim(sharp);
  sharp->add_option("--l-target", cfg.l_target, "target k(n)/n in (0, 1/2)");
  sharp->callback([&] { cfg.command = Command::SimulateSharpness; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e, std::cerr, std::cerr);
    return clusterks::cli::kExitValidation;
  }

  try {
    cfg.side = clusterks::parse_side(flags.side);
    cfg.format = clusterks::cli::parse_format(flags.format);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return clusterks::cli::kExitValidation;
  }
  if (!flags.out.empty()) cfg.output = flags.out;
  if (cfg.command == Command::BoundEval || cfg.command == Command::Critical) {
    cfg.c = flags.c;
    cfg.d = flags.d;
  }
  if (n != 0) cfg.n = n;
  if (trials != 0) cfg.trials = trials;

  return clusterks::cli::run(cfg, std::cout, std::cerr);
}
