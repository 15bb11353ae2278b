#include <doctest.h>

#include <clocale>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "clusterks/cli/ingest.hpp"
#include "clusterks/cli/json_io.hpp"
#include "clusterks/cli/run.hpp"
#include "clusterks/errors.hpp"

using namespace clusterks;
using namespace clusterks::cli;
namespace fs = std::filesystem;

namespace {

// Per-test scratch directory, removed on exit.
class Scratch {
 public:
  Scratch() {
    std::random_device rd;
    dir_ = fs::temp_directory_path() / ("clusterks_test_" + std::to_string(rd()));
    fs::create_directories(dir_);
  }
  ~Scratch() {
    std::error_code ec;
    fs::remove_all(dir_, ec);
  }
  Scratch(const Scratch&) = delete;
  Scratch& operator=(const Scratch&) = delete;

  std::string write(const std::string& name, const std::string& content) const {
    const auto path = dir_ / name;
    std::ofstream(path, std::ios::binary) << content;
    return path.string();
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

 private:
  fs::path dir_;
};

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

RunResult run_capture(const RunConfig& cfg) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(cfg, out, err);
  return {code, out.str(), err.str()};
}

ClusteredSample parse(const std::string& text) {
  std::istringstream in(text);
  return parse_clustered_csv(in);
}

std::size_t error_row(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.row();
  }
  return 0;
}

}  // namespace

TEST_CASE("clustered CSV ingestion") {
  const auto s = parse("value,cluster\n1.0,a\n2.0,a\n3.0,b\n");
  CHECK(s.size() == 3);
  CHECK(s.clusters().cluster_count() == 2);
  CHECK(s.clusters().effective_size() == doctest::Approx(1.8));
  CHECK_FALSE(s.labels_inferred());

  const auto single = parse("value\n0.5\n0.25\n");
  CHECK(single.labels_inferred());
  CHECK(single.clusters().cluster_count() == 2);

  // Row order does not matter downstream.
  const auto shuffled = parse("value,cluster\n3.0,b\n1.0,a\n2.0,a\n");
  CHECK(ecdf(shuffled).values() == ecdf(s).values());
  CHECK(shuffled.clusters().effective_size() == s.clusters().effective_size());

  // CRLF, BOM and trailing blank lines are tolerated.
  const auto crlf = parse("\xEF\xBB\xBFvalue,cluster\r\n1.0,a\r\n2.0,b\r\n\r\n");
  CHECK(crlf.size() == 2);
}

TEST_CASE("clustered CSV errors carry positions") {
  CHECK(error_row("value,cluster\n1.0,a\nxyz,a\n") == 3);
  CHECK(error_row("") == 1);
  CHECK(error_row("foo,bar\n1,a\n") == 1);
  CHECK(error_row("value,cluster\n1.0\n") == 2);
  CHECK(error_row("value,cluster\n1.0,a\ninf,b\n") == 3);
  CHECK(error_row("value,cluster\n1.0,\n") == 2);
  CHECK(error_row("value,cluster\n") == 1);
  try {
    parse("value,cluster\n1.0,a\nxyz,a\n");
  } catch (const ParseError& e) {
    CHECK(e.column() == 1);
    CHECK(std::string(e.what()).find("row 3") != std::string::npos);
  }
  CHECK_THROWS_AS(ingest_clustered_csv("/nonexistent/file.csv"), IoError);
}

TEST_CASE("decimal parsing ignores the locale") {
  double v = 0.0;
  CHECK(parse_decimal("1.5", v));
  CHECK(v == 1.5);
  CHECK(parse_decimal(" -2e-3 ", v));
  CHECK(v == -0.002);
  CHECK(parse_decimal("+4", v));
  CHECK_FALSE(parse_decimal("1,5", v));
  CHECK_FALSE(parse_decimal("nan", v));
  CHECK_FALSE(parse_decimal("", v));
  CHECK_FALSE(parse_decimal("1.5x", v));
  // from_chars is locale-free; switching the C locale must not matter.
  if (std::setlocale(LC_NUMERIC, "de_DE.UTF-8") != nullptr) {
    CHECK(parse_decimal("0.25", v));
    CHECK(v == 0.25);
    CHECK(format_number(0.25) == "0.25");
    std::setlocale(LC_NUMERIC, "C");
  }
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1.0 / 3.0) == "0.3333333333333333");
}

TEST_CASE("trajectory CSV ingestion") {
  std::istringstream two("time,unit_1\n0,0\n1,0\n");
  CHECK(parse_trajectory_csv(two, 0.0).delta() == 1.0);

  std::string grid = "time,unit_1,unit_2\n";
  for (int i = 0; i <= 10; ++i) {
    const std::string t = format_number(i / 10.0);
    grid += t + "," + t + "," + t + "\n";
  }
  std::istringstream g(grid);
  const auto panel = parse_trajectory_csv(g, 1.0);
  CHECK(panel.delta() == doctest::Approx(0.1));
  CHECK(panel.unit_count() == 2);

  std::istringstream steep("time,unit_1\n0,0\n0.5,1\n");
  try {
    parse_trajectory_csv(steep, 1.0);
    FAIL("expected a consistency error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("slope 2 > k_lip 1") != std::string::npos);
  }
  std::istringstream backwards("time,unit_1\n0.5,0\n0.2,0\n");
  CHECK_THROWS_AS(parse_trajectory_csv(backwards, 1.0), ParseError);
  std::istringstream out_of_range("time,unit_1\n0,0\n1,1.5\n");
  CHECK_THROWS_AS(parse_trajectory_csv(out_of_range, 5.0), ValidationError);
  std::istringstream bad_header("time,unit_2\n0,0\n");
  CHECK_THROWS_AS(parse_trajectory_csv(bad_header, 1.0), ParseError);
}

TEST_CASE("bound eval reports capped and raw values") {
  RunConfig cfg;
  cfg.command = Command::BoundEval;
  cfg.c = 100.0;
  cfg.d = 1.0;
  cfg.eps = {0.5};
  const auto r = run_capture(cfg);
  REQUIRE(r.code == kExitOk);
  CHECK(r.err.empty());
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("p_upper").get<double>() == 1.0);
  CHECK(j.at("p_upper_raw").get<double>() == doctest::Approx(1.2130613194252668));
  CHECK(j.at("denominator").get<double>() == doctest::Approx(4.23084925253));
  CHECK(bound_evaluation_from_json(j) == evaluate_bound(BoundParams(100, 1), TailSide::TwoSided, 0.5));

  cfg.format = OutputFormat::PlotCsv;
  cfg.eps.clear();
  const auto csv = run_capture(cfg);
  CHECK(csv.out.rfind("eps,bound\n0,1\n", 0) == 0);
  std::size_t lines = 0;
  for (char ch : csv.out) lines += ch == '\n';
  CHECK(lines == 62);

  cfg.format = OutputFormat::HumanTable;
  cfg.eps = {1.0};
  CHECK(run_capture(cfg).out.find("p_upper") != std::string::npos);
}

TEST_CASE("critical table") {
  RunConfig cfg;
  cfg.command = Command::Critical;
  cfg.c = 100.0;
  cfg.d = 1.0;
  cfg.alpha_levels = {0.1, 0.05, 0.01, 0.05};
  const auto r = run_capture(cfg);
  REQUIRE(r.code == kExitOk);
  const auto table = critical_table_from_json(nlohmann::json::parse(r.out));
  REQUIRE(table.critical.size() == 3);
  CHECK(table.critical[0].alpha == 0.01);
  CHECK(table.critical[1].value == doctest::Approx(0.574592278273).epsilon(1e-10));
}

TEST_CASE("kstest commands") {
  Scratch dir;
  const auto a = dir.write("a.csv", "value,cluster\n0.1,x\n0.4,x\n0.35,y\n0.8,z\n0.9,w\n");
  const auto b = dir.write("b.csv", "value,cluster\n0.1,x\n0.4,x\n0.35,y\n0.8,z\n0.9,w\n");
  const auto iid = dir.write("iid.csv", "value\n0.2\n0.6\n0.7\n");

  RunConfig cfg;
  cfg.command = Command::KsTwoSample;
  cfg.inputs = {a, b};
  auto r = run_capture(cfg);
  REQUIRE(r.code == kExitOk);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("statistic").get<double>() == 0.0);
  CHECK(j.at("p_upper").get<double>() == 1.0);
  CHECK(j.at("nu").get<double>() == j.at("xi").get<double>());
  for (const char* key : {"statistic", "side", "nu", "xi", "c", "d", "p_upper", "critical",
                          "conservative"}) {
    CHECK(j.contains(key));
  }
  CHECK(ks_outcome_from_json(j) ==
        two_sample_clustered(ingest_clustered_csv(a), ingest_clustered_csv(b),
                             TailSide::TwoSided));

  cfg.command = Command::KsOneSample;
  cfg.inputs = {iid};
  r = run_capture(cfg);
  REQUIRE(r.code == kExitOk);
  CHECK(r.err.find("notice") != std::string::npos);
  j = nlohmann::json::parse(r.out);
  CHECK(j.at("notes").size() == 1);
  CHECK(j.at("nu").get<double>() == 3.0);

  cfg.format = OutputFormat::PlotCsv;
  r = run_capture(cfg);
  CHECK(r.out.rfind("statistic,side,p_upper,conservative\n", 0) == 0);

  const auto pf = dir.write("f.csv", "time,unit_1,unit_2\n0,0.1,0.2\n0.5,0.3,0.2\n1,0.4,0.3\n");
  const auto pg = dir.write("g.csv", "time,unit_1,unit_2\n0,0.1,0.2\n0.5,0.2,0.2\n1,0.4,0.4\n");
  cfg = RunConfig{};
  cfg.command = Command::LipschitzTest;
  cfg.inputs = {pf, pg};
  cfg.k_lip = 1.0;
  r = run_capture(cfg);
  REQUIRE(r.code == kExitOk);
  j = nlohmann::json::parse(r.out);
  CHECK(j.at("conservative").get<bool>());
  CHECK(j.at("nu").is_null());
  CHECK(j.at("statistic_lower").get<double>() == doctest::Approx(0.05));
  cfg.finite_grid = true;
  j = nlohmann::json::parse(run_capture(cfg).out);
  CHECK_FALSE(j.at("conservative").get<bool>());
  CHECK(j.at("statistic").get<double>() == doctest::Approx(0.05));
}

TEST_CASE("exit codes and error routing") {
  Scratch dir;
  RunConfig cfg;
  cfg.command = Command::KsOneSample;
  cfg.inputs = {dir.path("missing.csv")};
  auto r = run_capture(cfg);
  CHECK(r.code == kExitIo);
  CHECK(r.out.empty());
  CHECK(r.err.find("error") != std::string::npos);

  cfg.inputs = {dir.write("bad.csv", "value,cluster\n1.0,a\nxyz,a\n")};
  r = run_capture(cfg);
  CHECK(r.code == kExitValidation);
  CHECK(r.out.empty());
  CHECK(r.err.find("row 3") != std::string::npos);

  RunConfig bound;
  bound.command = Command::BoundEval;
  bound.c = 1.0;
  bound.d = 1.0;
  bound.eps = {1.0};
  CHECK(run_capture(bound).code == kExitValidation);
  bound.d = 2.0;
  bound.alpha_levels = {1.5};
  CHECK(run_capture(bound).code == kExitValidation);

  RunConfig grid;
  grid.command = Command::SimulateGrid;
  grid.eps = {0.75};
  CHECK(run_capture(grid).code == kExitValidation);

  RunConfig unwritable;
  unwritable.command = Command::Critical;
  unwritable.c = 10.0;
  unwritable.d = 1.0;
  unwritable.output = dir.path("no/such/dir/out.json");
  CHECK(run_capture(unwritable).code == kExitIo);

  CHECK_THROWS_AS(make_reference("gamma"), ValidationError);
  CHECK_THROWS_AS(make_reference("uniform:1:0"), ValidationError);
  CHECK(make_reference("uniform:0:2")(1.0) == 0.5);
  CHECK(make_reference("normal")(0.0) == doctest::Approx(0.5));
  CHECK(make_reference("exponential:2")(std::log(2.0) / 2.0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(parse_format("xml"), ValidationError);
}

TEST_CASE("output file receives the result") {
  Scratch dir;
  RunConfig cfg;
  cfg.command = Command::Critical;
  cfg.c = 10.0;
  cfg.d = 1.0;
  cfg.output = dir.path("out.json");
  const auto r = run_capture(cfg);
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.empty());
  std::ifstream in(*cfg.output);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(critical_table_from_json(nlohmann::json::parse(buf.str())).critical.size() == 3);
}

TEST_CASE("seeded simulations are byte-identical and round-trip") {
  for (Command command :
       {Command::SimulateGrid, Command::SimulateCoverage, Command::SimulateSharpness}) {
    RunConfig cfg;
    cfg.command = command;
    cfg.seed = 7;
    cfg.trials = 400;
    const auto first = run_capture(cfg);
    REQUIRE(first.code == kExitOk);
    CHECK(first.err.empty());
    cfg.threads = 3;
    const auto second = run_capture(cfg);
    CHECK(first.out == second.out);

    const auto j = nlohmann::json::parse(first.out);
    const auto report = sim_report_from_json(j);
    CHECK(to_json(report) == j);
    CHECK(to_json(report).dump(2) + "\n" == first.out);

    cfg.format = OutputFormat::PlotCsv;
    const auto csv = run_capture(cfg);
    CHECK(csv.out.rfind("eps,empirical,bound,stderr,violation,label\n", 0) == 0);
    cfg.format = OutputFormat::HumanTable;
    CHECK(run_capture(cfg).code == kExitOk);
  }
}

TEST_CASE("JSON round-trip of outcomes, fuzzed") {
  std::mt19937_64 gen(55);
  std::uniform_real_distribution<double> u;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Observation> fo;
    std::vector<Observation> go;
    for (int i = 0; i < 30; ++i) {
      fo.push_back({u(gen), std::to_string(i % 7)});
      go.push_back({u(gen) * 1.1, std::to_string(i % 5)});
    }
    const ClusteredSample f(fo);
    const ClusteredSample g(go);
    for (TailSide side : {TailSide::TwoSided, TailSide::PlusSide, TailSide::MinusSide}) {
      const auto two = two_sample_clustered(f, g, side);
      CHECK(ks_outcome_from_json(nlohmann::json::parse(to_json(two).dump())) == two);
      const ReferenceCdf ref = make_reference("uniform");
      const auto one = one_sample_clustered(f, ref, side);
      CHECK(ks_outcome_from_json(nlohmann::json::parse(to_json(one).dump())) == one);
      const auto eval = evaluate_bound(BoundParams(1.0 + 100 * u(gen), 1.0 + u(gen)), side,
                                       3 * u(gen));
      CHECK(bound_evaluation_from_json(nlohmann::json::parse(to_json(eval).dump())) == eval);
    }
  }
}
