#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "cli.hpp"
#include "seernf/io.hpp"
#include "seernf/value_table.hpp"

using namespace seernf;
namespace fs = std::filesystem;

namespace {

const std::string kMapping = std::string(SEERNF_DATA_DIR) + "/cocomo_to_seer.json";

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "seernf");
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("seernf_cli_" + std::to_string(::getpid())) / name;
  fs::remove_all(dir);
  return dir;
}

/// A 93-project COCOMO 81 dataset written by the synth command.
std::string dataset93() {
  static const std::string path = [] {
    const fs::path dir = scratch("dataset93");
    const Result r = invoke({"synth", "--mapping", kMapping, "--count", "93", "--seed", "7", "--out", dir.string()});
    REQUIRE(r.code == 0);
    return (dir / "dataset.csv").string();
  }();
  return path;
}

int line_count(const std::string& text) { return static_cast<int>(std::count(text.begin(), text.end(), '\n')); }

}  // namespace

TEST_CASE("estimate: all-nominal project on the identity table") {
  for (double size : {2000.0, 50000.0, 1.25e6}) {
    const Result r = invoke({"estimate", "--table", "preset:identity", "--size", format_number(size), "--json"});
    REQUIRE(r.code == 0);
    const json doc = json::parse(r.out);
    const double expected = 0.393469 * std::pow(1.0, 0.4) * std::pow(size / 2000.0, 1.2);
    CHECK(std::abs(doc["effort_py"].get<double>() - expected) <= 1e-12 * expected);
    CHECK(doc["ctbx"].get<double>() == doctest::Approx(4.11).epsilon(1e-14));
    CHECK(doc["effort_pm"].get<double>() == doctest::Approx(12.0 * expected).epsilon(1e-12));
  }
}

TEST_CASE("estimate: text and JSON agree and JSON is byte-stable") {
  const std::vector<std::string> args = {"estimate", "--table", "preset:synthetic", "--size", "40000",
                                         "--rating", "TEST=Hi+", "--rating", "D=9.5",
                                         "--sibr", "0.25"};
  std::vector<std::string> json_args = args;
  json_args.push_back("--json");
  const Result a = invoke(json_args);
  const Result b = invoke(json_args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const json doc = json::parse(a.out);
  std::vector<std::string> keys;
  for (const auto& [k, v] : doc.items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"size_sloc", "sibr", "d", "ctbx", "parm_adjustment", "c_tb", "c_te", "k",
                                          "effort_py", "effort_pm", "months_per_year"});
  const Result text = invoke(args);
  CHECK(text.out.find(format_number(doc["effort_py"].get<double>())) != std::string::npos);
}

TEST_CASE("estimate: failures map to exit codes") {
  const Result missing = invoke({"estimate", "--table", "/nonexistent/table.json", "--size", "1000"});
  CHECK(missing.code == cli::kExitMissingFile);
  CHECK(missing.err.find("table not found") != std::string::npos);

  const fs::path dir = scratch("broken_table");
  ValueTable broken = synthetic_table();
  broken.set_value(Param::TOOL, 18, 50.0);
  save_table(dir / "broken.json", broken);
  const Result invalid = invoke({"estimate", "--table", (dir / "broken.json").string(), "--size", "1000"});
  CHECK(invalid.code == cli::kExitInvalid);
  CHECK(invalid.err.find("TOOL") != std::string::npos);

  CHECK(invoke({"estimate", "--table", "preset:synthetic", "--size", "1000", "--rating",
                "TEST=Medium"}).code == cli::kExitInvalid);
  CHECK(invoke({"estimate", "--table", "preset:synthetic", "--size", "-5"}).code == cli::kExitInvalid);
  CHECK(invoke({"estimate"}).code == cli::kExitUsage);

  const Result v = invoke({"validate-table", (dir / "broken.json").string()});
  CHECK(v.code == cli::kExitInvalid);
  CHECK(invoke({"validate-table", "preset:synthetic"}).code == 0);
}

TEST_CASE("case: zero learning rate gives an all-zero change table") {
  const fs::path dir = scratch("case_alpha0");
  const Result r = invoke({"case", "--dataset", dataset93(), "--mapping", kMapping, "--table",
                           "preset:synthetic", "--protocol", "c2", "--alpha",
                           "0", "--epochs", "3", "--out", dir.string()});
  REQUIRE(r.code == 0);
  const std::string csv = read_text_file(dir / "summary.csv");
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  int rows = 0;
  while (std::getline(in, line)) {
    const std::string change = line.substr(line.rfind(',') + 1);
    CHECK_MESSAGE((change == "0.00" || change == "0"), line);
    ++rows;
  }
  CHECK(rows == 6);
  CHECK(read_text_file(dir / "baseline_report.csv") == read_text_file(dir / "calibrated_report.csv"));
}

TEST_CASE("case: C4-1 on 93 projects reports projects 1 to 23") {
  const fs::path dir = scratch("case_c41");
  const Result r = invoke({"case", "--dataset", dataset93(), "--mapping", kMapping, "--table",
                           "preset:synthetic", "--protocol", "c4-1", "--alpha",
                           "0.2", "--epochs", "5", "--out", dir.string()});
  REQUIRE(r.code == 0);
  const std::string report = read_text_file(dir / "baseline_report.csv");
  CHECK(line_count(report) == 24);
  CHECK(report.find("\nCOCOMO81-001,") != std::string::npos);
  CHECK(report.find("\nCOCOMO81-023,") != std::string::npos);
  CHECK(report.find("\nCOCOMO81-024,") == std::string::npos);
  const json manifest = json::parse(read_text_file(dir / "manifest.json"));
  CHECK(manifest["status"] == "ok");
  CHECK(manifest["outputs"].size() == 7);
  const ValueTable calibrated = load_table(dir / "calibrated_table.json");
  CHECK(validate_table(calibrated).empty());

  // The report command re-renders the stored summary.
  const Result rendered = invoke({"report", (dir / "summary.json").string()});
  REQUIRE(rendered.code == 0);
  CHECK(read_text_file(dir / "summary.txt").find(rendered.out) != std::string::npos);
}

TEST_CASE("case: reruns are byte-identical apart from the manifest") {
  const fs::path a = scratch("det_a");
  const fs::path b = scratch("det_b");
  const std::vector<std::string> base = {"case", "--dataset", dataset93(), "--mapping", kMapping,
                                         "--table", "preset:synthetic", "--protocol", "c2",
                                         "--alpha", "0.5", "--epochs", "20", "--seed", "3", "--out"};
  std::vector<std::string> args_a = base;
  args_a.push_back(a.string());
  std::vector<std::string> args_b = base;
  args_b.push_back(b.string());
  REQUIRE(invoke(args_a).code == 0);
  REQUIRE(invoke(args_b).code == 0);
  int compared = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    const std::string name = entry.path().filename().string();
    if (name == "manifest.json") continue;
    CHECK_MESSAGE(read_text_file(entry.path()) == read_text_file(b / name), name);
    ++compared;
  }
  CHECK(compared == 7);
  const json ma = json::parse(read_text_file(a / "manifest.json"));
  const json mb = json::parse(read_text_file(b / "manifest.json"));
  CHECK(ma["config_digest"] == mb["config_digest"]);
}

TEST_CASE("case: config file and flags, last one wins") {
  const fs::path dir = scratch("config");
  write_text_file(dir / "config.json", R"({"alpha": 0.0, "epochs": 2, "protocol": "c2"})");
  const std::string config = (dir / "config.json").string();
  auto learning_rate = [&](std::vector<std::string> extra) {
    std::vector<std::string> args = {"case", "--dataset", dataset93(), "--mapping", kMapping,
                                     "--table", "preset:synthetic", "--out", (dir / "run").string()};
    args.insert(args.end(), extra.begin(), extra.end());
    REQUIRE(invoke(args).code == 0);
    const json m = json::parse(read_text_file(dir / "run" / "manifest.json"));
    CHECK(m["config"]["max_epochs"] == 2);
    return m["config"]["learning_rate"].get<double>();
  };
  CHECK(learning_rate({"--config", config, "--alpha", "0.1"}) == 0.1);
  CHECK(learning_rate({"--alpha", "0.1", "--config", config}) == 0.0);

  write_text_file(dir / "bad.json", R"({"alpah": 1})");
  const Result bad = invoke({"case", "--dataset", dataset93(), "--mapping", kMapping, "--table",
                             "preset:synthetic", "--config",
                             (dir / "bad.json").string(), "--out", (dir / "bad").string()});
  CHECK(bad.code == cli::kExitInvalid);
  CHECK(bad.err.find("alpah") != std::string::npos);
}

TEST_CASE("case: a failing stage leaves a failure manifest and no reports") {
  const fs::path dir = scratch("fail");
  const fs::path small = dir / "small";
  REQUIRE(invoke({"synth", "--mapping", kMapping, "--count", "10", "--out", small.string()}).code == 0);
  const Result r = invoke({"case", "--dataset", (small / "dataset.csv").string(), "--mapping", kMapping,
                           "--table", "preset:synthetic", "--protocol", "c4-1", "--out", (dir / "out").string()});
  CHECK(r.code == cli::kExitInvalid);
  CHECK(r.err.find("[split]") != std::string::npos);
  const json m = json::parse(read_text_file(dir / "out" / "manifest.json"));
  CHECK(m["status"] == "failed");
  CHECK(m["stage"] == "split");
  CHECK_FALSE(fs::exists(dir / "out" / "summary.txt"));

  const Result missing = invoke({"case", "--dataset", (dir / "none.csv").string(), "--mapping", kMapping,
                                 "--table", "preset:synthetic",
                                 "--out", (dir / "out2").string()});
  CHECK(missing.code == cli::kExitMissingFile);
  CHECK(json::parse(read_text_file(dir / "out2" / "manifest.json"))["stage"] == "load");
}

TEST_CASE("transfer, calibrate and evaluate chain") {
  const fs::path dir = scratch("chain");
  REQUIRE(invoke({"make-table", "--preset", "synthetic", "--perturb", "0.2", "--seed", "4", "--out",
                  (dir / "start").string()})
              .code == 0);
  REQUIRE(invoke({"transfer", "--dataset", dataset93(), "--mapping", kMapping, "--out", (dir / "projects").string()})
              .code == 0);
  const std::string projects = (dir / "projects" / "projects.json").string();
  CHECK(load_projects(projects).size() == 93);
  const std::string start = (dir / "start" / "table.json").string();
  REQUIRE(invoke({"calibrate", "--projects", projects, "--table", start, "--alpha", "0.5", "--epochs", "20", "--out",
                  (dir / "cal").string()})
              .code == 0);
  const std::string calibrated = (dir / "cal" / "calibrated_table.json").string();
  const Result ev = invoke({"evaluate", "--projects", projects, "--table", start, "--calibrated", calibrated,
                            "--out", (dir / "eval").string()});
  REQUIRE(ev.code == 0);
  CHECK(ev.out.find("Calibrated") != std::string::npos);
  CHECK(fs::exists(dir / "eval" / "manifest.json"));
  const Result csv = invoke({"report", (dir / "eval" / "summary.json").string(), "--format", "csv"});
  CHECK(csv.out.rfind("set,metric,baseline,calibrated,change\n", 0) == 0);
}

TEST_CASE("output directory falls back to the environment") {
  const fs::path dir = scratch("env");
  ::setenv("SEERNF_OUTPUT_DIR", dir.string().c_str(), 1);
  const Result r = invoke({"make-table", "--preset", "identity"});
  ::unsetenv("SEERNF_OUTPUT_DIR");
  REQUIRE(r.code == 0);
  CHECK(fs::exists(dir / "table.json"));
  CHECK(fs::exists(dir / "manifest.json"));
}
