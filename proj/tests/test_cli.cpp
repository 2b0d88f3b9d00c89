#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "qtg/cli.hpp"
#include "qtg/instance.hpp"

using namespace qtg;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

CliResult run(std::vector<std::string> args) {
  std::vector<const char*> argv;
  argv.push_back("qtg");
  for (const auto& arg : args) argv.push_back(arg.c_str());
  std::ostringstream out, err;
  CliResult result;
  result.code =
      run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  result.out = out.str();
  result.err = err.str();
  return result;
}

fs::path temp_dir() {
  const fs::path dir = fs::temp_directory_path() / "qtg_cli_tests";
  fs::create_directories(dir);
  return dir;
}

std::string write_instance(const std::string& name, const std::string& text) {
  const fs::path path = temp_dir() / name;
  std::ofstream file(path, std::ios::binary);
  file << text;
  return path.string();
}

std::string strip_elapsed(const std::string& text) {
  static const std::regex pattern("\"elapsed_ms\": [^,\\n}]+");
  return std::regex_replace(text, pattern, "\"elapsed_ms\": X");
}

std::string strip_millis_column(const std::string& csv) {
  std::istringstream in(csv);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> fields;
    std::istringstream fields_in(line);
    std::string field;
    while (std::getline(fields_in, field, ',')) fields.push_back(field);
    if (fields.size() >= 12) fields[11] = "X"; // millis
    for (std::size_t i = 0; i < fields.size(); ++i)
      out << (i ? "," : "") << fields[i];
    out << "\n";
  }
  return out.str();
}

} // namespace

TEST_CASE("generate emits a parseable instance and honours the seed") {
  const auto a = run({"generate", "--n", "6", "--seed", "12"});
  REQUIRE(a.code == kExitOk);
  const KnapsackInstance instance = parse_instance(a.out);
  CHECK(instance.size() == 6);

  const auto b = run({"generate", "--n", "6", "--seed", "12"});
  CHECK(a.out == b.out);
  const auto c = run({"generate", "--n", "6", "--seed", "13"});
  CHECK(a.out != c.out);
}

TEST_CASE("generate falls back to QTG_SEED") {
  setenv("QTG_SEED", "77", 1);
  const auto from_env = run({"generate", "--n", "5"});
  unsetenv("QTG_SEED");
  const auto explicit_seed = run({"generate", "--n", "5", "--seed", "77"});
  CHECK(from_env.out == explicit_seed.out);
}

TEST_CASE("simulate verifies against the exact solver") {
  const std::string path = write_instance("ex3.kp", "3\n8\n6 5\n4 4\n4 4\n");
  const auto result =
      run({"simulate", "--instance", path, "--seed", "7", "--verify"});
  REQUIRE(result.code == kExitOk);
  const auto report = nlohmann::json::parse(result.out);
  CHECK(report["schema"] == "qtg.run-report/1");
  CHECK(report["result"]["profit"] == 8);
  CHECK(report["result"]["bits"] == "011");
  CHECK(report["oracle"]["optimum"] == 8);
  CHECK(report["oracle"]["match"] == true);
  CHECK(report["thresholds"] == nlohmann::json::array({6, 8}));
}

TEST_CASE("simulate reports profit 0 when nothing fits") {
  const std::string path = write_instance("nofit.kp", "2\n3\n5 9\n5 9\n");
  const auto result = run({"simulate", "--instance", path, "--seed", "1"});
  REQUIRE(result.code == kExitOk);
  const auto report = nlohmann::json::parse(result.out);
  CHECK(report["result"]["profit"] == 0);
}

TEST_CASE("simulate twice with the same flags is identical modulo timing") {
  const std::string path = write_instance("det.kp", "3\n8\n6 5\n4 4\n4 4\n");
  const auto a = run({"simulate", "--instance", path, "--seed", "5"});
  const auto b = run({"simulate", "--instance", path, "--seed", "5"});
  CHECK(strip_elapsed(a.out) == strip_elapsed(b.out));
  const auto c = run({"simulate", "--instance", path, "--seed", "6"});
  CHECK(strip_elapsed(a.out) != strip_elapsed(c.out));
}

TEST_CASE("simulate can dump per-threshold state sets") {
  const std::string path = write_instance("dump.kp", "3\n8\n6 5\n4 4\n4 4\n");
  const auto result = run(
      {"simulate", "--instance", path, "--seed", "7", "--dump-states"});
  REQUIRE(result.code == kExitOk);
  std::istringstream err(result.err);
  std::string line;
  int documents = 0;
  while (std::getline(err, line)) {
    if (line.empty()) continue;
    const auto doc = nlohmann::json::parse(line);
    CHECK(doc["schema"] == "qtg.state-set/1");
    ++documents;
  }
  CHECK(documents >= 2); // at least the greedy threshold and the final one
}

TEST_CASE("verification mismatch exits with code 2") {
  // A huge bias away from the optimum plus a tiny cutoff starves the
  // search; greedy (profit 6) is then reported although 8 is optimal.
  const std::string path = write_instance("miss.kp", "3\n8\n6 5\n4 4\n4 4\n");
  const auto result = run({"simulate", "--instance", path, "--seed", "1",
                           "--verify", "--bias", "1000", "--cutoff-M", "3"});
  CHECK(result.code == kExitMismatch);
  const auto report = nlohmann::json::parse(result.out);
  CHECK(report["oracle"]["match"] == false);
}

TEST_CASE("estimate reproduces the worked example") {
  const std::string path =
      write_instance("ex4.kp", "4\n7\n6 2\n2 2\n1 1\n2 5\n");
  const auto result = run({"estimate", "--instance", path});
  REQUIRE(result.code == kExitOk);
  const auto estimate = nlohmann::json::parse(result.out);
  CHECK(estimate["schema"] == "qtg.estimate/1");
  CHECK(estimate["qubits_total"] == 17);
  CHECK(estimate["qtg"]["gates"] == 111);
  CHECK(estimate["qtg"]["cycles"] == 70);
  CHECK(estimate["profit_bound"] == 11);

  const auto dantzig = run(
      {"estimate", "--instance", path, "--profit-bound", "dantzig"});
  CHECK(nlohmann::json::parse(dantzig.out)["profit_bound"] == 9);
}

TEST_CASE("estimate on the minimal instance") {
  const std::string path = write_instance("min.kp", "1\n1\n1 1\n");
  const auto result = run({"estimate", "--instance", path});
  REQUIRE(result.code == kExitOk);
  const auto estimate = nlohmann::json::parse(result.out);
  CHECK(estimate["qubits_total"] == 4);
  CHECK(estimate["qtg"]["gates"] == 6);
  CHECK(estimate["qtg"]["cycles"] == 4);
}

TEST_CASE("estimate --paper-literal shrinks power-of-two registers") {
  const std::string path = write_instance("pow2.kp", "3\n8\n6 5\n4 4\n4 4\n");
  const auto standard = run({"estimate", "--instance", path});
  const auto literal =
      run({"estimate", "--instance", path, "--paper-literal"});
  const auto std_doc = nlohmann::json::parse(standard.out);
  const auto lit_doc = nlohmann::json::parse(literal.out);
  CHECK(std_doc["registers"]["capacity"] == 4);
  CHECK(lit_doc["registers"]["capacity"] == 3);
}

TEST_CASE("benchmark over a directory") {
  const fs::path dir = temp_dir() / "bench";
  fs::remove_all(dir);
  fs::create_directories(dir);

  SUBCASE("empty directory gives a header-only CSV") {
    const auto result = run({"benchmark", dir.string()});
    REQUIRE(result.code == kExitOk);
    CHECK(result.out ==
          "schema,file,seed,n,optimum,result,match,m_total,gates,cycles,"
          "qubits,millis,error\n");
  }

  SUBCASE("rows per instance x seed, deterministic modulo timing") {
    std::ofstream(dir / "a.kp") << "3\n8\n6 5\n4 4\n4 4\n";
    std::ofstream(dir / "b.kp") << "2\n3\n5 2\n4 2\n";
    std::ofstream(dir / "broken.kp") << "not an instance\n";
    const auto a = run({"benchmark", dir.string(), "--seeds", "2"});
    REQUIRE(a.code == kExitOk);

    std::istringstream lines(a.out);
    std::string line;
    std::vector<std::string> rows;
    while (std::getline(lines, line)) rows.push_back(line);
    REQUIRE(rows.size() == 1 + 6); // header + 3 files x 2 seeds
    CHECK(rows[1].find("a.kp,1") != std::string::npos);
    CHECK(rows[2].find("a.kp,2") != std::string::npos);
    CHECK(rows[5].find("broken.kp,1") != std::string::npos);
    // The malformed file lands in the error column, the run continues.
    CHECK(rows[5].find("malformed") != std::string::npos);

    const auto b = run({"benchmark", dir.string(), "--seeds", "2"});
    CHECK(strip_millis_column(a.out) == strip_millis_column(b.out));
  }
}

TEST_CASE("help exits cleanly") {
  const auto top = run({"--help"});
  CHECK(top.code == kExitOk);
  CHECK(top.out.find("simulate") != std::string::npos);
  const auto sub = run({"simulate", "--help"});
  CHECK(sub.code == kExitOk);
  CHECK(sub.out.find("--verify") != std::string::npos);
}

TEST_CASE("negative bias clamps to the unbiased gate") {
  const std::string path = write_instance("clamp.kp", "3\n8\n6 5\n4 4\n4 4\n");
  const auto negative = run(
      {"simulate", "--instance", path, "--seed", "4", "--bias", "-3"});
  const auto zero =
      run({"simulate", "--instance", path, "--seed", "4", "--bias", "0"});
  REQUIRE(negative.code == kExitOk);
  CHECK(strip_elapsed(negative.out) == strip_elapsed(zero.out));
}

TEST_CASE("benchmark on a missing directory is an io error") {
  const auto result = run({"benchmark", "/nonexistent/dir"});
  CHECK(result.code == kExitIo);
}

TEST_CASE("exit codes distinguish failure classes") {
  SUBCASE("missing file is an io error") {
    const auto result =
        run({"simulate", "--instance", "/nonexistent/path.kp"});
    CHECK(result.code == kExitIo);
    CHECK(result.err.find("io error") != std::string::npos);
  }
  SUBCASE("malformed instance is a parse error") {
    const std::string path = write_instance("bad.kp", "2\n5\nbogus\n");
    const auto result = run({"simulate", "--instance", path});
    CHECK(result.code == kExitParse);
    CHECK(result.err.find("line 3") != std::string::npos);
  }
  SUBCASE("exhausted work budget is a budget error") {
    const std::string path = write_instance("big.kp", "3\n8\n6 5\n4 4\n4 4\n");
    const auto result =
        run({"simulate", "--instance", path, "--dp-budget", "4"});
    CHECK(result.code == kExitBudget);
  }
  SUBCASE("unknown subcommand is a usage error") {
    const auto result = run({"frobnicate"});
    CHECK(result.code != kExitOk);
  }
}
