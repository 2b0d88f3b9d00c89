// Acceptance suite: one test case per release criterion, each printing a
// single PASS/FAIL line with its runtime.
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <vector>

#include "qtg/cli.hpp"
#include "qtg/exact.hpp"
#include "qtg/greedy.hpp"
#include "qtg/instance.hpp"
#include "qtg/resources.hpp"
#include "qtg/rng.hpp"
#include "qtg/search.hpp"
#include "qtg/tree.hpp"

using namespace qtg;
namespace fs = std::filesystem;

namespace {

class Criterion {
public:
  Criterion(int number, const char* name)
      : number_(number), name_(name), start_(std::chrono::steady_clock::now()) {}

  void note_failure(const std::string& detail) {
    ok_ = false;
    if (first_failure_.empty()) first_failure_ = detail;
  }

  bool finish() {
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                      start_)
            .count();
    std::printf("[acceptance] criterion %d (%s): %s  [%.1fs]\n", number_,
                name_, ok_ ? "PASS" : "FAIL", seconds);
    if (!ok_) std::printf("  first failure: %s\n", first_failure_.c_str());
    std::fflush(stdout);
    return ok_;
  }

private:
  int number_;
  const char* name_;
  std::chrono::steady_clock::time_point start_;
  bool ok_ = true;
  std::string first_failure_;
};

KnapsackInstance random_instance(std::uint32_t seed, std::size_t n,
                                 double fraction = 0.5) {
  GenerateConfig config;
  config.item_count = n;
  config.capacity_fraction = fraction;
  config.seed = seed;
  return generate_instance(config);
}

std::vector<std::uint8_t> random_reference(std::uint32_t seed, std::size_t n) {
  Mt19937 rng(seed);
  std::vector<std::uint8_t> bits(n);
  for (auto& bit : bits)
    bit = static_cast<std::uint8_t>(rng.uniform_in_range(0, 1));
  return bits;
}

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run_command(std::vector<std::string> args) {
  std::vector<const char*> argv;
  argv.push_back("qtg");
  for (const auto& arg : args) argv.push_back(arg.c_str());
  std::ostringstream out, err;
  const int code =
      run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return CliResult{code, out.str(), err.str()};
}

} // namespace

TEST_CASE("criterion 1: probability conservation") {
  Criterion criterion(1, "probability conservation");
  const double biases[] = {0.0, 1.0, 2.0};
  for (std::uint32_t i = 0; i < 200; ++i) {
    const std::size_t n = 2 + i % 17; // up to 18 items
    const KnapsackInstance instance = random_instance(1000 + i, n);
    BiasConfig bias;
    bias.bias = biases[i % 3];
    bias.reference = random_reference(2000 + i, n);
    const StateSet set = build_state_set(instance, bias, -1, false);
    if (std::abs(set.total_probability - 1.0) > 1e-12)
      criterion.note_failure("instance " + std::to_string(i) + ": q_T = " +
                             std::to_string(set.total_probability));
  }
  CHECK(criterion.finish());
}

TEST_CASE("criterion 2: simulator equals brute-force oracle") {
  Criterion criterion(2, "simulator-vs-oracle equivalence");
  const double biases[] = {0.0, 1.0, 2.0, 7.5};
  for (std::uint32_t i = 0; i < 100; ++i) {
    const std::size_t n = 2 + i % 11; // up to 12 items
    const KnapsackInstance instance = random_instance(3000 + i, n);
    BiasConfig bias;
    bias.bias = biases[i % 4];
    bias.reference = random_reference(4000 + i, n);
    const std::int64_t threshold =
        i % 4 == 0 ? -1 : static_cast<std::int64_t>(i % 30);
    const StateSet built = build_state_set(instance, bias, threshold, false);
    const StateSet brute = brute_force_state_set(instance, bias, threshold);
    if (built.states.size() != brute.states.size()) {
      criterion.note_failure("instance " + std::to_string(i) +
                             ": state count mismatch");
      continue;
    }
    for (std::size_t k = 0; k < built.states.size(); ++k) {
      const auto& a = built.states[k];
      const auto& b = brute.states[k];
      if (a.path != b.path || a.profit != b.profit ||
          a.residual_capacity != b.residual_capacity ||
          std::abs(a.probability - b.probability) > 1e-12) {
        criterion.note_failure("instance " + std::to_string(i) + ", state " +
                               std::to_string(k));
        break;
      }
    }
  }
  CHECK(criterion.finish());
}

TEST_CASE("criterion 3: amplification factor correctness") {
  Criterion criterion(3, "amplification correctness");
  Mt19937 rng(55);
  for (int i = 0; i < 1000; ++i) {
    const double q = rng.next_real53();
    const std::uint64_t j = rng.uniform_in_range(0, 64);
    const double factor = amplification_factor(q, j);
    const double amplified = q * factor;
    if (amplified < 0.0 || amplified > 1.0 + 1e-12)
      criterion.note_failure("amplified mass out of range at q = " +
                             std::to_string(q));
    const double angle =
        (2.0 * static_cast<double>(j) + 1.0) * std::asin(std::sqrt(q));
    const double expected = std::sin(angle) * std::sin(angle);
    if (std::abs(amplified - expected) > 1e-12)
      criterion.note_failure("closed form mismatch at q = " +
                             std::to_string(q) + ", j = " + std::to_string(j));
    if (amplification_factor(q, 0) != 1.0)
      criterion.note_failure("factor(q, 0) != 1");
  }
  for (std::uint64_t j = 0; j <= 64; ++j)
    if (amplification_factor(1.0, j) != 1.0)
      criterion.note_failure("factor(1, j) != 1");
  CHECK(criterion.finish());
}

TEST_CASE("criterion 4: end-to-end optimality with defaults") {
  Criterion criterion(4, "end-to-end optimality");
  int matches = 0;
  int greedy_optimal = 0;
  int greedy_optimal_matches = 0;
  for (std::uint32_t seed = 1; seed <= 100; ++seed) {
    const std::size_t n = 12 + (seed - 1) % 7; // n in [12, 18]
    const KnapsackInstance instance = random_instance(seed, n);
    SearchConfig config; // defaults: c = 1.2, M = 64*ceil(sqrt(2^n))
    config.seed = seed;
    const SearchTrace trace = qmaxsearch(instance, config);
    const Assignment optimum = exact_optimum(instance);
    const bool match = trace.result.profit == optimum.profit;
    if (match) ++matches;
    if (integer_greedy(instance).profit == optimum.profit) {
      ++greedy_optimal;
      if (match)
        ++greedy_optimal_matches;
      else
        criterion.note_failure("greedy-optimal instance missed, seed " +
                               std::to_string(seed));
    }
  }
  std::printf("  optimal on %d/100 runs; greedy already optimal on %d, all "
              "found: %s\n",
              matches, greedy_optimal,
              greedy_optimal == greedy_optimal_matches ? "yes" : "no");
  if (matches < 90)
    criterion.note_failure("only " + std::to_string(matches) +
                           "/100 runs reached the optimum");
  CHECK(criterion.finish());
}

TEST_CASE("criterion 5: worked resource example and enumerator sweep") {
  Criterion criterion(5, "worked resource example");
  const KnapsackInstance worked =
      parse_instance("4\n7\n6 2\n2 2\n1 1\n2 5\n");
  const std::int64_t bound = profit_register_bound(worked, false);
  if (bound != 11) criterion.note_failure("profit bound != 11");

  // Golden values, recomputed by the independent gate enumerator before the
  // closed forms are trusted.
  const GateEnumeration enumeration = enumerate_gates(worked, bound);
  const QtgBreakdown breakdown = qtg_breakdown(worked, bound);
  if (enumeration.gates.size() != breakdown.qtg.gates)
    criterion.note_failure("enumerator and formula disagree on gates");
  if (enumeration.depth != breakdown.qtg.cycles)
    criterion.note_failure("enumerator and formula disagree on cycles");
  if (breakdown.qubits_total != 17) criterion.note_failure("qubits != 17");
  if (breakdown.qtg.gates != 111) criterion.note_failure("gates != 111");
  if (breakdown.qtg.cycles != 70) criterion.note_failure("cycles != 70");
  if (comparison_gates(ComparisonKind::eq0, 0, breakdown.registers.profit) !=
      7)
    criterion.note_failure("zero-check gates != 7");
  if (comparison_gates(ComparisonKind::gt, 6, breakdown.registers.profit) !=
      8)
    criterion.note_failure("threshold-oracle gates != 8");

  const double fractions[] = {0.25, 0.5, 0.75, 1.0};
  for (std::uint32_t i = 0; i < 500; ++i) {
    const std::size_t n = 1 + i % 6;
    GenerateConfig config;
    config.item_count = n;
    config.profit_max = 60;
    config.cost_max = 60;
    config.capacity_fraction = fractions[i % 4];
    config.seed = 5000 + i;
    const KnapsackInstance instance = generate_instance(config);
    const std::int64_t p = profit_register_bound(instance, i % 2 == 0);
    const QtgBreakdown formulas = qtg_breakdown(instance, p);
    const GateEnumeration gates = enumerate_gates(instance, p);
    if (gates.gates.size() != formulas.qtg.gates ||
        gates.depth != formulas.qtg.cycles) {
      criterion.note_failure("sweep instance " + std::to_string(i) +
                             " disagrees");
      break;
    }
  }
  CHECK(criterion.finish());
}

TEST_CASE("criterion 6: measurement statistics at one eighth mass") {
  Criterion criterion(6, "measurement statistics");
  const KnapsackInstance instance = parse_instance("3\n8\n6 5\n4 4\n4 4\n");
  BiasConfig bias;
  bias.reference = {0, 0, 0};
  const StateSet set = build_state_set(instance, bias, 6, true);
  if (set.states.size() != 1 || set.total_probability != 0.125)
    criterion.note_failure("expected the single state at q_T = 1/8");

  constexpr int kDraws = 100000;
  const double expected = 0.78125; // sin^2(3*arcsin(sqrt(1/8))) = 25/32
  Mt19937 rng(2026);
  int hits = 0;
  for (int i = 0; i < kDraws; ++i)
    if (simulate_measurement(set, 1, rng).has_value()) ++hits;
  const double freq = static_cast<double>(hits) / kDraws;
  const double sigma = std::sqrt(expected * (1.0 - expected) / kDraws);
  std::printf("  frequency %.5f vs %.5f (3 sigma = %.5f)\n", freq, expected,
              3.0 * sigma);
  if (std::abs(freq - expected) > 3.0 * sigma)
    criterion.note_failure("frequency outside three standard errors");
  CHECK(criterion.finish());
}

TEST_CASE("criterion 7: repeated invocations are identical modulo timing") {
  Criterion criterion(7, "determinism");
  const fs::path dir = fs::temp_directory_path() / "qtg_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir / "instances");
  {
    std::ofstream(dir / "instances" / "a.kp") << "3\n8\n6 5\n4 4\n4 4\n";
    std::ofstream(dir / "instances" / "b.kp") << "4\n7\n6 2\n2 2\n1 1\n2 5\n";
    std::ofstream(dir / "instances" / "c.kp")
        << serialize_instance(random_instance(12, 12));
  }

  const std::regex elapsed("\"elapsed_ms\": [^,\\n}]+");
  const auto strip = [&](const std::string& text) {
    return std::regex_replace(text, elapsed, "\"elapsed_ms\": X");
  };
  const std::string instance_a = (dir / "instances" / "a.kp").string();
  const auto sim1 = run_command(
      {"simulate", "--instance", instance_a, "--seed", "9", "--verify"});
  const auto sim2 = run_command(
      {"simulate", "--instance", instance_a, "--seed", "9", "--verify"});
  if (sim1.code != sim2.code || strip(sim1.out) != strip(sim2.out))
    criterion.note_failure("simulate differs across identical invocations");

  const auto strip_millis = [](const std::string& csv) {
    std::istringstream in(csv);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line)) {
      std::vector<std::string> fields;
      std::istringstream fields_in(line);
      std::string field;
      while (std::getline(fields_in, field, ',')) fields.push_back(field);
      if (fields.size() >= 12) fields[11] = "X";
      for (std::size_t i = 0; i < fields.size(); ++i)
        out << (i ? "," : "") << fields[i];
      out << "\n";
    }
    return out.str();
  };
  const auto bench1 = run_command(
      {"benchmark", (dir / "instances").string(), "--seeds", "3"});
  const auto bench2 = run_command(
      {"benchmark", (dir / "instances").string(), "--seeds", "3"});
  if (bench1.code != bench2.code ||
      strip_millis(bench1.out) != strip_millis(bench2.out))
    criterion.note_failure("benchmark differs across identical invocations");
  CHECK(criterion.finish());
}
