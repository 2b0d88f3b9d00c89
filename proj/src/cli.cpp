#include "qtg/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qtg/errors.hpp"
#include "qtg/exact.hpp"
#include "qtg/greedy.hpp"
#include "qtg/instance.hpp"
#include "qtg/report.hpp"
#include "qtg/resources.hpp"
#include "qtg/search.hpp"
#include "qtg/tree.hpp"

namespace qtg {

namespace {

namespace fs = std::filesystem;

std::uint32_t fallback_seed() {
  if (const char* env = std::getenv("QTG_SEED")) {
    char* end = nullptr;
    const unsigned long value = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0') return static_cast<std::uint32_t>(value);
  }
  return 1;
}

KnapsackInstance load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_instance(buffer.str());
}

struct SharedFlags {
  std::uint32_t seed = 0;
  bool seed_given = false;
  double bias = -1.0;
  bool bias_given = false;
  std::size_t delta_target = 0;
  double growth = 1.2;
  std::uint64_t cutoff = 0;
  bool tight_profit_bound = false;
  std::size_t state_cap = kDefaultStateCap;
  std::uint64_t dp_budget = kDefaultDpBudget;
};

void add_shared_flags(CLI::App* cmd, SharedFlags& flags) {
  cmd->add_option("--seed", flags.seed, "PRNG seed (default: QTG_SEED or 1)")
      ->each([&flags](const std::string&) { flags.seed_given = true; });
  cmd->add_option("--bias", flags.bias,
                  "fixed branching bias b >= 0 (default: from --delta-target)")
      ->each([&flags](const std::string&) { flags.bias_given = true; });
  cmd->add_option("--delta-target", flags.delta_target,
                  "Hamming distance the bias aims at (default: max(1, n/10))");
  cmd->add_option("--growth-c", flags.growth,
                  "schedule growth constant, 1 < c < 2");
  cmd->add_option("--cutoff-M", flags.cutoff,
                  "total iteration budget per search (default: 64*ceil(sqrt(2^n)))");
  cmd->add_flag("--tight-profit-bound", flags.tight_profit_bound,
                "size the profit register with the fractional-greedy bound");
  cmd->add_option("--state-cap", flags.state_cap,
                  "abort once a tree layer exceeds this many states");
  cmd->add_option("--dp-budget", flags.dp_budget,
                  "abort once the exact solver exceeds this many cell updates");
}

SearchConfig make_search_config(const SharedFlags& flags) {
  SearchConfig config;
  config.growth = flags.growth;
  config.cutoff = flags.cutoff;
  config.delta_target = flags.delta_target;
  // Negative biases clamp to the unbiased gate.
  if (flags.bias_given) config.bias_override = std::max(0.0, flags.bias);
  config.seed = flags.seed_given ? flags.seed : fallback_seed();
  config.tight_profit_bound = flags.tight_profit_bound;
  config.state_cap = flags.state_cap;
  config.dp_budget = flags.dp_budget;
  return config;
}

struct SimulateOutcome {
  Json report;
  bool mismatch = false;
};

SimulateOutcome simulate_instance(const KnapsackInstance& instance,
                                  const SearchConfig& config, bool verify,
                                  const StateSetObserver& observer) {
  const auto start = std::chrono::steady_clock::now();
  SearchTrace trace = qmaxsearch(instance, config, observer);
  const auto stop = std::chrono::steady_clock::now();
  const double elapsed_ms =
      std::chrono::duration<double, std::milli>(stop - start).count();

  std::optional<OracleCheck> oracle;
  if (verify) {
    const Assignment optimum = exact_optimum(instance, config.dp_budget);
    oracle = OracleCheck{optimum.profit, optimum.profit == trace.result.profit};
  }
  SimulateOutcome outcome;
  outcome.report = run_report_json(trace, oracle, elapsed_ms);
  outcome.mismatch = oracle.has_value() && !oracle->match;
  return outcome;
}

int cmd_simulate(const std::string& instance_path, const SharedFlags& flags,
                 bool verify, bool dump_states, std::ostream& out,
                 std::ostream& err) {
  const KnapsackInstance instance = load_instance(instance_path);
  const SearchConfig config = make_search_config(flags);
  StateSetObserver observer;
  if (dump_states) {
    const std::size_t n = instance.size();
    observer = [&err, n](std::int64_t, const StateSet& set) {
      err << state_set_json(set, n).dump() << "\n";
    };
  }
  const SimulateOutcome outcome =
      simulate_instance(instance, config, verify, observer);
  out << outcome.report.dump(2) << "\n";
  return outcome.mismatch ? kExitMismatch : kExitOk;
}

int cmd_estimate(const std::string& instance_path, const std::string& bound,
                 bool tight, bool paper_literal, std::ostream& out) {
  const KnapsackInstance instance = load_instance(instance_path);
  const std::int64_t profit_bound =
      profit_register_bound(instance, tight || bound == "dantzig");
  const SizingMode mode = paper_literal ? SizingMode::paper_literal
                                        : SizingMode::representable;
  out << estimate_json(instance, qtg_breakdown(instance, profit_bound, mode))
          .dump(2)
      << "\n";
  return kExitOk;
}

int cmd_generate(const GenerateConfig& config, const std::string& output,
                 std::ostream& out) {
  const KnapsackInstance instance = generate_instance(config);
  const std::string text = serialize_instance(instance);
  if (output.empty()) {
    out << text;
  } else {
    std::ofstream file(output, std::ios::binary);
    if (!file) throw std::ios_base::failure("cannot write '" + output + "'");
    file << text;
  }
  return kExitOk;
}

std::string csv_escape(std::string text) {
  std::replace(text.begin(), text.end(), ',', ';');
  std::replace(text.begin(), text.end(), '\n', ' ');
  return text;
}

int cmd_benchmark(const std::string& directory, std::uint32_t seeds,
                  const SharedFlags& flags, const std::string& csv_path,
                  std::ostream& out, std::ostream& err) {
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(directory))
    if (entry.is_regular_file()) files.push_back(entry.path().string());
  std::sort(files.begin(), files.end());

  struct Job {
    std::string file;
    std::uint32_t seed;
    std::string row;
  };
  std::vector<Job> jobs;
  for (const auto& file : files)
    for (std::uint32_t seed = 1; seed <= seeds; ++seed)
      jobs.push_back(Job{file, seed, {}});

  const std::ptrdiff_t total = static_cast<std::ptrdiff_t>(jobs.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < total; ++i) {
    Job& job = jobs[static_cast<std::size_t>(i)];
    std::ostringstream row;
    row << "qtg.benchmark/1,"
        << csv_escape(fs::path(job.file).filename().string()) << ","
        << job.seed << ",";
    try {
      const KnapsackInstance instance = load_instance(job.file);
      SearchConfig config = make_search_config(flags);
      config.seed = job.seed;
      const auto start = std::chrono::steady_clock::now();
      const SearchTrace trace = qmaxsearch(instance, config);
      const auto stop = std::chrono::steady_clock::now();
      const double millis =
          std::chrono::duration<double, std::milli>(stop - start).count();
      const Assignment optimum = exact_optimum(instance, config.dp_budget);
      row << instance.size() << "," << optimum.profit << ","
          << trace.result.profit << ","
          << (optimum.profit == trace.result.profit ? 1 : 0) << ","
          << trace.m_total_final << "," << trace.tallies.gates << ","
          << trace.tallies.cycles << "," << trace.tallies.qubits << ","
          << millis << ",";
    } catch (const std::exception& e) {
      row << ",,,,,,,,," << csv_escape(e.what());
    }
    job.row = row.str();
  }

  std::ostringstream csv;
  csv << "schema,file,seed,n,optimum,result,match,m_total,gates,cycles,qubits,"
         "millis,error\n";
  for (const auto& job : jobs) csv << job.row << "\n";

  if (csv_path.empty()) {
    out << csv.str();
  } else {
    std::ofstream file(csv_path, std::ios::binary);
    if (!file) throw std::ios_base::failure("cannot write '" + csv_path + "'");
    file << csv.str();
    err << "wrote " << jobs.size() << " rows to " << csv_path << "\n";
  }
  return kExitOk;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"High-level simulator and resource estimator for "
               "tree-generator amplitude-amplification knapsack search"};
  app.require_subcommand(1);

  // generate
  auto* generate = app.add_subcommand("generate", "write a random instance");
  GenerateConfig gen_config;
  std::string gen_output;
  SharedFlags gen_flags;
  generate->add_option("--n", gen_config.item_count, "item count")->required();
  generate->add_option("--profit-min", gen_config.profit_min, "profit range lower bound");
  generate->add_option("--profit-max", gen_config.profit_max, "profit range upper bound");
  generate->add_option("--cost-min", gen_config.cost_min, "cost range lower bound");
  generate->add_option("--cost-max", gen_config.cost_max, "cost range upper bound");
  generate->add_option("--capacity-fraction", gen_config.capacity_fraction,
                       "capacity as a fraction of total cost, in (0,1]");
  generate->add_option("--output,-o", gen_output, "output file (default: stdout)");
  add_shared_flags(generate, gen_flags);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "run the search on an instance");
  std::string sim_instance;
  bool verify = false;
  bool dump_states = false;
  SharedFlags sim_flags;
  simulate->add_option("--instance,-i", sim_instance, "instance file")->required();
  simulate->add_flag("--verify", verify, "cross-check the result against the exact solver");
  simulate->add_flag("--dump-states", dump_states,
                     "emit each threshold's state set as JSON on stderr");
  add_shared_flags(simulate, sim_flags);

  // estimate
  auto* estimate = app.add_subcommand("estimate", "closed-form circuit resource estimate");
  std::string est_instance;
  std::string est_bound = "sum";
  bool paper_literal = false;
  SharedFlags est_flags;
  estimate->add_option("--instance,-i", est_instance, "instance file")->required();
  estimate->add_option("--profit-bound", est_bound, "profit bound: sum | dantzig")
      ->check(CLI::IsMember({"sum", "dantzig"}));
  estimate->add_flag("--paper-literal", paper_literal,
                     "evaluate the printed ceil-log2 register formulas verbatim");
  add_shared_flags(estimate, est_flags);

  // benchmark
  auto* benchmark = app.add_subcommand("benchmark", "run a directory of instances to CSV");
  std::string bench_dir;
  std::uint32_t bench_seeds = 1;
  std::string bench_csv;
  SharedFlags bench_flags;
  benchmark->add_option("directory", bench_dir, "directory of instance files")->required();
  benchmark->add_option("--seeds", bench_seeds, "seeds 1..k per instance");
  benchmark->add_option("--csv", bench_csv, "CSV output file (default: stdout)");
  add_shared_flags(benchmark, bench_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream usage;
    const int code = app.exit(e, usage, usage);
    (code == 0 ? out : err) << usage.str();
    return code;
  }

  try {
    if (generate->parsed()) {
      if (gen_flags.seed_given) gen_config.seed = gen_flags.seed;
      else gen_config.seed = fallback_seed();
      return cmd_generate(gen_config, gen_output, out);
    }
    if (simulate->parsed())
      return cmd_simulate(sim_instance, sim_flags, verify, dump_states, out, err);
    if (estimate->parsed())
      return cmd_estimate(est_instance, est_bound,
                          est_flags.tight_profit_bound, paper_literal, out);
    if (benchmark->parsed())
      return cmd_benchmark(bench_dir, bench_seeds, bench_flags, bench_csv, out, err);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const BudgetError& e) {
    err << "budget error: " << e.what() << "\n";
    return kExitBudget;
  } catch (const std::ios_base::failure& e) {
    err << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    err << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}

} // namespace qtg
