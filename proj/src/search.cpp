#include "qtg/search.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qtg/greedy.hpp"

namespace qtg {

std::uint64_t default_cutoff(std::size_t n) {
  // 64 * ceil(sqrt(2^n)) = 64 * ceil(2^(n/2))
  const double root = std::ceil(std::pow(2.0, static_cast<double>(n) / 2.0));
  return 64 * static_cast<std::uint64_t>(root);
}

std::size_t default_delta_target(std::size_t n) {
  return std::max<std::size_t>(1, (n + 9) / 10);
}

double amplification_factor(double q, std::uint64_t j) {
  if (!(q >= 0.0) || q > 1.0)
    throw std::invalid_argument("probability must be in [0, 1]");
  if (q == 0.0) return 0.0; // nothing to amplify
  if (j == 0 || q == 1.0) return 1.0;
  const double angle =
      (2.0 * static_cast<double>(j) + 1.0) * std::asin(std::sqrt(q));
  const double s = std::sin(angle);
  return s * s / q;
}

std::optional<TreeState> simulate_measurement(const StateSet& set,
                                              std::uint64_t j, Mt19937& rng) {
  const double u = rng.next_real53();
  // The compensated sum can land an ulp past 1 on a full tree.
  const double q = std::min(1.0, std::max(0.0, set.total_probability));
  const double factor = amplification_factor(q, j);
  double cumulative = 0.0;
  for (const auto& state : set.states) {
    cumulative += state.probability * factor;
    if (cumulative > u) return state;
  }
  return std::nullopt; // the remainder was sampled
}

namespace {

void check_config(const SearchConfig& config) {
  if (!(config.growth > 1.0) || !(config.growth < 2.0))
    throw std::invalid_argument("growth must satisfy 1 < c < 2");
}

Assignment assignment_from_state(const KnapsackInstance& instance,
                                 const TreeState& state) {
  std::vector<std::uint8_t> bits(instance.size(), 0);
  for (std::size_t item = 1; item <= instance.size(); ++item)
    bits[item - 1] = path_bit(state.path, instance.size(), item) ? 1 : 0;
  return make_assignment(instance, std::move(bits));
}

} // namespace

QSearchResult qsearch(const KnapsackInstance& instance,
                      const SearchConfig& config, const BiasConfig& bias,
                      std::int64_t threshold, Mt19937& rng,
                      const SubinstanceOracle* oracle,
                      const StateSetObserver& observer) {
  check_config(config);
  const std::uint64_t cutoff =
      config.cutoff > 0 ? config.cutoff : default_cutoff(instance.size());

  // The set depends only on (instance, bias, threshold): build it once and
  // reuse it across rounds. Per-round generator applications are still
  // charged by the caller's tallies.
  const StateSet set = build_state_set(instance, bias, threshold, true,
                                       config.state_cap, oracle);
  if (observer) observer(threshold, set);

  QSearchResult result;
  double range_real = 1.0;
  std::uint64_t level = 0;
  for (;;) {
    ++level;
    range_real *= config.growth;
    const auto range = static_cast<std::uint64_t>(std::ceil(range_real));
    const std::uint64_t power = rng.uniform_in_range(1, range);
    result.m_total += 2 * power + 1;

    QSearchRound round;
    round.level = level;
    round.range = range;
    round.power = power;
    round.outcome = simulate_measurement(set, power, rng);
    const bool improving =
        round.outcome.has_value() && round.outcome->profit > threshold;
    result.rounds.push_back(round);

    if (improving) {
      result.success = true;
      result.measured = round.outcome;
      return result;
    }
    if (result.m_total >= cutoff) {
      result.success = false;
      result.measured = round.outcome;
      return result;
    }
  }
}

std::vector<std::int64_t> SearchTrace::thresholds() const {
  std::vector<std::int64_t> out;
  out.reserve(stages.size());
  for (const auto& stage : stages) out.push_back(stage.threshold);
  return out;
}

SearchTrace qmaxsearch(const KnapsackInstance& instance,
                       const SearchConfig& config,
                       const StateSetObserver& observer) {
  check_config(config);
  validate_instance(instance);
  const std::size_t n = instance.size();

  SearchTrace trace;
  trace.instance_digest = instance_digest(instance);
  trace.seed = config.seed;
  trace.growth = config.growth;
  trace.cutoff = config.cutoff > 0 ? config.cutoff : default_cutoff(n);
  trace.delta_target =
      config.delta_target > 0 ? config.delta_target : default_delta_target(n);
  trace.bias_override = config.bias_override;
  trace.tight_profit_bound = config.tight_profit_bound;
  if (trace.delta_target > n)
    throw std::invalid_argument("delta_target must be in [1, n]");

  SearchConfig effective = config;
  effective.cutoff = trace.cutoff;

  const std::int64_t profit_bound =
      profit_register_bound(instance, config.tight_profit_bound);
  const ResourceCounts generator = qtg_totals(instance, profit_bound);
  const RegisterSizes registers = register_sizes(instance, profit_bound);
  const std::uint64_t zero_check =
      comparison_gates(ComparisonKind::eq0, 0, registers.profit);
  trace.tallies.qubits = registers.total();

  Mt19937 rng(config.seed);
  const SubinstanceOracle oracle(instance, config.dp_budget);

  Assignment incumbent = integer_greedy(instance);
  std::int64_t threshold = incumbent.profit;
  const double bias_value = config.bias_override.value_or(
      optimal_bias(n, trace.delta_target));

  for (;;) {
    BiasConfig bias;
    bias.bias = bias_value;
    bias.reference = incumbent.bits;

    QSearchResult attempt = qsearch(instance, effective, bias, threshold, rng,
                                    &oracle, observer);

    const std::uint64_t oracle_gates =
        zero_check +
        comparison_gates(ComparisonKind::gt,
                         static_cast<std::uint64_t>(threshold),
                         registers.profit);
    for (const auto& round : attempt.rounds) {
      trace.tallies.gates +=
          (2 * round.power + 1) * generator.gates + round.power * oracle_gates;
      trace.tallies.cycles += (2 * round.power + 1) * generator.cycles +
                              round.power * oracle_gates;
    }
    trace.stages.push_back(ThresholdRounds{threshold, std::move(attempt.rounds)});
    trace.m_total_final = attempt.m_total;

    if (!attempt.success) {
      trace.result = incumbent;
      return trace;
    }
    incumbent = assignment_from_state(instance, *attempt.measured);
    threshold = incumbent.profit;
  }
}

} // namespace qtg
