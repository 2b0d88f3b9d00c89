#include "qtg/tree.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "qtg/errors.hpp"

namespace qtg {

double optimal_bias(std::size_t n, std::size_t hamming) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  if (hamming < 1 || hamming > n)
    throw std::invalid_argument("hamming distance must be in [1, n]");
  return std::max(0.0, static_cast<double>(n) / static_cast<double>(hamming) -
                           2.0);
}

double path_sampling_probability(std::size_t n, std::size_t hamming,
                                 double bias) {
  if (hamming > n)
    throw std::invalid_argument("hamming distance must be in [0, n]");
  if (!(bias >= 0.0)) throw std::invalid_argument("bias must be >= 0");
  const double match = (bias + 1.0) / (bias + 2.0);
  const double other = 1.0 / (bias + 2.0);
  return std::pow(match, static_cast<double>(n - hamming)) *
         std::pow(other, static_cast<double>(hamming));
}

std::pair<double, double> branch_factors(double bias, bool reference_bit) {
  if (!(bias >= 0.0)) throw std::invalid_argument("bias must be >= 0");
  const double match = (bias + 1.0) / (bias + 2.0);
  const double other = 1.0 / (bias + 2.0);
  return reference_bit ? std::make_pair(other, match)
                       : std::make_pair(match, other);
}

bool path_bit(std::uint64_t path, std::size_t n, std::size_t item) {
  return (path >> (n - item)) & 1u;
}

std::string path_string(std::uint64_t path, std::size_t n) {
  std::string out(n, '0');
  for (std::size_t item = 1; item <= n; ++item)
    if (path_bit(path, n, item)) out[item - 1] = '1';
  return out;
}

namespace {

void check_tree_inputs(const KnapsackInstance& instance,
                       std::span<const std::uint8_t> reference,
                       double bias) {
  validate_instance(instance);
  if (instance.size() > 62)
    throw std::invalid_argument("tree simulation limited to 62 items");
  if (reference.size() != instance.size())
    throw std::invalid_argument("reference length must equal item count");
  if (!(bias >= 0.0)) throw std::invalid_argument("bias must be >= 0");
}

// Probability bookkeeping policies. Children multiply the parent value by
// the branch factor in one place only, so the serial, parallel and
// brute-force paths all perform the identical operation sequence per path.
struct DoubleModel {
  using Value = double;
  double match;
  double other;

  explicit DoubleModel(double bias)
      : match((bias + 1.0) / (bias + 2.0)), other(1.0 / (bias + 2.0)) {}

  Value one() const { return 1.0; }
  Value times_match(Value q) const { return q * match; }
  Value times_other(Value q) const { return q * other; }
};

struct ExactModel {
  using Value = ExactProbability;
  std::uint64_t num_match;
  std::uint64_t num_other;
  std::uint64_t base;

  explicit ExactModel(const ExactBias& bias)
      : num_match(bias.num + bias.den),
        num_other(bias.den),
        base(bias.num + 2 * bias.den) {
    if (bias.den == 0) throw std::invalid_argument("bias denominator is zero");
  }

  Value one() const { return ExactProbability{1, 0}; }

  Value scale(Value q, std::uint64_t factor) const {
    constexpr unsigned __int128 kMax = ~static_cast<unsigned __int128>(0);
    if (factor != 0 && q.numerator > kMax / factor)
      throw std::overflow_error("exact probability numerator overflow");
    return ExactProbability{q.numerator * factor, q.power + 1};
  }
  Value times_match(Value q) const { return scale(q, num_match); }
  Value times_other(Value q) const { return scale(q, num_other); }
};

template <class Model>
struct Node {
  std::uint64_t path;
  std::int64_t residual;
  std::int64_t profit;
  typename Model::Value probability;
};

// Child metadata shared by every expansion routine.
template <class Model>
Node<Model> inherit_child(const Node<Model>& node) {
  return node; // path bit stays 0, all metadata inherited
}

template <class Model>
Node<Model> exclude_child(const Model& model, const Node<Model>& node,
                          bool reference_bit) {
  Node<Model> child = node;
  child.probability = reference_bit ? model.times_other(node.probability)
                                    : model.times_match(node.probability);
  return child;
}

template <class Model>
Node<Model> include_child(const Model& model, const Node<Model>& node,
                          bool reference_bit, std::uint64_t item_bit,
                          std::int64_t cost, std::int64_t profit) {
  Node<Model> child;
  child.path = node.path | item_bit;
  child.residual = node.residual - cost;
  child.profit = node.profit + profit;
  child.probability = reference_bit ? model.times_match(node.probability)
                                    : model.times_other(node.probability);
  return child;
}

// Serial breadth-first expansion, the reference implementation.
template <class Model>
std::vector<Node<Model>> expand_serial(const KnapsackInstance& instance,
                                       std::span<const std::uint8_t> reference,
                                       const Model& model,
                                       std::int64_t threshold,
                                       bool prune_by_bound,
                                       std::size_t state_cap,
                                       const SubinstanceOracle* oracle) {
  const std::size_t n = instance.size();
  std::vector<Node<Model>> layer{
      Node<Model>{0, instance.capacity, 0, model.one()}};
  std::vector<Node<Model>> next;
  for (std::size_t depth = 0; depth < n; ++depth) {
    const std::int64_t cost = instance.costs[depth];
    const std::int64_t profit = instance.profits[depth];
    const bool ref_bit = reference[depth] != 0;
    const std::uint64_t item_bit = std::uint64_t{1} << (n - depth - 1);
    next.clear();
    for (const auto& node : layer) {
      if (prune_by_bound &&
          node.profit + oracle->suffix_optimum(depth, node.residual) <=
              threshold)
        continue;
      if (cost > node.residual) {
        next.push_back(inherit_child(node));
      } else {
        next.push_back(exclude_child(model, node, ref_bit));
        next.push_back(include_child(model, node, ref_bit, item_bit, cost,
                                     profit));
      }
      if (next.size() > state_cap)
        throw BudgetError("state cap exceeded during tree expansion");
    }
    layer.swap(next);
  }
  std::vector<Node<Model>> kept;
  for (const auto& node : layer)
    if (node.profit > threshold) kept.push_back(node);
  return kept;
}

// Parallel layer expansion: a counting pass per node, an exclusive scan for
// the child offsets, then a writing pass. Children land at precomputed
// offsets, so the output order (and every floating-point product) is
// identical to the serial routine for any thread count.
template <class Model>
std::vector<Node<Model>> expand_parallel(
    const KnapsackInstance& instance, std::span<const std::uint8_t> reference,
    const Model& model, std::int64_t threshold, bool prune_by_bound,
    std::size_t state_cap, const SubinstanceOracle* oracle) {
  const std::size_t n = instance.size();
  if (prune_by_bound) oracle->materialize();

  std::vector<Node<Model>> layer{
      Node<Model>{0, instance.capacity, 0, model.one()}};
  std::vector<Node<Model>> next;
  std::vector<std::size_t> offsets;
  for (std::size_t depth = 0; depth < n; ++depth) {
    const std::int64_t cost = instance.costs[depth];
    const std::int64_t profit = instance.profits[depth];
    const bool ref_bit = reference[depth] != 0;
    const std::uint64_t item_bit = std::uint64_t{1} << (n - depth - 1);
    const std::ptrdiff_t count = static_cast<std::ptrdiff_t>(layer.size());

    offsets.assign(layer.size() + 1, 0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
      const auto& node = layer[static_cast<std::size_t>(i)];
      std::size_t children = cost > node.residual ? 1 : 2;
      if (prune_by_bound &&
          node.profit + oracle->suffix_optimum(depth, node.residual) <=
              threshold)
        children = 0;
      offsets[static_cast<std::size_t>(i) + 1] = children;
    }
    for (std::size_t i = 0; i < layer.size(); ++i) offsets[i + 1] += offsets[i];
    if (offsets.back() > state_cap)
      throw BudgetError("state cap exceeded during tree expansion");

    next.resize(offsets.back());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
      const auto& node = layer[static_cast<std::size_t>(i)];
      std::size_t at = offsets[static_cast<std::size_t>(i)];
      const std::size_t children =
          offsets[static_cast<std::size_t>(i) + 1] - at;
      if (children == 0) continue;
      if (children == 1) {
        next[at] = inherit_child(node);
      } else {
        next[at] = exclude_child(model, node, ref_bit);
        next[at + 1] =
            include_child(model, node, ref_bit, item_bit, cost, profit);
      }
    }
    layer.swap(next);
  }

  std::vector<std::size_t> keep_offsets(layer.size() + 1, 0);
  const std::ptrdiff_t count = static_cast<std::ptrdiff_t>(layer.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i)
    keep_offsets[static_cast<std::size_t>(i) + 1] =
        layer[static_cast<std::size_t>(i)].profit > threshold ? 1 : 0;
  for (std::size_t i = 0; i < layer.size(); ++i)
    keep_offsets[i + 1] += keep_offsets[i];
  std::vector<Node<Model>> kept(keep_offsets.back());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const std::size_t at = keep_offsets[static_cast<std::size_t>(i)];
    if (keep_offsets[static_cast<std::size_t>(i) + 1] != at)
      kept[at] = layer[static_cast<std::size_t>(i)];
  }
  return kept;
}

// Neumaier-compensated sum; the conservation contract is 1e-12 over up to
// millions of states, which plain accumulation cannot guarantee.
double compensated_sum(const std::vector<TreeState>& states) {
  double sum = 0.0;
  double compensation = 0.0;
  for (const auto& state : states) {
    const double value = state.probability;
    const double t = sum + value;
    if (std::abs(sum) >= std::abs(value))
      compensation += (sum - t) + value;
    else
      compensation += (value - t) + sum;
    sum = t;
  }
  return sum + compensation;
}

StateSet finalize(std::vector<Node<DoubleModel>> nodes,
                  std::int64_t threshold) {
  StateSet set;
  set.threshold = threshold;
  set.states.reserve(nodes.size());
  for (const auto& node : nodes)
    set.states.push_back(
        TreeState{node.path, node.residual, node.profit, node.probability});
  set.total_probability = compensated_sum(set.states);
  set.remainder_probability = 1.0 - set.total_probability;
  return set;
}

} // namespace

StateSet build_state_set(const KnapsackInstance& instance,
                         const BiasConfig& config, std::int64_t threshold,
                         bool prune_by_bound, std::size_t state_cap,
                         const SubinstanceOracle* oracle) {
  check_tree_inputs(instance, config.reference, config.bias);
  const DoubleModel model(config.bias);
  std::optional<SubinstanceOracle> local;
  if (prune_by_bound && oracle == nullptr) local.emplace(instance);
  const SubinstanceOracle* used = oracle != nullptr ? oracle : (local ? &*local : nullptr);
  return finalize(expand_parallel(instance, config.reference, model,
                                  threshold, prune_by_bound, state_cap, used),
                  threshold);
}

StateSet build_state_set_serial(const KnapsackInstance& instance,
                                const BiasConfig& config,
                                std::int64_t threshold, bool prune_by_bound,
                                std::size_t state_cap,
                                const SubinstanceOracle* oracle) {
  check_tree_inputs(instance, config.reference, config.bias);
  const DoubleModel model(config.bias);
  std::optional<SubinstanceOracle> local;
  if (prune_by_bound && oracle == nullptr) local.emplace(instance);
  const SubinstanceOracle* used = oracle != nullptr ? oracle : (local ? &*local : nullptr);
  return finalize(expand_serial(instance, config.reference, model, threshold,
                                prune_by_bound, state_cap, used),
                  threshold);
}

StateSet brute_force_state_set(const KnapsackInstance& instance,
                               const BiasConfig& config,
                               std::int64_t threshold) {
  check_tree_inputs(instance, config.reference, config.bias);
  const std::size_t n = instance.size();
  if (n > 20)
    throw std::invalid_argument("brute-force enumeration limited to 20 items");
  const DoubleModel model(config.bias);

  StateSet set;
  set.threshold = threshold;
  const std::uint64_t paths = std::uint64_t{1} << n;
  for (std::uint64_t path = 0; path < paths; ++path) {
    // Replay the layer rule along this path; abandon it at the first
    // infeasible inclusion.
    double q = model.one();
    std::int64_t residual = instance.capacity;
    std::int64_t profit = 0;
    bool feasible = true;
    for (std::size_t item = 1; item <= n && feasible; ++item) {
      const bool bit = path_bit(path, n, item);
      const bool ref_bit = config.reference[item - 1] != 0;
      if (instance.costs[item - 1] > residual) {
        feasible = !bit; // forced exclusion, probability unchanged
        continue;
      }
      if (bit == ref_bit)
        q = model.times_match(q);
      else
        q = model.times_other(q);
      if (bit) {
        residual -= instance.costs[item - 1];
        profit += instance.profits[item - 1];
      }
    }
    if (feasible && profit > threshold)
      set.states.push_back(TreeState{path, residual, profit, q});
  }
  set.total_probability = compensated_sum(set.states);
  set.remainder_probability = 1.0 - set.total_probability;
  return set;
}

ExactStateSet build_state_set_exact(const KnapsackInstance& instance,
                                    const ExactBias& bias,
                                    std::span<const std::uint8_t> reference,
                                    std::int64_t threshold) {
  check_tree_inputs(instance, reference,
                    static_cast<double>(bias.num) /
                        static_cast<double>(bias.den == 0 ? 1 : bias.den));
  if (instance.size() > 24)
    throw std::invalid_argument("exact probability mode limited to 24 items");
  const ExactModel model(bias);
  auto nodes = expand_serial(instance, reference, model, threshold, false,
                             kDefaultStateCap, nullptr);
  ExactStateSet set;
  set.threshold = threshold;
  set.factor_base = model.base;
  set.states.reserve(nodes.size());
  for (const auto& node : nodes)
    set.states.push_back(ExactTreeState{node.path, node.residual, node.profit,
                                        node.probability});
  return set;
}

double exact_probability_value(const ExactProbability& p,
                               std::uint64_t factor_base) {
  return static_cast<double>(p.numerator) /
         std::pow(static_cast<double>(factor_base), p.power);
}

bool exact_probabilities_sum_to_one(const ExactStateSet& set) {
  int max_power = 0;
  for (const auto& state : set.states)
    max_power = std::max(max_power, state.probability.power);

  constexpr unsigned __int128 kMax = ~static_cast<unsigned __int128>(0);
  const unsigned __int128 base = set.factor_base;
  unsigned __int128 sum = 0;
  for (const auto& state : set.states) {
    unsigned __int128 term = state.probability.numerator;
    for (int k = state.probability.power; k < max_power; ++k) {
      if (base != 0 && term > kMax / base)
        throw std::overflow_error("exact conservation sum overflow");
      term *= base;
    }
    if (term > kMax - sum)
      throw std::overflow_error("exact conservation sum overflow");
    sum += term;
  }
  unsigned __int128 unit = 1;
  for (int k = 0; k < max_power; ++k) {
    if (base != 0 && unit > kMax / base)
      throw std::overflow_error("exact conservation sum overflow");
    unit *= base;
  }
  return sum == unit;
}

} // namespace qtg
