#ifndef QTG_TREE_HPP
#define QTG_TREE_HPP

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qtg/exact.hpp"
#include "qtg/instance.hpp"

namespace qtg {

/// Biased branching configuration. The gate splits amplitude mass
/// (b+1)/(b+2) toward the branch matching the reference solution's bit and
/// 1/(b+2) away from it; b = 0 is the unbiased gate. Negative biases are
/// clamped to 0 so both factors stay valid probabilities.
struct BiasConfig {
  double bias = 0.0;
  std::vector<std::uint8_t> reference;
};

/// b maximising the sampling probability of paths at the given Hamming
/// distance from the reference: max(0, n/hamming - 2). Throws on hamming
/// outside [1, n].
double optimal_bias(std::size_t n, std::size_t hamming);

/// ((b+1)/(b+2))^(n-hamming) * (1/(b+2))^hamming: the exact sampling
/// probability of a path when every layer branches, a lower bound
/// otherwise.
double path_sampling_probability(std::size_t n, std::size_t hamming,
                                 double bias);

/// {exclude factor, include factor} for one branching layer. The factor
/// (b+1)/(b+2) goes to the child matching reference_bit; factors sum to 1.
std::pair<double, double> branch_factors(double bias, bool reference_bit);

/// A feasible path through the decision tree with its sampling probability.
/// Item m (1-based) occupies bit (n - m) of `path`, so integer order on
/// `path` is lexicographic order on the bit sequence.
struct TreeState {
  std::uint64_t path = 0;
  std::int64_t residual_capacity = 0;
  std::int64_t profit = 0;
  double probability = 0.0;
};

/// "0110"-style rendering, item 1 first.
std::string path_string(std::uint64_t path, std::size_t n);
bool path_bit(std::uint64_t path, std::size_t n, std::size_t item);

/// The above-threshold superposition: all feasible paths with profit
/// strictly above `threshold`, lexicographically ordered, plus the
/// probability mass of everything else (the remainder).
struct StateSet {
  std::int64_t threshold = 0;
  std::vector<TreeState> states;
  double total_probability = 0.0;
  double remainder_probability = 1.0;
};

inline constexpr std::size_t kDefaultStateCap = 10'000'000;

/// Breadth-first tree expansion: per layer, a node whose residual capacity
/// cannot cover the next item has a single inheriting child (bit 0);
/// otherwise two children split the probability via branch_factors.
/// Infeasible subtrees never materialise. With prune_by_bound, nodes whose
/// exact completion bound is <= threshold are discarded (never changes the
/// output, only the work). threshold = -1 keeps every feasible path.
///
/// Layers are expanded by OpenMP workers; children are written in canonical
/// order, so the result is bit-identical to build_state_set_serial.
/// Throws BudgetError when a layer exceeds state_cap nodes.
StateSet build_state_set(const KnapsackInstance& instance,
                         const BiasConfig& config, std::int64_t threshold,
                         bool prune_by_bound,
                         std::size_t state_cap = kDefaultStateCap,
                         const SubinstanceOracle* oracle = nullptr);

/// Serial reference implementation, kept for testing.
StateSet build_state_set_serial(const KnapsackInstance& instance,
                                const BiasConfig& config,
                                std::int64_t threshold, bool prune_by_bound,
                                std::size_t state_cap = kDefaultStateCap,
                                const SubinstanceOracle* oracle = nullptr);

/// Independent oracle: enumerates all 2^n bit strings, keeps feasible ones
/// above the threshold and replays the layer rule path by path. n <= 20.
StateSet brute_force_state_set(const KnapsackInstance& instance,
                               const BiasConfig& config,
                               std::int64_t threshold);

// ---------------------------------------------------------------------------
// Exact-rational probability mode (test instrumentation, n <= 24).
//
// With a rational bias b = num/den every branching layer multiplies the
// probability numerator by either num+den (matching branch) or den (other
// branch) over the fixed base num+2*den, so probabilities stay exact
// 128-bit rationals numerator / base^power.
// ---------------------------------------------------------------------------

struct ExactBias {
  std::uint64_t num = 0;
  std::uint64_t den = 1;
};

struct ExactProbability {
  unsigned __int128 numerator = 1;
  int power = 0; // denominator = base^power
};

struct ExactTreeState {
  std::uint64_t path = 0;
  std::int64_t residual_capacity = 0;
  std::int64_t profit = 0;
  ExactProbability probability;
};

struct ExactStateSet {
  std::int64_t threshold = 0;
  std::uint64_t factor_base = 2;
  std::vector<ExactTreeState> states;
};

ExactStateSet build_state_set_exact(const KnapsackInstance& instance,
                                    const ExactBias& bias,
                                    std::span<const std::uint8_t> reference,
                                    std::int64_t threshold);

double exact_probability_value(const ExactProbability& p,
                               std::uint64_t factor_base);

/// Exact conservation check: the probabilities sum to precisely 1. Throws
/// std::overflow_error if the 128-bit accumulation would wrap.
bool exact_probabilities_sum_to_one(const ExactStateSet& set);

} // namespace qtg

#endif // QTG_TREE_HPP
