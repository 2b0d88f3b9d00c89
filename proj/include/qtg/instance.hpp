#ifndef QTG_INSTANCE_HPP
#define QTG_INSTANCE_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qtg {

/// A 0-1 knapsack instance: n items with positive integer profits and costs,
/// and a positive integer capacity. All profit/cost arithmetic in this
/// project is exact integer arithmetic.
struct KnapsackInstance {
  std::vector<std::int64_t> profits;
  std::vector<std::int64_t> costs;
  std::int64_t capacity = 0;

  std::size_t size() const { return profits.size(); }
};

/// Throws std::invalid_argument unless n >= 1, all values >= 1, and the
/// profit/cost vectors have equal length.
void validate_instance(const KnapsackInstance& instance);

/// A selection of items, always feasible once constructed.
struct Assignment {
  std::vector<std::uint8_t> bits;
  std::int64_t profit = 0;
  std::int64_t residual_capacity = 0;
};

/// Builds an Assignment from raw bits, computing profit and residual
/// capacity. Throws std::invalid_argument if the selection is infeasible.
Assignment make_assignment(const KnapsackInstance& instance,
                           std::vector<std::uint8_t> bits);

/// "0110"-style rendering of selection bits, item 1 first.
std::string bits_string(const std::vector<std::uint8_t>& bits);

/// Instance file format: line 1 = n, line 2 = capacity, then n lines
/// "profit cost". Trailing newline optional. Errors report line numbers.
KnapsackInstance parse_instance(std::string_view text);

/// Emits exactly the format accepted by parse_instance.
std::string serialize_instance(const KnapsackInstance& instance);

/// FNV-1a hash of the canonical serialization, as fixed-width hex.
std::string instance_digest(const KnapsackInstance& instance);

struct GenerateConfig {
  std::size_t item_count = 0;
  std::int64_t profit_min = 1;
  std::int64_t profit_max = 100;
  std::int64_t cost_min = 1;
  std::int64_t cost_max = 100;
  double capacity_fraction = 0.5; // in (0, 1]
  std::uint32_t seed = 1;
};

/// Draws profits/costs uniformly from the configured ranges and sets
/// capacity = max(min cost, floor(fraction * total cost)). Deterministic
/// for a fixed seed.
KnapsackInstance generate_instance(const GenerateConfig& config);

} // namespace qtg

#endif // QTG_INSTANCE_HPP
