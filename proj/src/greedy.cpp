#include "qtg/greedy.hpp"

#include <algorithm>
#include <numeric>

namespace qtg {

std::vector<std::size_t> efficiency_order(const KnapsackInstance& instance) {
  validate_instance(instance);
  std::vector<std::size_t> order(instance.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    // p_a/z_a > p_b/z_b, exactly, via cross-multiplication.
    const std::int64_t lhs = instance.profits[a] * instance.costs[b];
    const std::int64_t rhs = instance.profits[b] * instance.costs[a];
    if (lhs != rhs) return lhs > rhs;
    return a < b;
  });
  return order;
}

Assignment integer_greedy(const KnapsackInstance& instance) {
  std::vector<std::uint8_t> bits(instance.size(), 0);
  std::int64_t remaining = instance.capacity;
  for (std::size_t item : efficiency_order(instance)) {
    if (instance.costs[item] <= remaining) {
      bits[item] = 1;
      remaining -= instance.costs[item];
    }
  }
  return make_assignment(instance, std::move(bits));
}

std::int64_t dantzig_bound(const KnapsackInstance& instance) {
  std::int64_t profit = 0;
  std::int64_t remaining = instance.capacity;
  for (std::size_t item : efficiency_order(instance)) {
    if (instance.costs[item] <= remaining) {
      profit += instance.profits[item];
      remaining -= instance.costs[item];
    } else {
      // Break item: proportional share, rounded down.
      profit += remaining * instance.profits[item] / instance.costs[item];
      break;
    }
  }
  return profit;
}

std::int64_t profit_register_bound(const KnapsackInstance& instance,
                                   bool tight) {
  validate_instance(instance);
  const std::int64_t sum =
      std::accumulate(instance.profits.begin(), instance.profits.end(),
                      std::int64_t{0});
  if (!tight) return sum;
  // The fractional bound can reach 0 when nothing fits; the register still
  // needs one qubit.
  return std::max<std::int64_t>(1, std::min(sum, dantzig_bound(instance)));
}

} // namespace qtg
