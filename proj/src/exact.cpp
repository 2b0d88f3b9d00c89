#include "qtg/exact.hpp"

#include <algorithm>
#include <stdexcept>

#include "qtg/errors.hpp"

namespace qtg {

namespace {

// One DP step: next[c] = best profit over items seen so far with cost <= c,
// given prev[] for the items before this one. Reads only prev, so the
// capacity loop is free of cross-iteration dependencies.
void dp_item_step(const std::int64_t* prev, std::int64_t* next,
                  std::int64_t capacity, std::int64_t p, std::int64_t z,
                  [[maybe_unused]] bool parallel) {
#pragma omp parallel for schedule(static) if (parallel)
  for (std::int64_t c = 0; c <= capacity; ++c) {
    std::int64_t best = prev[c];
    if (c >= z) best = std::max(best, prev[c - z] + p);
    next[c] = best;
  }
}

struct DpBudget {
  std::uint64_t limit;
  std::uint64_t used = 0;

  void charge(std::uint64_t cells) {
    used += cells;
    if (used > limit)
      throw BudgetError("DP work budget exceeded (" + std::to_string(used) +
                        " cell updates, limit " + std::to_string(limit) + ")");
  }
};

// Profit profile over capacities 0..capacity for items [lo, hi).
std::vector<std::int64_t> profit_profile(const KnapsackInstance& instance,
                                         std::size_t lo, std::size_t hi,
                                         std::int64_t capacity,
                                         DpBudget& budget, bool parallel) {
  std::vector<std::int64_t> prev(static_cast<std::size_t>(capacity) + 1, 0);
  std::vector<std::int64_t> next(prev.size());
  for (std::size_t item = lo; item < hi; ++item) {
    budget.charge(prev.size());
    dp_item_step(prev.data(), next.data(), capacity, instance.profits[item],
                 instance.costs[item], parallel);
    prev.swap(next);
  }
  return prev;
}

// Recovers an optimal assignment for items [lo, hi) at the given capacity by
// splitting the range, matching profit profiles of the halves, and recursing
// on the argmax split. Total work stays O(n*Z) because each level halves the
// item count while the capacities of sibling subproblems sum to `capacity`.
void solve_range(const KnapsackInstance& instance, std::size_t lo,
                 std::size_t hi, std::int64_t capacity,
                 std::vector<std::uint8_t>& bits, DpBudget& budget,
                 bool parallel) {
  if (lo == hi) return;
  if (hi - lo == 1) {
    bits[lo] = instance.costs[lo] <= capacity ? 1 : 0;
    return;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  const auto left = profit_profile(instance, lo, mid, capacity, budget, parallel);
  const auto right = profit_profile(instance, mid, hi, capacity, budget, parallel);
  std::int64_t best_profit = -1;
  std::int64_t best_split = 0;
  for (std::int64_t c = 0; c <= capacity; ++c) {
    const std::int64_t total = left[static_cast<std::size_t>(c)] +
                               right[static_cast<std::size_t>(capacity - c)];
    if (total > best_profit) {
      best_profit = total;
      best_split = c;
    }
  }
  solve_range(instance, lo, mid, best_split, bits, budget, parallel);
  solve_range(instance, mid, hi, capacity - best_split, bits, budget, parallel);
}

Assignment exact_optimum_impl(const KnapsackInstance& instance,
                              std::uint64_t budget_limit, bool parallel) {
  validate_instance(instance);
  DpBudget budget{budget_limit};
  std::vector<std::uint8_t> bits(instance.size(), 0);
  solve_range(instance, 0, instance.size(), instance.capacity, bits, budget,
              parallel);
  return make_assignment(instance, std::move(bits));
}

} // namespace

Assignment exact_optimum(const KnapsackInstance& instance,
                         std::uint64_t budget) {
  return exact_optimum_impl(instance, budget, true);
}

Assignment exact_optimum_serial(const KnapsackInstance& instance,
                                std::uint64_t budget) {
  return exact_optimum_impl(instance, budget, false);
}

SubinstanceOracle::SubinstanceOracle(const KnapsackInstance& instance,
                                     std::uint64_t budget)
    : instance_(instance), budget_(budget) {
  validate_instance(instance_);
  rows_.resize(instance_.size() + 1);
  // Base row: no free items, zero profit at every capacity.
  rows_[instance_.size()].assign(
      static_cast<std::size_t>(instance_.capacity) + 1, 0);
  lowest_built_.store(instance_.size(), std::memory_order_release);
}

void SubinstanceOracle::ensure_rows(std::size_t first_free) const {
  if (first_free >= lowest_built_.load(std::memory_order_acquire)) return;
  std::lock_guard<std::mutex> lock(build_mutex_);
  std::size_t lowest = lowest_built_.load(std::memory_order_relaxed);
  while (lowest > first_free) {
    const std::size_t k = lowest - 1;
    const auto& below = rows_[k + 1];
    cells_used_ += below.size();
    if (cells_used_ > budget_)
      throw BudgetError("subinstance oracle budget exceeded");
    std::vector<std::int64_t> row(below.size());
    const std::int64_t p = instance_.profits[k];
    const std::int64_t z = instance_.costs[k];
    for (std::int64_t c = 0; c <= instance_.capacity; ++c) {
      std::int64_t best = below[static_cast<std::size_t>(c)];
      if (c >= z)
        best = std::max(best, below[static_cast<std::size_t>(c - z)] + p);
      row[static_cast<std::size_t>(c)] = best;
    }
    rows_[k] = std::move(row);
    lowest = k;
    lowest_built_.store(lowest, std::memory_order_release);
  }
}

std::int64_t SubinstanceOracle::suffix_optimum(std::size_t first_free,
                                               std::int64_t capacity) const {
  if (first_free > instance_.size())
    throw std::invalid_argument("first_free out of range");
  if (capacity < 0 || capacity > instance_.capacity)
    throw std::invalid_argument("capacity out of range");
  ensure_rows(first_free);
  return rows_[first_free][static_cast<std::size_t>(capacity)];
}

std::int64_t SubinstanceOracle::bound(
    std::span<const std::uint8_t> prefix) const {
  if (prefix.size() > instance_.size())
    throw std::invalid_argument("prefix longer than instance");
  std::int64_t profit = 0;
  std::int64_t remaining = instance_.capacity;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (prefix[i]) {
      profit += instance_.profits[i];
      remaining -= instance_.costs[i];
    }
  }
  if (remaining < 0) throw std::invalid_argument("infeasible prefix");
  return profit + suffix_optimum(prefix.size(), remaining);
}

void SubinstanceOracle::materialize() const { ensure_rows(0); }

std::int64_t subinstance_bound(const KnapsackInstance& instance,
                               std::span<const std::uint8_t> prefix,
                               std::uint64_t budget) {
  return SubinstanceOracle(instance, budget).bound(prefix);
}

} // namespace qtg
