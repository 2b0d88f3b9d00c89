#ifndef QTG_EXACT_HPP
#define QTG_EXACT_HPP

#include <atomic>
#include <cstdint>
#include <mutex>
#include <span>
#include <vector>

#include "qtg/instance.hpp"

namespace qtg {

inline constexpr std::uint64_t kDefaultDpBudget = 1'000'000'000;

/// Exact optimum by dynamic programming over capacity with
/// divide-and-conquer assignment recovery: O(n*Z) cell updates, O(Z) rows
/// alive at a time. Throws BudgetError once the update counter passes
/// `budget`. The capacity loops run under OpenMP.
Assignment exact_optimum(const KnapsackInstance& instance,
                         std::uint64_t budget = kDefaultDpBudget);

/// Serial reference for exact_optimum; must produce identical assignments.
Assignment exact_optimum_serial(const KnapsackInstance& instance,
                                std::uint64_t budget = kDefaultDpBudget);

/// Exact best-completion profits for fixed decision prefixes, memoised by
/// (first free item, remaining capacity). Rows are built lazily back to
/// front under a mutex; reads of built rows are lock-free, so the table may
/// be shared across BFS workers once the needed rows exist.
class SubinstanceOracle {
public:
  explicit SubinstanceOracle(const KnapsackInstance& instance,
                             std::uint64_t budget = kDefaultDpBudget);

  /// Best profit achievable with items first_free..n-1 and the given
  /// remaining capacity.
  std::int64_t suffix_optimum(std::size_t first_free,
                              std::int64_t capacity) const;

  /// Exact best total profit over all completions of the prefix: prefix
  /// profit plus suffix_optimum of the residual instance. Throws
  /// std::invalid_argument on an infeasible prefix.
  std::int64_t bound(std::span<const std::uint8_t> prefix) const;

  /// Forces all rows to exist (used before parallel read-only phases).
  void materialize() const;

  const KnapsackInstance& instance() const { return instance_; }

private:
  void ensure_rows(std::size_t first_free) const;

  KnapsackInstance instance_;
  std::uint64_t budget_;
  mutable std::uint64_t cells_used_ = 0;
  mutable std::vector<std::vector<std::int64_t>> rows_;
  mutable std::atomic<std::size_t> lowest_built_{0}; // rows >= this exist
  mutable std::mutex build_mutex_;
};

/// One-shot form of SubinstanceOracle::bound.
std::int64_t subinstance_bound(const KnapsackInstance& instance,
                               std::span<const std::uint8_t> prefix,
                               std::uint64_t budget = kDefaultDpBudget);

} // namespace qtg

#endif // QTG_EXACT_HPP
