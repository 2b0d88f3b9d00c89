#ifndef QTG_GREEDY_HPP
#define QTG_GREEDY_HPP

#include <cstdint>
#include <vector>

#include "qtg/instance.hpp"

namespace qtg {

/// Item indices sorted by non-increasing efficiency p/z, ties broken by
/// smaller index. Compared with exact cross-multiplication, no floats.
std::vector<std::size_t> efficiency_order(const KnapsackInstance& instance);

/// Integer Greedy: scan items in efficiency order, include each item iff it
/// still fits. Supplies the initial threshold for the search.
Assignment integer_greedy(const KnapsackInstance& instance);

/// Fractional-greedy (LP relaxation) upper bound, rounded down. Fills items
/// in efficiency order up to the break item and takes its proportional
/// share; never below the exact optimum.
std::int64_t dantzig_bound(const KnapsackInstance& instance);

/// Upper bound P for the optimal profit, used to size the profit register.
/// tight=false gives the solver-independent sum of profits; tight=true the
/// Dantzig bound (capped by the sum).
std::int64_t profit_register_bound(const KnapsackInstance& instance, bool tight);

} // namespace qtg

#endif // QTG_GREEDY_HPP
