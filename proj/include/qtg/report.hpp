#ifndef QTG_REPORT_HPP
#define QTG_REPORT_HPP

#include <json.hpp>

#include "qtg/resources.hpp"
#include "qtg/search.hpp"
#include "qtg/tree.hpp"

namespace qtg {

// JSON documents use ordered maps so repeated runs serialize byte-identically.
using Json = nlohmann::ordered_json;

/// Diagnostic dump of an above-threshold state set.
Json state_set_json(const StateSet& set, std::size_t n);

/// Search trace: thresholds, per-stage power sequences, result, tallies.
Json trace_json(const SearchTrace& trace);

/// Full run report: trace plus optional oracle cross-check and timing.
struct OracleCheck {
  std::int64_t optimum = 0;
  bool match = false;
};
Json run_report_json(const SearchTrace& trace,
                     const std::optional<OracleCheck>& oracle,
                     double elapsed_ms);

/// Resource estimate document for the estimate command.
Json estimate_json(const KnapsackInstance& instance,
                   const QtgBreakdown& breakdown);

} // namespace qtg

#endif // QTG_REPORT_HPP
