#ifndef QTG_SEARCH_HPP
#define QTG_SEARCH_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qtg/exact.hpp"
#include "qtg/instance.hpp"
#include "qtg/resources.hpp"
#include "qtg/rng.hpp"
#include "qtg/tree.hpp"

namespace qtg {

struct SearchConfig {
  double growth = 1.2;          // c, must satisfy 1 < c < 2
  std::uint64_t cutoff = 0;     // M; 0 = auto, 64 * ceil(sqrt(2^n))
  std::size_t delta_target = 0; // 0 = auto, max(1, ceil(n/10))
  std::optional<double> bias_override;
  std::uint32_t seed = 1;
  bool tight_profit_bound = false;
  std::size_t state_cap = kDefaultStateCap;
  std::uint64_t dp_budget = kDefaultDpBudget;
};

std::uint64_t default_cutoff(std::size_t n);
std::size_t default_delta_target(std::size_t n);

/// sin^2((2j+1) arcsin sqrt(q)) / q: the common factor applied to every
/// above-threshold probability by j amplification rounds. Returns 0 for
/// q = 0 (no mass to amplify) and exactly 1 for j = 0 or q = 1.
double amplification_factor(double q, std::uint64_t j);

/// Draws u uniform in [0,1) and walks the states in canonical order,
/// accumulating amplified probabilities; returns the first state whose
/// cumulative mass exceeds u, or nullopt when the remainder was sampled.
std::optional<TreeState> simulate_measurement(const StateSet& set,
                                              std::uint64_t j, Mt19937& rng);

/// One amplification round: level l, range m = ceil(c^l), power j drawn
/// uniformly from [1, m], and the measured outcome (nullopt = remainder).
struct QSearchRound {
  std::uint64_t level = 0;
  std::uint64_t range = 0;
  std::uint64_t power = 0;
  std::optional<TreeState> outcome;
};

struct QSearchResult {
  bool success = false;
  std::optional<TreeState> measured; // improving state, or last outcome on cutoff
  std::vector<QSearchRound> rounds;
  std::uint64_t m_total = 0;
};

using StateSetObserver =
    std::function<void(std::int64_t threshold, const StateSet& set)>;

/// Exponential-schedule amplitude-amplification search for a path with
/// profit above `threshold`. The state set for the threshold is built once
/// and reused across rounds; each round draws a power j, adds 2j+1 to
/// m_total, and measures. Stops on an improving measurement or once
/// m_total >= cutoff.
QSearchResult qsearch(const KnapsackInstance& instance,
                      const SearchConfig& config, const BiasConfig& bias,
                      std::int64_t threshold, Mt19937& rng,
                      const SubinstanceOracle* oracle = nullptr,
                      const StateSetObserver& observer = {});

struct ThresholdRounds {
  std::int64_t threshold = 0;
  std::vector<QSearchRound> rounds;
};

/// Full record of one threshold-ascending search run.
struct SearchTrace {
  std::string instance_digest;
  std::uint32_t seed = 0;
  double growth = 0.0;
  std::uint64_t cutoff = 0;
  std::size_t delta_target = 0;
  std::optional<double> bias_override;
  bool tight_profit_bound = false;

  std::vector<ThresholdRounds> stages; // stage k ran at thresholds()[k]
  std::uint64_t m_total_final = 0;
  Assignment result;
  ResourceCounts tallies;

  std::vector<std::int64_t> thresholds() const;
};

/// Threshold-ascending maximum finding: the initial threshold and incumbent
/// come from integer_greedy; each successful qsearch raises the threshold
/// to the measured profit and re-aims the branching bias at the new
/// incumbent. Returns the incumbent once a qsearch fails at cutoff.
SearchTrace qmaxsearch(const KnapsackInstance& instance,
                       const SearchConfig& config,
                       const StateSetObserver& observer = {});

} // namespace qtg

#endif // QTG_SEARCH_HPP
