#ifndef QTG_RESOURCES_HPP
#define QTG_RESOURCES_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "qtg/instance.hpp"

namespace qtg {

struct SearchTrace;

/// Qubit/gate/cycle triple for a circuit fragment. A cycle is a set of
/// gates executable in parallel, so cycles <= gates always.
struct ResourceCounts {
  std::uint64_t qubits = 0;
  std::uint64_t gates = 0;
  std::uint64_t cycles = 0;
};

/// Register sizing convention. `representable` sizes a register holding the
/// value v at floor(log2 v) + 1 bits and runs comparator/injection sums
/// over the full register width; `paper_literal` evaluates the printed
/// ceil(log2 .) expressions verbatim (which under-size registers at powers
/// of two and drop high comparator clauses) for comparison tables.
enum class SizingMode { representable, paper_literal };

/// Number of bits in v's binary representation, floor(log2 v) + 1. v >= 1.
std::size_t bitlen(std::uint64_t v);

/// ceil(log2 v); note ceil_log2(1) = 0. v >= 1.
std::size_t ceil_log2(std::uint64_t v);

std::size_t register_width(std::uint64_t v, SizingMode mode);

struct RegisterSizes {
  std::size_t path = 0;
  std::size_t capacity = 0;
  std::size_t profit = 0;
  std::size_t ancilla = 0;

  std::size_t total() const { return path + capacity + profit + ancilla; }
};

/// Register sizes for the instance given a profit upper bound P:
/// path = n, capacity/profit by value width, ancilla = capacity+profit-1
/// (shared multi-control workspace plus the phase-flip qubit).
RegisterSizes register_sizes(const KnapsackInstance& instance,
                             std::int64_t profit_bound,
                             SizingMode mode = SizingMode::representable);

/// Transform on an s-qubit register: s(s+1)/2 gates, depth 2s-1 under the
/// cascaded parallelisation.
ResourceCounts qft_counts(std::size_t s);

/// Gates for adding/subtracting the classical constant `value` on a
/// Fourier-transformed register of s qubits: each set bit i (1 = LSB)
/// contributes s+1-i rotations.
std::uint64_t direct_injection_gates(std::uint64_t value, std::size_t s,
                                     SizingMode mode = SizingMode::representable);

enum class ComparisonKind {
  geq, // register >= operand, operand >= 1
  eq0, // register == 0
  gt,  // register > operand, operand >= 0
};

/// Multi-controlled comparator cost: each disjoint comparator clause with k
/// controls is priced at 2(k-1)+1 gates (Toffoli ladder plus one controlled
/// gate). Returns the cheaper of apply-if and invert-if-not strategies.
/// Comparator cycles equal comparator gates.
std::uint64_t comparison_gates(ComparisonKind kind, std::uint64_t operand,
                               std::size_t s,
                               SizingMode mode = SizingMode::representable);

/// Both comparator strategy costs before taking the minimum. invert_if is
/// absent when operand+1 does not fit the register.
struct ComparisonStrategies {
  std::uint64_t apply_if = 0;
  std::optional<std::uint64_t> invert_if;
};
ComparisonStrategies comparison_strategies(
    ComparisonKind kind, std::uint64_t operand, std::size_t s,
    SizingMode mode = SizingMode::representable);

/// Gates/cycles of all profit additions: one transform pair survives
/// around the chained per-item injections.
ResourceCounts adder_totals(const KnapsackInstance& instance,
                            std::int64_t profit_bound,
                            SizingMode mode = SizingMode::representable);

/// Gates/cycles of all capacity subtractions: the interleaved comparisons
/// keep all 2n transform pairs, the last subtraction itself is omitted.
ResourceCounts subtractor_totals(const KnapsackInstance& instance,
                                 SizingMode mode = SizingMode::representable);

/// Per-layer cycle counts and the full gate/cycle/qubit totals of the tree
/// generator circuit.
struct QtgBreakdown {
  RegisterSizes registers;
  std::uint64_t qubits_total = 0;
  ResourceCounts qtg;
  std::vector<std::uint64_t> comparison_gates; // per item
  std::vector<std::uint64_t> layer_cycles;     // per item
  ResourceCounts adder;
  ResourceCounts subtractor;
  std::int64_t profit_bound = 0;
  SizingMode mode = SizingMode::representable;
};

QtgBreakdown qtg_breakdown(const KnapsackInstance& instance,
                           std::int64_t profit_bound,
                           SizingMode mode = SizingMode::representable);

ResourceCounts qtg_totals(const KnapsackInstance& instance,
                          std::int64_t profit_bound,
                          SizingMode mode = SizingMode::representable);

/// Total resources of a recorded search run: per round with power j at
/// threshold T, (2j+1) tree-generator applications plus j reflections and
/// j threshold oracles. Throws std::invalid_argument if the trace was
/// recorded for a different instance.
ResourceCounts search_tally(const SearchTrace& trace,
                            const KnapsackInstance& instance,
                            std::int64_t profit_bound,
                            SizingMode mode = SizingMode::representable);

// ---------------------------------------------------------------------------
// Gate enumerator: builds the literal gate sequence of the tree-generator
// circuit (comparator clause decompositions, transform cascades, injection
// rotations) and schedules it cycle by cycle under the documented layer
// rules. Independent check of the closed-form counts; n <= 8.
// ---------------------------------------------------------------------------

enum class GateKind : std::uint8_t {
  comparator_toffoli,
  comparator_controlled_gate,
  qft_hadamard,
  qft_controlled_phase,
  injection_rotation,
};

struct GateRecord {
  GateKind kind;
  std::uint16_t layer; // item index, 1-based
  std::uint64_t cycle; // 1-based schedule slot
};

struct GateEnumeration {
  std::vector<GateRecord> gates;
  std::uint64_t depth = 0;
};

GateEnumeration enumerate_gates(const KnapsackInstance& instance,
                                std::int64_t profit_bound,
                                SizingMode mode = SizingMode::representable);

} // namespace qtg

#endif // QTG_RESOURCES_HPP
