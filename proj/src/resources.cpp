#include "qtg/resources.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include "qtg/search.hpp"

namespace qtg {

std::size_t bitlen(std::uint64_t v) {
  if (v == 0) throw std::invalid_argument("bitlen of zero");
  return static_cast<std::size_t>(std::bit_width(v));
}

std::size_t ceil_log2(std::uint64_t v) {
  if (v == 0) throw std::invalid_argument("ceil_log2 of zero");
  return static_cast<std::size_t>(std::bit_width(v - 1));
}

std::size_t register_width(std::uint64_t v, SizingMode mode) {
  if (mode == SizingMode::representable) return bitlen(v);
  // A register still needs one qubit when the printed ceil(log2 v) is 0.
  return std::max<std::size_t>(1, ceil_log2(v));
}

RegisterSizes register_sizes(const KnapsackInstance& instance,
                             std::int64_t profit_bound, SizingMode mode) {
  validate_instance(instance);
  if (profit_bound < 1)
    throw std::invalid_argument("profit bound must be positive");
  RegisterSizes sizes;
  sizes.path = instance.size();
  sizes.capacity =
      register_width(static_cast<std::uint64_t>(instance.capacity), mode);
  sizes.profit =
      register_width(static_cast<std::uint64_t>(profit_bound), mode);
  // Shared multi-control workspace for both registers, plus the qubit that
  // stores the potential phase flip.
  sizes.ancilla = sizes.capacity + sizes.profit - 1;
  return sizes;
}

ResourceCounts qft_counts(std::size_t s) {
  if (s < 1) throw std::invalid_argument("register size must be positive");
  ResourceCounts counts;
  counts.gates = static_cast<std::uint64_t>(s) * (s + 1) / 2;
  counts.cycles = 2 * static_cast<std::uint64_t>(s) - 1;
  return counts;
}

namespace {

bool bit_at(std::uint64_t value, std::size_t i) { // i = 1 is the LSB
  return (value >> (i - 1)) & 1u;
}

// Sum limit for per-bit sums: the full register in representable mode, the
// printed ceil(log2 operand) in paper-literal mode (which drops positions
// at powers of two).
std::size_t sum_limit(std::uint64_t operand, std::size_t s, SizingMode mode) {
  if (mode == SizingMode::representable) return s;
  return operand == 0 ? 0 : std::min(s, ceil_log2(operand));
}

// A clause checking bit i plus all higher register bits is a
// (s - i + 1)-controlled gate: 2(k-1) Toffolis + one controlled gate.
std::uint64_t clause_cost(std::size_t s, std::size_t i) {
  return 2 * static_cast<std::uint64_t>(s - i) + 1;
}

bool operand_fits(std::uint64_t operand, std::size_t s, SizingMode mode) {
  if (operand == 0) return true;
  return mode == SizingMode::representable ? bitlen(operand) <= s
                                           : ceil_log2(operand) <= s;
}

// Apply-if strategy: one clause per zero bit of `operand` ("register >
// operand" in the comparator's normal form).
std::uint64_t strategy_apply_if(std::uint64_t operand, std::size_t limit,
                                std::size_t s) {
  std::uint64_t gates = 0;
  for (std::size_t i = 1; i <= limit; ++i)
    if (!bit_at(operand, i)) gates += clause_cost(s, i);
  return gates;
}

// Invert-if-not strategy: one unconditional gate, then one clause per set
// bit of `operand` ("register < operand").
std::uint64_t strategy_invert_if(std::uint64_t operand, std::size_t limit,
                                 std::size_t s) {
  std::uint64_t gates = 1;
  for (std::size_t i = 1; i <= limit; ++i)
    if (bit_at(operand, i)) gates += clause_cost(s, i);
  return gates;
}

} // namespace

std::uint64_t direct_injection_gates(std::uint64_t value, std::size_t s,
                                     SizingMode mode) {
  if (value < 1) throw std::invalid_argument("injected value must be positive");
  if (s < 1) throw std::invalid_argument("register size must be positive");
  if (mode == SizingMode::representable && bitlen(value) > s)
    throw std::invalid_argument("value exceeds register");
  const std::size_t limit = std::min(s, mode == SizingMode::representable
                                            ? bitlen(value)
                                            : ceil_log2(value));
  std::uint64_t gates = 0;
  for (std::size_t i = 1; i <= limit; ++i)
    if (bit_at(value, i)) gates += static_cast<std::uint64_t>(s + 1 - i);
  return gates;
}

ComparisonStrategies comparison_strategies(ComparisonKind kind,
                                           std::uint64_t operand,
                                           std::size_t s, SizingMode mode) {
  if (s < 1) throw std::invalid_argument("register size must be positive");
  ComparisonStrategies out;
  switch (kind) {
    case ComparisonKind::eq0:
      // An s-controlled flip on the all-zero register state.
      out.apply_if = 2 * static_cast<std::uint64_t>(s) - 1;
      return out;
    case ComparisonKind::geq: {
      if (operand < 1)
        throw std::invalid_argument("geq comparison needs operand >= 1");
      if (!operand_fits(operand, s, mode))
        throw std::invalid_argument("operand exceeds register");
      // register >= z  <=>  register > z-1  (apply-if)
      //                <=>  not (register < z)  (invert-if-not)
      out.apply_if =
          strategy_apply_if(operand - 1, sum_limit(operand, s, mode), s);
      out.invert_if =
          strategy_invert_if(operand, sum_limit(operand, s, mode), s);
      return out;
    }
    case ComparisonKind::gt: {
      if (!operand_fits(operand, s, mode))
        throw std::invalid_argument("operand exceeds register");
      const std::size_t limit = sum_limit(operand, s, mode);
      out.apply_if = strategy_apply_if(operand, limit, s);
      if (operand + 1 <= (std::uint64_t{1} << s) - 1)
        out.invert_if = strategy_invert_if(operand + 1, limit, s);
      return out;
    }
  }
  throw std::invalid_argument("unknown comparison kind");
}

std::uint64_t comparison_gates(ComparisonKind kind, std::uint64_t operand,
                               std::size_t s, SizingMode mode) {
  const ComparisonStrategies strategies =
      comparison_strategies(kind, operand, s, mode);
  if (strategies.invert_if.has_value())
    return std::min(strategies.apply_if, *strategies.invert_if);
  return strategies.apply_if;
}

namespace {

// Items whose cost exceeds the full capacity can never be included: their
// capacity comparator is constantly false, so the whole layer unitary is
// the identity and contributes no gates. Only the remaining items carry
// circuitry; an item that fits alone always has p_m within any admissible
// profit bound and z_m within the capacity register.
std::vector<std::size_t> circuit_items(const KnapsackInstance& instance) {
  std::vector<std::size_t> items;
  for (std::size_t m = 0; m < instance.size(); ++m)
    if (instance.costs[m] <= instance.capacity) items.push_back(m);
  return items;
}

} // namespace

ResourceCounts adder_totals(const KnapsackInstance& instance,
                            std::int64_t profit_bound, SizingMode mode) {
  const RegisterSizes sizes = register_sizes(instance, profit_bound, mode);
  const std::vector<std::size_t> items = circuit_items(instance);
  if (items.empty()) return ResourceCounts{};
  const ResourceCounts qft = qft_counts(sizes.profit);
  std::uint64_t direct = 0;
  for (std::size_t m : items)
    direct += direct_injection_gates(
        static_cast<std::uint64_t>(instance.profits[m]), sizes.profit, mode);
  ResourceCounts counts;
  counts.gates = 2 * qft.gates + direct;
  // The chained injections all share their path-qubit controls and
  // serialise; only the enclosing transform pair parallelises internally.
  counts.cycles = 2 * qft.cycles + direct;
  return counts;
}

ResourceCounts subtractor_totals(const KnapsackInstance& instance,
                                 SizingMode mode) {
  validate_instance(instance);
  const std::vector<std::size_t> items = circuit_items(instance);
  if (items.empty()) return ResourceCounts{};
  const std::size_t s =
      register_width(static_cast<std::uint64_t>(instance.capacity), mode);
  const ResourceCounts qft = qft_counts(s);
  std::uint64_t direct = 0;
  for (std::size_t i = 0; i + 1 < items.size(); ++i) // last subtraction omitted
    direct += direct_injection_gates(
        static_cast<std::uint64_t>(instance.costs[items[i]]), s, mode);
  ResourceCounts counts;
  counts.gates = 2 * items.size() * qft.gates + direct;
  counts.cycles = 2 * items.size() * qft.cycles + direct;
  return counts;
}

QtgBreakdown qtg_breakdown(const KnapsackInstance& instance,
                           std::int64_t profit_bound, SizingMode mode) {
  QtgBreakdown breakdown;
  breakdown.mode = mode;
  breakdown.profit_bound = profit_bound;
  breakdown.registers = register_sizes(instance, profit_bound, mode);
  breakdown.qubits_total = breakdown.registers.total();
  breakdown.adder = adder_totals(instance, profit_bound, mode);
  breakdown.subtractor = subtractor_totals(instance, mode);

  const std::size_t n = instance.size();
  const std::size_t s_z = breakdown.registers.capacity;
  const std::size_t s_p = breakdown.registers.profit;
  const std::uint64_t qft_z = qft_counts(s_z).cycles;
  const std::uint64_t qft_p = qft_counts(s_p).cycles;

  const std::vector<std::size_t> items = circuit_items(instance);
  const std::size_t first_item = items.empty() ? n : items.front();
  const std::size_t last_item = items.empty() ? n : items.back();

  std::uint64_t comparison_total = 0;
  breakdown.comparison_gates.reserve(n);
  breakdown.layer_cycles.reserve(n);
  for (std::size_t m = 0; m < n; ++m) {
    if (instance.costs[m] > instance.capacity) {
      // Constant-false comparator: the layer is the identity.
      breakdown.comparison_gates.push_back(0);
      breakdown.layer_cycles.push_back(0);
      continue;
    }
    const auto z = static_cast<std::uint64_t>(instance.costs[m]);
    const auto p = static_cast<std::uint64_t>(instance.profits[m]);
    const std::uint64_t comparison =
        comparison_gates(ComparisonKind::geq, z, s_z, mode);
    comparison_total += comparison;
    breakdown.comparison_gates.push_back(comparison);

    const std::uint64_t add = direct_injection_gates(p, s_p, mode);
    std::uint64_t cycles; // comparison cycles equal comparison gates
    if (items.size() == 1) {
      // Single live layer: the profit transform pair brackets its addition.
      cycles = comparison + add + 2 * qft_p;
    } else if (m == first_item) {
      const std::uint64_t sub = direct_injection_gates(z, s_z, mode);
      cycles = comparison + sub + std::max(2 * qft_z, qft_p + add);
    } else if (m != last_item) {
      const std::uint64_t sub = direct_injection_gates(z, s_z, mode);
      cycles = comparison + sub + std::max(2 * qft_z, add);
    } else {
      // Last live layer: no subtraction; its capacity transform pair stays
      // in the gate totals but off the critical path.
      cycles = comparison + add + qft_p;
    }
    breakdown.layer_cycles.push_back(cycles);
  }

  breakdown.qtg.qubits = breakdown.qubits_total;
  breakdown.qtg.gates =
      comparison_total + breakdown.subtractor.gates + breakdown.adder.gates;
  breakdown.qtg.cycles = 0;
  for (std::uint64_t c : breakdown.layer_cycles) breakdown.qtg.cycles += c;
  return breakdown;
}

ResourceCounts qtg_totals(const KnapsackInstance& instance,
                          std::int64_t profit_bound, SizingMode mode) {
  return qtg_breakdown(instance, profit_bound, mode).qtg;
}

ResourceCounts search_tally(const SearchTrace& trace,
                            const KnapsackInstance& instance,
                            std::int64_t profit_bound, SizingMode mode) {
  if (trace.instance_digest != instance_digest(instance))
    throw std::invalid_argument("trace digest does not match instance");
  const RegisterSizes sizes = register_sizes(instance, profit_bound, mode);
  const ResourceCounts generator = qtg_totals(instance, profit_bound, mode);
  const std::uint64_t zero_check =
      comparison_gates(ComparisonKind::eq0, 0, sizes.profit, mode);

  ResourceCounts tally;
  tally.qubits = sizes.total();
  for (const auto& stage : trace.stages) {
    const std::uint64_t oracle_gates =
        zero_check + comparison_gates(ComparisonKind::gt,
                                      static_cast<std::uint64_t>(stage.threshold),
                                      sizes.profit, mode);
    for (const auto& round : stage.rounds) {
      tally.gates +=
          (2 * round.power + 1) * generator.gates + round.power * oracle_gates;
      tally.cycles += (2 * round.power + 1) * generator.cycles +
                      round.power * oracle_gates;
    }
  }
  return tally;
}

// ---------------------------------------------------------------------------
// Gate enumerator
// ---------------------------------------------------------------------------

namespace {

struct LayerSchedule {
  std::vector<GateRecord> gates;
  std::uint64_t depth = 0;
};

void emit_clause(std::vector<GateRecord>& out, std::uint16_t layer,
                 std::size_t controls) {
  for (std::size_t t = 0; t + 1 < controls; ++t)
    out.push_back({GateKind::comparator_toffoli, layer, 0});
  out.push_back({GateKind::comparator_controlled_gate, layer, 0});
  for (std::size_t t = 0; t + 1 < controls; ++t)
    out.push_back({GateKind::comparator_toffoli, layer, 0});
}

// Both comparator strategies materialised gate by gate; the cheaper one is
// kept. Clause widths follow the digital comparator: position i plus all
// s - i higher equality checks.
std::vector<GateRecord> enumerate_comparator(std::uint16_t layer,
                                             std::uint64_t operand,
                                             std::size_t s, SizingMode mode) {
  const std::size_t limit = sum_limit(operand, s, mode);

  std::vector<GateRecord> apply_if;
  for (std::size_t i = 1; i <= limit; ++i)
    if (!bit_at(operand - 1, i))
      emit_clause(apply_if, layer, s - i + 1);

  std::vector<GateRecord> invert_if;
  invert_if.push_back({GateKind::comparator_controlled_gate, layer, 0});
  for (std::size_t i = 1; i <= limit; ++i)
    if (bit_at(operand, i)) emit_clause(invert_if, layer, s - i + 1);

  return apply_if.size() <= invert_if.size() ? apply_if : invert_if;
}

// Transform cascade on s wires. Wire w carries w gates (one Hadamard, then
// w-1 controlled phases); consecutive wires start two slots apart, so an
// as-soon-as-possible schedule reaches depth 2s-1.
std::uint64_t emit_qft(std::vector<GateRecord>& out, std::uint16_t layer,
                       std::size_t s, std::uint64_t offset) {
  std::uint64_t depth = 0;
  for (std::size_t w = s; w >= 1; --w) {
    const std::uint64_t start = 2 * static_cast<std::uint64_t>(s - w);
    out.push_back({GateKind::qft_hadamard, layer, offset + start + 1});
    depth = std::max(depth, start + 1);
    for (std::size_t k = 1; k < w; ++k) {
      out.push_back({GateKind::qft_controlled_phase, layer,
                     offset + start + 1 + k});
      depth = std::max(depth, start + 1 + k);
    }
    if (w == 1) break;
  }
  return depth;
}

std::size_t rotations_for(std::uint64_t value, std::size_t s,
                          SizingMode mode) {
  const std::size_t limit = std::min(s, mode == SizingMode::representable
                                            ? bitlen(value)
                                            : ceil_log2(value));
  std::size_t rotations = 0;
  for (std::size_t i = 1; i <= limit; ++i)
    if (bit_at(value, i)) rotations += s + 1 - i;
  return rotations;
}

} // namespace

GateEnumeration enumerate_gates(const KnapsackInstance& instance,
                                std::int64_t profit_bound, SizingMode mode) {
  validate_instance(instance);
  if (instance.size() > 8)
    throw std::invalid_argument("gate enumeration limited to 8 items");
  const RegisterSizes sizes = register_sizes(instance, profit_bound, mode);
  const std::size_t n = instance.size();
  const std::size_t s_z = sizes.capacity;
  const std::size_t s_p = sizes.profit;

  GateEnumeration result;
  std::uint64_t base = 0; // completed depth of all previous layers

  const std::vector<std::size_t> items = circuit_items(instance);
  const std::size_t live = items.size();
  for (std::size_t m = 0; m < n; ++m) {
    if (instance.costs[m] > instance.capacity) continue; // identity layer
    const auto layer = static_cast<std::uint16_t>(m + 1);
    const auto z = static_cast<std::uint64_t>(instance.costs[m]);
    const auto p = static_cast<std::uint64_t>(instance.profits[m]);
    const bool first = m == items.front();
    const bool last = m == items.back();

    // Comparator: strictly serial (shared ancilla ladder), one slot each.
    auto comparator = enumerate_comparator(layer, z, s_z, mode);
    for (std::size_t g = 0; g < comparator.size(); ++g)
      comparator[g].cycle = base + g + 1;
    const std::uint64_t comp_depth = comparator.size();
    result.gates.insert(result.gates.end(), comparator.begin(),
                        comparator.end());
    const std::uint64_t t0 = base + comp_depth;

    const std::size_t add_rotations = rotations_for(p, s_p, mode);
    const std::size_t sub_rotations = last ? 0 : rotations_for(z, s_z, mode);

    std::uint64_t layer_depth = comp_depth;

    if (last && live > 1) {
      // Profit chain: injections then the closing transform. The capacity
      // transform pair is emitted for the gate totals but not on the
      // critical path (there is no subtraction left to wrap).
      for (std::size_t r = 0; r < add_rotations; ++r)
        result.gates.push_back(
            {GateKind::injection_rotation, layer, t0 + r + 1});
      const std::uint64_t inv_depth =
          emit_qft(result.gates, layer, s_p, t0 + add_rotations);
      const std::uint64_t pair_depth = emit_qft(result.gates, layer, s_z, t0);
      emit_qft(result.gates, layer, s_z, t0 + pair_depth);
      layer_depth += add_rotations + inv_depth;
    } else if (live == 1) {
      // Degenerate single layer: opening transform, injections, closing
      // transform, all on the profit register; capacity pair off-path.
      const std::uint64_t open_depth =
          emit_qft(result.gates, layer, s_p, t0);
      for (std::size_t r = 0; r < add_rotations; ++r)
        result.gates.push_back(
            {GateKind::injection_rotation, layer, t0 + open_depth + r + 1});
      const std::uint64_t close_depth = emit_qft(
          result.gates, layer, s_p, t0 + open_depth + add_rotations);
      const std::uint64_t pair_depth = emit_qft(result.gates, layer, s_z, t0);
      emit_qft(result.gates, layer, s_z, t0 + pair_depth);
      layer_depth += open_depth + add_rotations + close_depth;
    } else {
      // Capacity chain: transform, subtraction window, inverse transform.
      const std::uint64_t qft_z_depth =
          emit_qft(result.gates, layer, s_z, t0);
      for (std::size_t r = 0; r < sub_rotations; ++r)
        result.gates.push_back(
            {GateKind::injection_rotation, layer, t0 + qft_z_depth + r + 1});
      const std::uint64_t inv_z_depth = emit_qft(
          result.gates, layer, s_z, t0 + qft_z_depth + sub_rotations);

      // Profit chain: (first layer only) opening transform, then the
      // addition rotations. The chain shares the path-qubit control with
      // the subtraction, so its slots skip the subtraction window.
      std::uint64_t profit_len = add_rotations;
      std::vector<std::uint64_t> profit_slots;
      if (first) {
        // The opening profit transform has no controls; it still starts
        // after the comparator along with everything else in the layer.
        profit_len += 2 * s_p - 1;
      }
      std::uint64_t last_profit_slot = 0;
      for (std::uint64_t r = 1; r <= profit_len; ++r) {
        const std::uint64_t slot =
            r <= qft_z_depth ? r : r + sub_rotations;
        profit_slots.push_back(slot);
        last_profit_slot = slot;
      }
      if (first) {
        // Transform gates take the first 2s-1 slots of the chain; their
        // internal cascade structure is already depth-checked by the
        // standalone emission, so slots are assigned linearly here.
        std::vector<GateRecord> opening;
        emit_qft(opening, layer, s_p, 0);
        std::sort(opening.begin(), opening.end(),
                  [](const GateRecord& a, const GateRecord& b) {
                    return a.cycle < b.cycle;
                  });
        std::size_t slot_index = 0;
        std::uint64_t previous_cycle = 0;
        std::uint64_t assigned = 0;
        for (auto& gate : opening) {
          if (gate.cycle != previous_cycle) {
            previous_cycle = gate.cycle;
            assigned = profit_slots[slot_index++];
          }
          gate.cycle = t0 + assigned;
          result.gates.push_back(gate);
        }
        for (std::size_t r = 0; r < add_rotations; ++r)
          result.gates.push_back({GateKind::injection_rotation, layer,
                                  t0 + profit_slots[slot_index + r]});
      } else {
        for (std::size_t r = 0; r < add_rotations; ++r)
          result.gates.push_back(
              {GateKind::injection_rotation, layer, t0 + profit_slots[r]});
      }

      const std::uint64_t capacity_end =
          qft_z_depth + sub_rotations + inv_z_depth;
      layer_depth += std::max(capacity_end, last_profit_slot);
    }

    base += layer_depth;
  }

  result.depth = base;
  return result;
}

} // namespace qtg
