#include "qtg/report.hpp"

namespace qtg {

namespace {

Json round_json(const QSearchRound& round, std::size_t n) {
  Json out;
  out["l"] = round.level;
  out["m"] = round.range;
  out["j"] = round.power;
  if (round.outcome.has_value()) {
    out["outcome"] = {{"type", "state"},
                      {"path", path_string(round.outcome->path, n)},
                      {"profit", round.outcome->profit}};
  } else {
    out["outcome"] = {{"type", "remainder"}};
  }
  return out;
}

Json config_json(const SearchTrace& trace) {
  Json config;
  config["growth"] = trace.growth;
  config["cutoff"] = trace.cutoff;
  config["delta_target"] = trace.delta_target;
  if (trace.bias_override.has_value())
    config["bias_override"] = *trace.bias_override;
  else
    config["bias_override"] = nullptr;
  config["tight_profit_bound"] = trace.tight_profit_bound;
  return config;
}

Json trace_body(const SearchTrace& trace) {
  const std::size_t n = trace.result.bits.size();
  Json body;
  body["instance_digest"] = trace.instance_digest;
  body["seed"] = trace.seed;
  body["config"] = config_json(trace);
  body["thresholds"] = trace.thresholds();
  Json rounds = Json::array();
  for (const auto& stage : trace.stages) {
    Json stage_rounds = Json::array();
    for (const auto& round : stage.rounds)
      stage_rounds.push_back(round_json(round, n));
    rounds.push_back(std::move(stage_rounds));
  }
  body["rounds"] = std::move(rounds);
  body["m_total"] = trace.m_total_final;
  body["result"] = {{"bits", bits_string(trace.result.bits)},
                    {"profit", trace.result.profit}};
  body["resources"] = {{"qubits", trace.tallies.qubits},
                       {"gates", trace.tallies.gates},
                       {"cycles", trace.tallies.cycles}};
  return body;
}

} // namespace

Json state_set_json(const StateSet& set, std::size_t n) {
  Json out;
  out["schema"] = "qtg.state-set/1";
  out["threshold"] = set.threshold;
  out["q_T"] = set.total_probability;
  Json states = Json::array();
  for (const auto& state : set.states) {
    states.push_back({{"path", path_string(state.path, n)},
                      {"x", state.residual_capacity},
                      {"P", state.profit},
                      {"q", state.probability}});
  }
  out["states"] = std::move(states);
  return out;
}

Json trace_json(const SearchTrace& trace) {
  Json out;
  out["schema"] = "qtg.trace/1";
  out.update(trace_body(trace));
  return out;
}

Json run_report_json(const SearchTrace& trace,
                     const std::optional<OracleCheck>& oracle,
                     double elapsed_ms) {
  Json out;
  out["schema"] = "qtg.run-report/1";
  out.update(trace_body(trace));
  if (oracle.has_value())
    out["oracle"] = {{"optimum", oracle->optimum}, {"match", oracle->match}};
  out["elapsed_ms"] = elapsed_ms;
  return out;
}

Json estimate_json(const KnapsackInstance& instance,
                   const QtgBreakdown& breakdown) {
  Json out;
  out["schema"] = "qtg.estimate/1";
  out["instance_digest"] = instance_digest(instance);
  out["mode"] = breakdown.mode == SizingMode::representable
                    ? "representable"
                    : "paper-literal";
  out["profit_bound"] = breakdown.profit_bound;
  out["registers"] = {{"path", breakdown.registers.path},
                      {"capacity", breakdown.registers.capacity},
                      {"profit", breakdown.registers.profit},
                      {"ancilla", breakdown.registers.ancilla}};
  out["qubits_total"] = breakdown.qubits_total;
  out["qtg"] = {{"gates", breakdown.qtg.gates},
                {"cycles", breakdown.qtg.cycles}};
  Json per_layer = Json::array();
  for (std::size_t m = 0; m < breakdown.layer_cycles.size(); ++m)
    per_layer.push_back(
        {{"item", m + 1}, {"cycles", breakdown.layer_cycles[m]}});
  out["per_layer"] = std::move(per_layer);
  out["comparisons"] = breakdown.comparison_gates;
  out["adder"] = {{"gates", breakdown.adder.gates},
                  {"cycles", breakdown.adder.cycles}};
  out["subtractor"] = {{"gates", breakdown.subtractor.gates},
                       {"cycles", breakdown.subtractor.cycles}};
  return out;
}

} // namespace qtg
