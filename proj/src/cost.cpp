#include "sagin/cost.hpp"

#include <stdexcept>

#include "sagin/cot.hpp"
#include "sagin/linkmodel.hpp"

namespace sagin {

CostBreakdown& CostBreakdown::operator+=(const CostBreakdown& o) {
  switching += o.switching;
  transmission += o.transmission;
  compute += o.compute;
  accuracy += o.accuracy;
  cloud += o.cloud;
  total += o.total;
  return *this;
}

double switching_cost(std::span<const std::uint8_t> prev, std::span<const std::uint8_t> cur, double lambda) {
  double loads = 0.0;
  for (std::size_t p = 0; p < cur.size(); ++p)
    if (cur[p] && !prev[p]) loads += 1.0;
  return lambda * loads;
}

double transmission_cost(const CacheDecision& d, std::span<const double> requests,
                         std::span<const double> input_bits, double mean_rate, double core_rate,
                         double access_cost) {
  double c = 0.0;
  for (std::size_t p = 0; p < requests.size(); ++p) {
    if (requests[p] == 0.0) continue;
    c += requests[p] * (access_cost * input_bits[p] / mean_rate + input_bits[p] / core_rate * d.offload(p));
  }
  return c;
}

double compute_cost(const CacheDecision& d, std::span<const double> requests,
                    std::span<const double> energy_per_token, std::span<const double> tokens_per_request,
                    double compute_rate) {
  double c = 0.0;
  for (std::size_t p = 0; p < requests.size(); ++p) {
    const double delta = delta_tokens(d.cached[p] != 0, d.offload(p), requests[p], tokens_per_request[p]);
    c += delta * energy_per_token[p] / compute_rate;
  }
  return c;
}

double accuracy_cost(const CacheDecision& d, std::span<const double> requests, std::span<const double> unit_costs) {
  double c = 0.0;
  for (std::size_t p = 0; p < requests.size(); ++p)
    if (d.cached[p]) c += unit_costs[p] * requests[p] * (1.0 - d.offload(p));
  return c;
}

double cloud_cost(const CacheDecision& d, std::span<const double> requests, std::span<const double> unit_costs) {
  double c = 0.0;
  for (std::size_t p = 0; p < requests.size(); ++p) c += unit_costs[p] * d.offload(p) * requests[p];
  return c;
}

double total_cost(std::span<const CostBreakdown> per_slot) {
  if (per_slot.empty()) throw std::domain_error("total_cost needs at least one slot");
  double s = 0.0;
  for (const auto& b : per_slot) s += b.total;
  return s / static_cast<double>(per_slot.size());
}

OperatorCostInputs cost_inputs(const ScenarioConfig& cfg, const Operator& op) {
  OperatorCostInputs in;
  const std::size_t n = cfg.pair_count();
  for (std::size_t p = 0; p < n; ++p) {
    const auto& s = cfg.services[p / cfg.models.size()];
    const std::size_t m = p % cfg.models.size();
    in.input_bits.push_back(s.input_size_mb * kBitsPerMegabyte);
    in.energy_per_token.push_back(cfg.models[m].energy_per_token);
    in.tokens_per_request.push_back(s.cot_example_tokens);
    in.cloud_unit_cost.push_back(op.cloud_access_cost * cfg.cloud_unit_cost[m]);
  }
  in.mean_rate = operator_mean_rate(op, cfg.noise_power_w);
  return in;
}

CostBreakdown slot_cost(const ScenarioConfig& cfg, const Operator& op, const OperatorCostInputs& in,
                        std::span<const std::uint8_t> prev_cached, const CacheDecision& d,
                        const OperatorCacheState& after, std::span<const double> requests) {
  CostBreakdown b;
  b.switching = switching_cost(prev_cached, d.cached, op.switch_coeff);
  b.transmission = transmission_cost(d, requests, in.input_bits, in.mean_rate, op.core_rate, op.edge_access_cost);
  if (!op.is_satellite()) {
    b.compute = compute_cost(d, requests, in.energy_per_token, in.tokens_per_request, op.compute_rate);
    std::vector<double> unit(requests.size(), 0.0);
    for (std::size_t p = 0; p < requests.size(); ++p) {
      if (!d.cached[p]) continue;
      const std::size_t i = p / cfg.models.size();
      const std::size_t m = p % cfg.models.size();
      unit[p] = unit_accuracy_cost(cfg.services[i].zero_shot_accuracy[m], cfg.models[m].cot_gain_beta,
                                   after.contexts[p].aot);
    }
    b.accuracy = accuracy_cost(d, requests, unit);
  }
  b.cloud = cloud_cost(d, requests, in.cloud_unit_cost);
  b.finalize();
  return b;
}

}  // namespace sagin
