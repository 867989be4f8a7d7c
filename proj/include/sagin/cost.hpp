#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sagin/caching.hpp"
#include "sagin/domain.hpp"

namespace sagin {

inline constexpr double kBitsPerMegabyte = 8e6;

struct CostBreakdown {
  double switching = 0.0;
  double transmission = 0.0;
  double compute = 0.0;
  double accuracy = 0.0;
  double cloud = 0.0;
  double total = 0.0;

  // Sets total to the component sum.
  void finalize() { total = switching + transmission + compute + accuracy + cloud; }
  CostBreakdown& operator+=(const CostBreakdown& o);
};

// lambda * number of pairs loaded this slot.
double switching_cost(std::span<const std::uint8_t> prev_cached, std::span<const std::uint8_t> cached,
                      double lambda);

// sum R * (access * d / E[r] + d / r_core * offload), d in bits.
double transmission_cost(const CacheDecision& decision, std::span<const double> requests,
                         std::span<const double> input_bits, double mean_rate, double core_rate,
                         double access_cost = 1.0);

// sum delta * e_m / f_n, delta = a * (1 - offload) * R * k.
double compute_cost(const CacheDecision& decision, std::span<const double> requests,
                    std::span<const double> energy_per_token, std::span<const double> tokens_per_request,
                    double compute_rate);

// sum unit_cost * R * a * (1 - offload).
double accuracy_cost(const CacheDecision& decision, std::span<const double> requests,
                     std::span<const double> unit_costs);

// sum unit_cost * offload * R. Uncached requested pairs count as fully offloaded.
double cloud_cost(const CacheDecision& decision, std::span<const double> requests,
                  std::span<const double> unit_costs);

// Time average of per-slot totals. Throws std::domain_error when empty.
double total_cost(std::span<const CostBreakdown> per_slot);

// Per-pair constants for one operator.
struct OperatorCostInputs {
  std::vector<double> input_bits;
  std::vector<double> energy_per_token;
  std::vector<double> tokens_per_request;
  std::vector<double> cloud_unit_cost;  // cloud_access_cost * model multiplier
  double mean_rate = 0.0;
};

OperatorCostInputs cost_inputs(const ScenarioConfig& cfg, const Operator& op);

// One operator's slot cost. after holds the contexts produced by this slot's decision;
// accuracy uses those AoT values.
CostBreakdown slot_cost(const ScenarioConfig& cfg, const Operator& op, const OperatorCostInputs& in,
                        std::span<const std::uint8_t> prev_cached, const CacheDecision& decision,
                        const OperatorCacheState& after, std::span<const double> requests);

}  // namespace sagin
