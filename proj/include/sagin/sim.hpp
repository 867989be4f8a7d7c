#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sagin/caching.hpp"
#include "sagin/cost.hpp"
#include "sagin/dqn.hpp"
#include "sagin/domain.hpp"
#include "sagin/market.hpp"
#include "sagin/rng.hpp"

namespace sagin {

// Popularity weights of every service for one operator at one slot; they average 1, so
// an operator's expected load is (number of services) * (sum of user rates).
std::vector<double> popularity_weights(const ScenarioConfig& cfg, int op, int slot);

// Poisson draws per (operator, service) routed to the service's model.
RequestMatrix generate_requests(Rng& rng, const ScenarioConfig& cfg, int slot);

// Requests of one slot drawn from a stream keyed by (rng_seed, slot), so every policy
// sees the same workload.
RequestMatrix slot_requests(const ScenarioConfig& cfg, int slot);

struct LoggedEvent {
  int op = 0;
  CacheEvent event;
};

struct SlotTrace {
  int slot = 0;
  RequestMatrix requests;
  std::vector<CostBreakdown> costs;              // per operator
  std::vector<LoggedEvent> events;
  std::vector<std::vector<ContextState>> contexts;  // per operator, after the slot
  std::vector<double> match_gain;                // per operator: kappa * ln(1/beta) over cached pairs
  std::vector<double> performance_gain;          // per operator: sum R * edge share * A
  std::vector<double> request_total;             // per operator
};

struct ScenarioResult {
  Policy policy = Policy::least_aot;
  std::vector<SlotTrace> traces;
  std::vector<double> average_cost;  // L_total per operator
  std::vector<Valuation> valuations;

  // Mean of L_total over ground BSs.
  double mean_total_cost(const ScenarioConfig& cfg) const;
  // Time-averaged component over ground BSs.
  CostBreakdown mean_breakdown(const ScenarioConfig& cfg) const;
  // Mean alpha * kappa * ln(1/beta) per ground request.
  double mean_performance_gain(const ScenarioConfig& cfg) const;
};

// Throws std::invalid_argument listing violations when validate_config fails.
ScenarioResult run_scenario(const ScenarioConfig& cfg, Policy policy);

// Recomputes averages from traces; used to check ScenarioResult consistency.
std::vector<double> recompute_averages(const ScenarioResult& result);

struct RelayCheck {
  bool feasible = true;
  double slack_s = 0.0;    // coverage time minus relay time
  double relay_time_s = 0.0;
};
RelayCheck satellite_relay_feasible(const ScenarioConfig& cfg, const ScenarioResult& result);

enum class SweepAxis { slots, services, gpus, users, vanish };
std::string_view axis_name(SweepAxis a);
SweepAxis parse_axis(std::string_view name);

// A copy of cfg with the axis set to value; users are redrawn as needed.
ScenarioConfig derive_config(const ScenarioConfig& cfg, SweepAxis axis, double value);

struct SweepRow {
  SweepAxis axis = SweepAxis::gpus;
  double value = 0.0;
  Policy policy = Policy::least_aot;
  std::uint64_t seed = 0;
  double mean_total_cost = 0.0;
  CostBreakdown breakdown;
  double performance_gain = 0.0;
};

// One run per (value, policy, seed offset); seed k uses derive_seed(rng_seed, {k}) for k > 0.
// Rows come back in (value, policy, seed) order regardless of thread scheduling.
std::vector<SweepRow> sweep(const ScenarioConfig& cfg, SweepAxis axis, const std::vector<double>& values,
                            const std::vector<Policy>& policies, int seeds = 1);

std::uint64_t seed_for_run(std::uint64_t base, int k);

// Valuation of every operator, satellite included, from one least-AoT run.
std::vector<Valuation> operator_valuations(const ScenarioConfig& cfg);

// Per-round bid profiles: a log-normal shock shared by all common values and a
// per-bidder log-normal jitter on match gains. Ground bids are truthful; the satellite
// bids a contract price fixed at construction.
class MarketSource {
 public:
  MarketSource(const ScenarioConfig& cfg, std::vector<Valuation> valuations, std::uint64_t seed);

  AuctionRound next();
  double contract() const { return contract_; }
  // Mean first-best surplus max_n v_n over the warm-up draws.
  double reference_surplus() const { return reference_; }
  const std::vector<Valuation>& valuations() const { return valuations_; }

 private:
  std::vector<double> draw_values();
  MarketSettings settings_;
  std::vector<Valuation> valuations_;
  Rng rng_;
  double contract_ = 0.0;
  double reference_ = 0.0;
};

}  // namespace sagin
