#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "sagin/dqn.hpp"
#include "sagin/market.hpp"
#include "sagin/mlp.hpp"
#include "sagin/sim.hpp"

namespace sagin {

enum class Mechanism { dqmsb, spa, msb, myopic, optimal };
std::string_view mechanism_name(Mechanism m);
// Throws std::invalid_argument on an unknown name.
Mechanism parse_mechanism(std::string_view name);

struct CurveRow {
  int episode = 0;
  double mean_reward = 0.0;
  double loss = 0.0;
  double epsilon = 0.0;
  std::vector<int> rho_histogram;  // action counts over the episode
};

struct TrainingResult {
  Mlp net;
  std::vector<CurveRow> curve;
  double contract = 0.0;
};

// State width: satellite plus every ground BS.
std::size_t market_width(const std::vector<Valuation>& valuations);

// Runs cfg.dqn.episodes (or the override when > 0) episodes of Algorithm 2 against a
// MarketSource seeded from seed.
TrainingResult train_dqmsb(const ScenarioConfig& cfg, const std::vector<Valuation>& valuations,
                           std::uint64_t seed, int episodes = 0);

struct EvalRow {
  int round = 0;
  Mechanism mechanism = Mechanism::spa;
  double rho = 1.0;
  int winner = 0;
  double payment = 0.0;
  Surplus surplus;
  double contract_bid = 0.0;  // x_0
  double top_bid = 0.0;       // x_(1)
  double second_bid = 0.0;    // x_(2)
};

struct EvalSettings {
  int rounds = 1000;
  double fixed_rho = 3.1622776601683795;  // 10^0.5
  int history = 1000;                     // profiles behind optimal_rho
};

// Every mechanism clears the same profile stream; rows are grouped by round, then
// mechanism in the given order. net is required only for dqmsb.
std::vector<EvalRow> evaluate_mechanisms(const ScenarioConfig& cfg, const std::vector<Valuation>& valuations,
                                         const Mlp* net, const std::vector<Mechanism>& mechanisms,
                                         std::uint64_t seed, const EvalSettings& settings = {});

// Mean total surplus of one mechanism across rows.
double mean_surplus(const std::vector<EvalRow>& rows, Mechanism m);

// Least-squares slope of mean_reward over the last `window` episodes, divided by the
// mean reward of that window.
double relative_plateau_slope(const std::vector<CurveRow>& curve, std::size_t window);

}  // namespace sagin
