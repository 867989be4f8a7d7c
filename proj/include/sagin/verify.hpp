#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "sagin/caching.hpp"
#include "sagin/domain.hpp"
#include "sagin/latent_oracle.hpp"
#include "sagin/market.hpp"

namespace sagin {

struct OracleViolation {
  std::uint64_t seed = 0;  // reproduces the failing case
  std::string description;
};

struct OracleReport {
  std::string suite;
  std::int64_t cases = 0;
  std::int64_t skipped = 0;  // out-of-precondition cases
  std::vector<OracleViolation> violations;
  std::vector<std::string> notes;
  bool passed() const { return violations.empty(); }
};

void write_report_csv(const std::vector<OracleReport>& reports, std::ostream& out);

struct TinyLimits {
  std::size_t services = 3;
  std::size_t models = 2;
  int slots = 2;
};

struct ExhaustiveResult {
  double optimal_cost = 0.0;  // mean L_total over ground BSs
  // Optimal per-slot decisions of each ground BS, [ground index][slot].
  std::vector<std::vector<CacheDecision>> decisions;
  std::int64_t evaluated = 0;
};

// Exact minimiser of the ground-BS total cost over cache vectors on requested pairs and
// edge shares in {0, 1/2, 1}. Starts from an empty cache and uses the scenario's request
// stream. Throws std::invalid_argument with the instance size if it exceeds the limits.
ExhaustiveResult exhaustive_caching_oracle(const ScenarioConfig& cfg, const TinyLimits& limits = {});

// A random enumerable instance: 1-3 services, 1-2 models, 2 slots, 1-2 ground BSs.
ScenarioConfig random_tiny_instance(std::uint64_t seed);

// 50 seeded tiny instances; a violation is a least-AoT gap above the threshold or an
// infeasible least-AoT decision.
OracleReport tiny_optimality_suite(int instances, double threshold, std::uint64_t seed);

using MechanismFn = std::function<MechanismOutcome(const BidProfile&)>;

// Truthful ground bidders never gain from any deviation on a geometric x0.5..x2 grid plus
// bids just either side of their critical payment.
OracleReport strategyproofness_fuzz(const MechanismFn& mechanism, int profiles, int deviations,
                                    std::uint64_t seed, const std::string& name = "strategyproof");

// Winner identity is invariant and payments scale by c when every bid is scaled by c.
OracleReport scaling_invariance_fuzz(const MechanismFn& mechanism, int cases, std::uint64_t seed,
                                     const std::string& name = "scaling");

// msb(., 1) equals spa(.) exactly on profiles with distinct bids.
OracleReport spa_equivalence_fuzz(int profiles, std::uint64_t seed);

// Random latent models through oracle_posterior_gap. A family with sigma >= 1/2 is
// reported as out of precondition and not run. Single-context families must give a
// gap within 1e-12 of zero.
OracleReport theorem1_sweep(const LatentFamily& family, int trials, std::uint64_t seed);

// Analytic batch-loss gradients against central differences on random small networks.
OracleReport gradient_check_suite(int networks, double tolerance, std::uint64_t seed);

}  // namespace sagin
