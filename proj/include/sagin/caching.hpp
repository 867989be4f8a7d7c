#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sagin/cot.hpp"
#include "sagin/domain.hpp"

namespace sagin {

enum class Policy { least_aot, fifo, lfu };

std::string_view policy_name(Policy p);
// Throws std::invalid_argument on an unknown name.
Policy parse_policy(std::string_view name);

// Per-pair decision for one operator and slot. edge is the edge-execution share of a
// cached entry's requests; the cloud share is offload() = 1 - a * edge.
struct CacheDecision {
  std::vector<std::uint8_t> cached;       // a
  std::vector<double> edge;               // in [0, 1]
  std::vector<std::uint8_t> uncacheable;  // model larger than the operator's memory

  static CacheDecision empty(std::size_t pairs);
  std::size_t size() const { return cached.size(); }
  double offload(std::size_t pair) const { return cached[pair] ? 1.0 - edge[pair] : 1.0; }
  bool operator==(const CacheDecision&) const = default;
};

struct OperatorCacheState {
  std::vector<ContextState> contexts;
  std::vector<std::uint8_t> cached;
  double used_memory_gb = 0.0;
  std::vector<std::int64_t> insertion_seq;  // -1 when not cached
  std::vector<double> hit_counts;           // requests seen since the start of the run
  std::int64_t next_seq = 0;

  static OperatorCacheState empty(std::size_t pairs);
  // Cached pairs, oldest insertion first.
  std::vector<std::size_t> insertion_order() const;
  bool operator==(const OperatorCacheState&) const = default;
};

enum class CacheEventKind { admit, evict, reject };
std::string_view event_name(CacheEventKind k);

struct CacheEvent {
  CacheEventKind kind = CacheEventKind::admit;
  int service = 0;
  int model = 0;
  double kappa = 0.0;
  double tokens = 0.0;
};

struct PolicyStep {
  CacheDecision decision;
  std::vector<CacheEvent> events;
};

// Memory, the edge-flag/cache coupling, the per-slot energy budget and the context
// window. Returns every violated constraint.
std::vector<std::string> check_feasible(const CacheDecision& decision, const OperatorCacheState& state,
                                        std::span<const double> requests, const Operator& op,
                                        const ScenarioConfig& cfg);

// Requested cached entries are kept first; misses are then admitted in descending
// request count, evicting unprotected entries in policy order until the model fits.
PolicyStep policy_step(Policy policy, const OperatorCacheState& state, std::span<const double> requests,
                       const Operator& op, const ScenarioConfig& cfg);
PolicyStep least_aot_step(const OperatorCacheState& state, std::span<const double> requests,
                          const Operator& op, const ScenarioConfig& cfg);
PolicyStep fifo_step(const OperatorCacheState& state, std::span<const double> requests, const Operator& op,
                     const ScenarioConfig& cfg);
PolicyStep lfu_step(const OperatorCacheState& state, std::span<const double> requests, const Operator& op,
                    const ScenarioConfig& cfg);

// Advances contexts, memory, insertion order and hit counts. Throws std::invalid_argument
// for an infeasible decision; the input state is never modified.
OperatorCacheState apply_decision(const OperatorCacheState& state, const CacheDecision& decision,
                                  std::span<const double> requests, const Operator& op,
                                  const ScenarioConfig& cfg);

}  // namespace sagin
