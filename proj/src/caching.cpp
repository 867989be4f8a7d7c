#include "sagin/caching.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace sagin {

std::string_view policy_name(Policy p) {
  switch (p) {
    case Policy::least_aot: return "least_aot";
    case Policy::fifo: return "fifo";
    case Policy::lfu: return "lfu";
  }
  return "?";
}

Policy parse_policy(std::string_view name) {
  if (name == "least_aot") return Policy::least_aot;
  if (name == "fifo") return Policy::fifo;
  if (name == "lfu") return Policy::lfu;
  throw std::invalid_argument("unknown policy: " + std::string(name));
}

std::string_view event_name(CacheEventKind k) {
  switch (k) {
    case CacheEventKind::admit: return "admit";
    case CacheEventKind::evict: return "evict";
    case CacheEventKind::reject: return "reject";
  }
  return "?";
}

CacheDecision CacheDecision::empty(std::size_t pairs) {
  return {std::vector<std::uint8_t>(pairs, 0), std::vector<double>(pairs, 0.0),
          std::vector<std::uint8_t>(pairs, 0)};
}

OperatorCacheState OperatorCacheState::empty(std::size_t pairs) {
  OperatorCacheState s;
  s.contexts.assign(pairs, ContextState{});
  s.cached.assign(pairs, 0);
  s.insertion_seq.assign(pairs, -1);
  s.hit_counts.assign(pairs, 0.0);
  return s;
}

std::vector<std::size_t> OperatorCacheState::insertion_order() const {
  std::vector<std::size_t> out;
  for (std::size_t p = 0; p < cached.size(); ++p)
    if (cached[p]) out.push_back(p);
  std::sort(out.begin(), out.end(), [this](std::size_t a, std::size_t b) {
    return insertion_seq[a] != insertion_seq[b] ? insertion_seq[a] < insertion_seq[b] : a < b;
  });
  return out;
}

namespace {

struct PairInfo {
  int service;
  int model;
  const LlmModel* llm;
  double k;
};

PairInfo pair_info(const ScenarioConfig& cfg, std::size_t p) {
  const std::size_t m_count = cfg.models.size();
  const int i = static_cast<int>(p / m_count);
  const int m = static_cast<int>(p % m_count);
  return {i, m, &cfg.models[m], cfg.services[i].cot_example_tokens};
}

void require_shapes(const OperatorCacheState& state, std::span<const double> requests, const ScenarioConfig& cfg) {
  const std::size_t n = cfg.pair_count();
  if (state.cached.size() != n || state.contexts.size() != n || requests.size() != n)
    throw std::invalid_argument("cache state, requests and config disagree on the pair count");
}

// True when a ranks before b as an eviction victim.
bool evict_before(Policy policy, const OperatorCacheState& s, std::size_t a, std::size_t b) {
  switch (policy) {
    case Policy::least_aot:
      if (s.contexts[a].aot != s.contexts[b].aot) return s.contexts[a].aot < s.contexts[b].aot;
      return a < b;
    case Policy::lfu:
      if (s.hit_counts[a] != s.hit_counts[b]) return s.hit_counts[a] < s.hit_counts[b];
      [[fallthrough]];
    case Policy::fifo:
      if (s.insertion_seq[a] != s.insertion_seq[b]) return s.insertion_seq[a] < s.insertion_seq[b];
      return a < b;
  }
  return a < b;
}

}  // namespace

std::vector<std::string> check_feasible(const CacheDecision& d, const OperatorCacheState& state,
                                        std::span<const double> requests, const Operator& op,
                                        const ScenarioConfig& cfg) {
  std::vector<std::string> v;
  const std::size_t n = cfg.pair_count();
  if (d.cached.size() != n || d.edge.size() != n || requests.size() != n || state.contexts.size() != n) {
    v.push_back("shape mismatch");
    return v;
  }
  double memory = 0.0;
  double energy = 0.0;
  for (std::size_t p = 0; p < n; ++p) {
    const auto info = pair_info(cfg, p);
    const bool a = d.cached[p] != 0;
    const double R = requests[p];
    std::ostringstream tag;
    tag << "(" << info.service << "," << info.model << ")";
    if (!(d.edge[p] >= 0.0 && d.edge[p] <= 1.0)) v.push_back("edge share outside [0,1] at " + tag.str());
    if (d.edge[p] > 0.0 && R > 0.0 && !a) v.push_back("edge execution without a cached model at " + tag.str());
    if (a) {
      memory += info.llm->size_gb;
      energy += info.llm->energy_per_token * d.edge[p] * R;
      const double K = state.contexts[p].tokens + delta_tokens(true, d.offload(p), R, info.k);
      if (K > info.llm->context_window) v.push_back("context window exceeded at " + tag.str());
    }
  }
  if (op.is_satellite() && memory > 0.0) v.push_back("satellite caches nothing");
  if (memory > op.gpu_memory_gb) v.push_back("GPU memory exceeded");
  if (energy > op.gpu_energy_budget) v.push_back("GPU energy budget exceeded");
  return v;
}

PolicyStep policy_step(Policy policy, const OperatorCacheState& state, std::span<const double> requests,
                       const Operator& op, const ScenarioConfig& cfg) {
  require_shapes(state, requests, cfg);
  const std::size_t n = cfg.pair_count();
  PolicyStep out;
  auto& d = out.decision;
  d = CacheDecision::empty(n);
  if (op.is_satellite()) return out;

  d.cached = state.cached;
  std::vector<std::uint8_t> protect(n, 0);
  double used = state.used_memory_gb;
  double energy = 0.0;

  auto event = [&](CacheEventKind k, std::size_t p) {
    const auto info = pair_info(cfg, p);
    out.events.push_back({k, info.service, info.model, state.contexts[p].aot, state.contexts[p].tokens});
  };
  auto evict = [&](std::size_t p) {
    d.cached[p] = 0;
    d.edge[p] = 0.0;
    used -= pair_info(cfg, p).llm->size_gb;
    event(CacheEventKind::evict, p);
  };

  for (std::size_t p = 0; p < n; ++p) {
    if (!(requests[p] > 0.0) || !state.cached[p]) continue;
    const auto info = pair_info(cfg, p);
    const double R = requests[p];
    if (state.contexts[p].tokens + R * info.k > info.llm->context_window) {
      evict(p);
      continue;
    }
    protect[p] = 1;
    if (energy + info.llm->energy_per_token * R <= op.gpu_energy_budget) {
      d.edge[p] = 1.0;
      energy += info.llm->energy_per_token * R;
    }
  }

  std::vector<std::size_t> misses;
  for (std::size_t p = 0; p < n; ++p)
    if (requests[p] > 0.0 && !state.cached[p]) misses.push_back(p);
  std::stable_sort(misses.begin(), misses.end(),
                   [&](std::size_t a, std::size_t b) { return requests[a] > requests[b]; });

  for (std::size_t p : misses) {
    const auto info = pair_info(cfg, p);
    const double R = requests[p];
    const double size = info.llm->size_gb;
    if (size > op.gpu_memory_gb) {
      d.uncacheable[p] = 1;
      event(CacheEventKind::reject, p);
      continue;
    }
    if (R * info.k > info.llm->context_window ||
        energy + info.llm->energy_per_token * R > op.gpu_energy_budget) {
      event(CacheEventKind::reject, p);
      continue;
    }
    if (used + size > op.gpu_memory_gb) {
      std::vector<std::size_t> candidates;
      double evictable = 0.0;
      for (std::size_t q = 0; q < n; ++q) {
        if (d.cached[q] && !protect[q]) {
          candidates.push_back(q);
          evictable += pair_info(cfg, q).llm->size_gb;
        }
      }
      if (used - evictable + size > op.gpu_memory_gb) {
        event(CacheEventKind::reject, p);
        continue;
      }
      std::sort(candidates.begin(), candidates.end(),
                [&](std::size_t a, std::size_t b) { return evict_before(policy, state, a, b); });
      for (std::size_t q : candidates) {
        if (used + size <= op.gpu_memory_gb) break;
        evict(q);
      }
    }
    d.cached[p] = 1;
    d.edge[p] = 1.0;
    protect[p] = 1;
    used += size;
    energy += info.llm->energy_per_token * R;
    event(CacheEventKind::admit, p);
  }
  return out;
}

PolicyStep least_aot_step(const OperatorCacheState& s, std::span<const double> r, const Operator& op,
                          const ScenarioConfig& cfg) {
  return policy_step(Policy::least_aot, s, r, op, cfg);
}

PolicyStep fifo_step(const OperatorCacheState& s, std::span<const double> r, const Operator& op,
                     const ScenarioConfig& cfg) {
  return policy_step(Policy::fifo, s, r, op, cfg);
}

PolicyStep lfu_step(const OperatorCacheState& s, std::span<const double> r, const Operator& op,
                    const ScenarioConfig& cfg) {
  return policy_step(Policy::lfu, s, r, op, cfg);
}

OperatorCacheState apply_decision(const OperatorCacheState& state, const CacheDecision& d,
                                  std::span<const double> requests, const Operator& op,
                                  const ScenarioConfig& cfg) {
  if (auto v = check_feasible(d, state, requests, op, cfg); !v.empty())
    throw std::invalid_argument("infeasible cache decision: " + v.front());
  OperatorCacheState next = state;
  next.used_memory_gb = 0.0;
  for (std::size_t p = 0; p < d.size(); ++p) {
    const auto info = pair_info(cfg, p);
    const bool a = d.cached[p] != 0;
    const double delta = delta_tokens(a, d.offload(p), requests[p], info.k);
    next.contexts[p] = advance_context(state.contexts[p], a, delta, cfg.aot_vanish, cfg.decay_mode);
    if (a && !state.cached[p]) next.insertion_seq[p] = next.next_seq++;
    if (!a) next.insertion_seq[p] = -1;
    next.cached[p] = a ? 1 : 0;
    next.hit_counts[p] += requests[p];
    if (a) next.used_memory_gb += info.llm->size_gb;
  }
  return next;
}

}  // namespace sagin
