#include "sagin/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "sagin/cot.hpp"
#include "sagin/linkmodel.hpp"
#include "sagin/parallel.hpp"

namespace sagin {

namespace {

// Exact for any intensity: sums of independent Poisson draws are Poisson, and each
// chunk stays small enough for the product method.
int poisson(Rng& rng, double lambda) {
  int count = 0;
  while (lambda > 0.0) {
    const double chunk = std::min(lambda, 30.0);
    lambda -= chunk;
    const double limit = std::exp(-chunk);
    double prod = uniform01(rng);
    while (prod > limit) {
      ++count;
      prod *= uniform01(rng);
    }
  }
  return count;
}

double total_rate(const Operator& op) {
  double r = 0.0;
  for (const auto& u : op.users) r += u.request_rate;
  return r;
}

double mean_log_inverse_beta(const ScenarioConfig& cfg) {
  double s = 0.0;
  for (const auto& m : cfg.models) s += log_inverse_beta(m.cot_gain_beta);
  return s / static_cast<double>(cfg.models.size());
}

}  // namespace

std::vector<double> popularity_weights(const ScenarioConfig& cfg, int op, int slot) {
  const std::size_t n = cfg.services.size();
  std::vector<double> w(n, 1.0);
  if (n == 0) return w;
  const int period = cfg.workload.popularity_shift_period;
  const int epoch = period > 0 ? slot / period : 0;
  std::vector<std::size_t> rank(n);
  std::iota(rank.begin(), rank.end(), 0);
  Rng rng = make_rng(cfg.rng_seed, {0x909, static_cast<std::uint64_t>(op), static_cast<std::uint64_t>(epoch)});
  for (std::size_t k = n; k > 1; --k) {
    const auto j = std::min(static_cast<std::size_t>(uniform01(rng) * static_cast<double>(k)), k - 1);
    std::swap(rank[k - 1], rank[j]);
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = std::pow(static_cast<double>(rank[i] + 1), -cfg.workload.zipf_exponent);
    sum += w[i];
  }
  for (auto& x : w) x *= static_cast<double>(n) / sum;
  return w;
}

RequestMatrix generate_requests(Rng& rng, const ScenarioConfig& cfg, int slot) {
  RequestMatrix r(slot, cfg.operators.size(), cfg.pair_count());
  for (std::size_t n = 0; n < cfg.operators.size(); ++n) {
    const double rate = total_rate(cfg.operators[n]);
    const auto weights = popularity_weights(cfg, static_cast<int>(n), slot);
    for (std::size_t i = 0; i < cfg.services.size(); ++i) {
      const auto& s = cfg.services[i];
      r.at(n, cfg.pair_index(i, static_cast<std::size_t>(s.model))) = poisson(rng, rate * weights[i]);
    }
  }
  return r;
}

RequestMatrix slot_requests(const ScenarioConfig& cfg, int slot) {
  Rng rng = make_rng(cfg.rng_seed, {0x4e0, static_cast<std::uint64_t>(slot)});
  return generate_requests(rng, cfg, slot);
}

double ScenarioResult::mean_total_cost(const ScenarioConfig& cfg) const {
  double s = 0.0;
  int k = 0;
  for (std::size_t n = 0; n < cfg.operators.size(); ++n) {
    if (cfg.operators[n].is_satellite()) continue;
    s += average_cost[n];
    ++k;
  }
  return k ? s / k : 0.0;
}

CostBreakdown ScenarioResult::mean_breakdown(const ScenarioConfig& cfg) const {
  CostBreakdown b;
  double count = 0.0;
  for (const auto& t : traces) {
    for (std::size_t n = 0; n < cfg.operators.size(); ++n) {
      if (cfg.operators[n].is_satellite()) continue;
      b += t.costs[n];
      count += 1.0;
    }
  }
  if (count > 0.0) {
    b.switching /= count;
    b.transmission /= count;
    b.compute /= count;
    b.accuracy /= count;
    b.cloud /= count;
    b.total /= count;
  }
  return b;
}

double ScenarioResult::mean_performance_gain(const ScenarioConfig& cfg) const {
  double gain = 0.0, requests = 0.0;
  for (const auto& t : traces) {
    for (std::size_t n = 0; n < cfg.operators.size(); ++n) {
      if (cfg.operators[n].is_satellite()) continue;
      gain += t.performance_gain[n];
      requests += t.request_total[n];
    }
  }
  return requests > 0.0 ? gain / requests : 0.0;
}

ScenarioResult run_scenario(const ScenarioConfig& cfg, Policy policy) {
  if (auto v = validate_config(cfg); !v.empty()) {
    std::string msg = "invalid config:";
    for (const auto& s : v) msg += "\n  " + s;
    throw std::invalid_argument(msg);
  }
  const std::size_t ops = cfg.operators.size();
  const std::size_t pairs = cfg.pair_count();
  const std::size_t models = cfg.models.size();

  std::vector<OperatorCostInputs> inputs;
  std::vector<OperatorCacheState> states(ops, OperatorCacheState::empty(pairs));
  for (const auto& op : cfg.operators) inputs.push_back(cost_inputs(cfg, op));
  const double satellite_match = cfg.market.cloud_context_aot * mean_log_inverse_beta(cfg);

  ScenarioResult result;
  result.policy = policy;
  result.traces.reserve(static_cast<std::size_t>(cfg.horizon_slots));
  for (int t = 0; t < cfg.horizon_slots; ++t) {
    SlotTrace tr;
    tr.slot = t;
    tr.requests = slot_requests(cfg, t);
    for (std::size_t n = 0; n < ops; ++n) {
      const auto& op = cfg.operators[n];
      const auto row = tr.requests.row(n);
      const auto step = policy_step(policy, states[n], row, op, cfg);
      auto next = apply_decision(states[n], step.decision, row, op, cfg);
      tr.costs.push_back(slot_cost(cfg, op, inputs[n], states[n].cached, step.decision, next, row));
      for (const auto& e : step.events) tr.events.push_back({static_cast<int>(n), e});

      double match = 0.0, cached = 0.0, perf = 0.0, req = 0.0;
      for (std::size_t p = 0; p < pairs; ++p) {
        const std::size_t i = p / models, m = p % models;
        const double lib = log_inverse_beta(cfg.models[m].cot_gain_beta);
        req += row[p];
        if (!next.cached[p]) continue;
        match += next.contexts[p].aot * lib;
        cached += 1.0;
        perf += row[p] * (1.0 - step.decision.offload(p)) *
                accuracy(cfg.services[i].zero_shot_accuracy[m], cfg.models[m].cot_gain_beta, next.contexts[p].aot);
      }
      tr.match_gain.push_back(op.is_satellite() ? satellite_match : (cached > 0.0 ? match / cached : 0.0));
      tr.performance_gain.push_back(perf);
      tr.request_total.push_back(req);
      tr.contexts.push_back(next.contexts);
      states[n] = std::move(next);
    }
    result.traces.push_back(std::move(tr));
  }

  result.average_cost = recompute_averages(result);
  for (std::size_t n = 0; n < ops; ++n) {
    std::vector<double> common, match;
    for (const auto& tr : result.traces) {
      common.push_back(tr.costs[n].total - tr.costs[n].accuracy);
      match.push_back(tr.match_gain[n]);
    }
    result.valuations.push_back(valuation_from_trace(common, match));
  }
  return result;
}

std::vector<double> recompute_averages(const ScenarioResult& result) {
  if (result.traces.empty()) return {};
  const std::size_t ops = result.traces.front().costs.size();
  std::vector<double> avg(ops, 0.0);
  std::vector<CostBreakdown> per_slot;
  for (std::size_t n = 0; n < ops; ++n) {
    per_slot.clear();
    for (const auto& t : result.traces) per_slot.push_back(t.costs[n]);
    avg[n] = total_cost(per_slot);
  }
  return avg;
}

RelayCheck satellite_relay_feasible(const ScenarioConfig& cfg, const ScenarioResult& result) {
  RelayCheck c;
  const double horizon = coverage_time(cfg.satellite);
  std::size_t sat = 0;
  while (sat < cfg.operators.size() && !cfg.operators[sat].is_satellite()) ++sat;
  if (sat == cfg.operators.size()) throw std::invalid_argument("scenario has no satellite");
  const auto& op = cfg.operators[sat];
  const double rate = operator_mean_rate(op, cfg.noise_power_w) + op.core_rate;
  for (const auto& t : result.traces) {
    for (std::size_t p = 0; p < cfg.pair_count(); ++p) {
      const double R = t.requests.at(sat, p);
      if (R == 0.0) continue;
      const double bits = cfg.services[p / cfg.models.size()].input_size_mb * kBitsPerMegabyte;
      c.relay_time_s += bits * R / rate;
    }
  }
  c.slack_s = horizon - c.relay_time_s;
  c.feasible = c.slack_s >= 0.0;
  return c;
}

std::string_view axis_name(SweepAxis a) {
  switch (a) {
    case SweepAxis::slots: return "slots";
    case SweepAxis::services: return "services";
    case SweepAxis::gpus: return "gpus";
    case SweepAxis::users: return "users";
    case SweepAxis::vanish: return "vanish";
  }
  return "?";
}

SweepAxis parse_axis(std::string_view name) {
  for (auto a : {SweepAxis::slots, SweepAxis::services, SweepAxis::gpus, SweepAxis::users, SweepAxis::vanish})
    if (axis_name(a) == name) return a;
  throw std::invalid_argument("unknown sweep axis: " + std::string(name));
}

ScenarioConfig derive_config(const ScenarioConfig& cfg, SweepAxis axis, double value) {
  ScenarioConfig out = cfg;
  const int count = static_cast<int>(std::lround(value));
  switch (axis) {
    case SweepAxis::slots:
      out.horizon_slots = count;
      break;
    case SweepAxis::services: {
      auto fresh = make_services(count, static_cast<int>(cfg.models.size()), cfg.rng_seed);
      for (std::size_t i = 0; i < fresh.size() && i < cfg.services.size(); ++i) fresh[i] = cfg.services[i];
      out.services = std::move(fresh);
      break;
    }
    case SweepAxis::gpus:
      for (auto& op : out.operators)
        if (!op.is_satellite()) apply_gpu_count(op, count, out.gpu);
      break;
    case SweepAxis::users:
      for (auto& op : out.operators) op.population.count = count;
      populate_users(out);
      break;
    case SweepAxis::vanish:
      out.aot_vanish = value;
      break;
  }
  return out;
}

std::uint64_t seed_for_run(std::uint64_t base, int k) {
  return k == 0 ? base : derive_seed(base, {static_cast<std::uint64_t>(k)});
}

std::vector<SweepRow> sweep(const ScenarioConfig& cfg, SweepAxis axis, const std::vector<double>& values,
                            const std::vector<Policy>& policies, int seeds) {
  if (values.empty()) throw std::invalid_argument("sweep needs at least one value");
  std::vector<SweepRow> rows(values.size() * policies.size() * static_cast<std::size_t>(seeds));
  parallel_for(rows.size(), [&](std::size_t job) {
    const std::size_t k = job % static_cast<std::size_t>(seeds);
    const std::size_t pi = (job / static_cast<std::size_t>(seeds)) % policies.size();
    const std::size_t vi = job / (static_cast<std::size_t>(seeds) * policies.size());
    ScenarioConfig run = cfg;
    run.rng_seed = seed_for_run(cfg.rng_seed, static_cast<int>(k));
    if (k > 0) populate_users(run);
    run = derive_config(run, axis, values[vi]);
    const auto res = run_scenario(run, policies[pi]);
    SweepRow& r = rows[job];
    r.axis = axis;
    r.value = values[vi];
    r.policy = policies[pi];
    r.seed = run.rng_seed;
    r.mean_total_cost = res.mean_total_cost(run);
    r.breakdown = res.mean_breakdown(run);
    r.performance_gain = res.mean_performance_gain(run);
  });
  return rows;
}

std::vector<Valuation> operator_valuations(const ScenarioConfig& cfg) {
  return run_scenario(cfg, Policy::least_aot).valuations;
}

}  // namespace sagin
