#include "sagin/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "sagin/csv.hpp"
#include "sagin/dqn.hpp"
#include "sagin/linkmodel.hpp"
#include "sagin/mlp.hpp"
#include "sagin/parallel.hpp"
#include "sagin/rng.hpp"
#include "sagin/sim.hpp"

namespace sagin {

void write_report_csv(const std::vector<OracleReport>& reports, std::ostream& out) {
  CsvWriter w(out);
  w.header({"suite", "cases", "skipped", "violations", "seed", "detail"});
  for (const auto& r : reports) {
    w << r.suite << static_cast<long long>(r.cases) << static_cast<long long>(r.skipped) << r.violations.size();
    std::string notes;
    for (const auto& n : r.notes) notes += (notes.empty() ? "" : "; ") + n;
    w << "" << notes;
    w.end_row();
    for (const auto& v : r.violations) {
      w << r.suite << "" << "" << "" << std::to_string(v.seed) << v.description;
      w.end_row();
    }
  }
}

namespace {

// Independent re-statement of the per-slot cost and context recursion used by the
// exhaustive oracle. It deliberately does not call the caching or cost modules.
struct TinyPair {
  std::size_t pair;
  double size, energy, window, k, bits, alpha, log_inv_beta, cloud_unit;
};

struct TinyOperator {
  const Operator* op;
  double mean_rate;
  std::vector<TinyPair> pairs;             // pairs requested at least once
  std::vector<std::vector<double>> demand;  // [slot][local pair]
};

struct TinyState {
  std::vector<int> cached;
  std::vector<double> tokens, aot;
};

class TinySearch {
 public:
  TinySearch(const ScenarioConfig& cfg, const TinyOperator& t) : cfg_(cfg), t_(t) {}

  double run(std::vector<CacheDecision>& best_plan, std::int64_t& evaluated) {
    const std::size_t n = t_.pairs.size();
    TinyState start{std::vector<int>(n, 0), std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
    plan_.assign(static_cast<std::size_t>(cfg_.horizon_slots), CacheDecision::empty(cfg_.pair_count()));
    best_ = std::numeric_limits<double>::infinity();
    search(0, start, 0.0);
    best_plan = best_plan_;
    evaluated = evaluated_;
    return best_ / cfg_.horizon_slots;
  }

 private:
  void search(int slot, const TinyState& s, double acc) {
    if (slot == cfg_.horizon_slots) {
      ++evaluated_;
      if (acc < best_) {
        best_ = acc;
        best_plan_ = plan_;
      }
      return;
    }
    const std::size_t n = t_.pairs.size();
    const auto& R = t_.demand[static_cast<std::size_t>(slot)];
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      std::vector<std::size_t> edge_slots;
      double memory = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (!(mask >> j & 1u)) continue;
        memory += t_.pairs[j].size;
        if (R[j] > 0.0) edge_slots.push_back(j);
      }
      if (memory > t_.op->gpu_memory_gb) continue;
      std::size_t combos = 1;
      for (std::size_t k = 0; k < edge_slots.size(); ++k) combos *= 3;
      for (std::size_t code = 0; code < combos; ++code) {
        std::vector<double> edge(n, 0.0);
        std::size_t c = code;
        for (std::size_t j : edge_slots) {
          edge[j] = 0.5 * static_cast<double>(c % 3);
          c /= 3;
        }
        TinyState next;
        double cost = 0.0;
        if (!evaluate(slot, s, mask, edge, next, cost)) continue;
        auto& d = plan_[static_cast<std::size_t>(slot)];
        d = CacheDecision::empty(cfg_.pair_count());
        for (std::size_t j = 0; j < n; ++j) {
          d.cached[t_.pairs[j].pair] = static_cast<std::uint8_t>(mask >> j & 1u);
          d.edge[t_.pairs[j].pair] = edge[j];
        }
        search(slot + 1, next, acc + cost);
      }
    }
  }

  bool evaluate(int slot, const TinyState& s, std::uint32_t mask, const std::vector<double>& edge, TinyState& next,
                double& cost) const {
    const auto& op = *t_.op;
    const auto& R = t_.demand[static_cast<std::size_t>(slot)];
    const std::size_t n = t_.pairs.size();
    next = s;
    double energy = 0.0;
    double loads = 0.0, trans = 0.0, comp = 0.0, accu = 0.0, cloud = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const auto& p = t_.pairs[j];
      const int a = static_cast<int>(mask >> j & 1u);
      const double served = a * edge[j] * R[j];  // requests run at the edge
      const double delta = served * p.k;
      energy += p.energy * served;
      if (a && !s.cached[j]) loads += 1.0;
      if (a) {
        next.tokens[j] = s.tokens[j] + delta;
        if (next.tokens[j] > p.window) return false;
        const double kept = cfg_.decay_mode == DecayMode::proportional ? (1.0 - cfg_.aot_vanish) * s.aot[j] + delta
                                                                        : s.aot[j] + delta - cfg_.aot_vanish;
        next.aot[j] = std::max(kept, 0.0);
      } else {
        next.tokens[j] = 0.0;
        next.aot[j] = 0.0;
      }
      next.cached[j] = a;
      if (R[j] > 0.0) {
        const double offload = 1.0 - a * edge[j];
        trans += R[j] * (op.edge_access_cost * p.bits / t_.mean_rate + p.bits / op.core_rate * offload);
        cloud += p.cloud_unit * offload * R[j];
        comp += delta * p.energy / op.compute_rate;
        if (a && p.alpha < 1.0) accu += served * (1.0 - p.alpha) / (std::max(next.aot[j], 1.0) * p.log_inv_beta);
      }
    }
    if (energy > op.gpu_energy_budget) return false;
    cost = op.switch_coeff * loads + trans + comp + accu + cloud;
    return true;
  }

  const ScenarioConfig& cfg_;
  const TinyOperator& t_;
  std::vector<CacheDecision> plan_, best_plan_;
  double best_ = 0.0;
  std::int64_t evaluated_ = 0;
};

}  // namespace

ExhaustiveResult exhaustive_caching_oracle(const ScenarioConfig& cfg, const TinyLimits& limits) {
  if (cfg.services.size() > limits.services || cfg.models.size() > limits.models ||
      cfg.horizon_slots > limits.slots) {
    std::ostringstream os;
    os << "instance too large for exhaustive search: " << cfg.services.size() << " services, "
       << cfg.models.size() << " models, " << cfg.horizon_slots << " slots (limits " << limits.services << ", "
       << limits.models << ", " << limits.slots << ")";
    throw std::invalid_argument(os.str());
  }
  if (auto v = validate_config(cfg); !v.empty()) throw std::invalid_argument("invalid tiny config: " + v.front());

  std::vector<RequestMatrix> requests;
  for (int t = 0; t < cfg.horizon_slots; ++t) requests.push_back(slot_requests(cfg, t));

  ExhaustiveResult out;
  double total = 0.0;
  int grounds = 0;
  for (std::size_t n = 0; n < cfg.operators.size(); ++n) {
    const auto& op = cfg.operators[n];
    if (op.is_satellite()) continue;
    TinyOperator t{&op, operator_mean_rate(op, cfg.noise_power_w), {}, {}};
    for (std::size_t p = 0; p < cfg.pair_count(); ++p) {
      bool used = false;
      for (const auto& r : requests) used = used || r.at(n, p) > 0.0;
      if (!used) continue;
      const auto& s = cfg.services[p / cfg.models.size()];
      const std::size_t m = p % cfg.models.size();
      const auto& mod = cfg.models[m];
      const double beta = mod.cot_gain_beta;
      t.pairs.push_back({p, mod.size_gb, mod.energy_per_token, mod.context_window, s.cot_example_tokens,
                         s.input_size_mb * 8e6, s.zero_shot_accuracy[m],
                         beta > 0.0 ? std::min(-std::log(beta), 50.0) : 50.0,
                         op.cloud_access_cost * cfg.cloud_unit_cost[m]});
    }
    for (const auto& r : requests) {
      std::vector<double> row;
      for (const auto& p : t.pairs) row.push_back(r.at(n, p.pair));
      t.demand.push_back(std::move(row));
    }
    // never-requested pairs contribute nothing but transmission-free zeros; the
    // constant access term of requested pairs is included in every branch
    TinySearch search(cfg, t);
    std::vector<CacheDecision> plan;
    std::int64_t evaluated = 0;
    total += search.run(plan, evaluated);
    out.decisions.push_back(std::move(plan));
    out.evaluated += evaluated;
    ++grounds;
  }
  out.optimal_cost = grounds ? total / grounds : 0.0;
  return out;
}

ScenarioConfig random_tiny_instance(std::uint64_t seed) {
  Rng rng = make_rng(seed, {0x711e});
  ScenarioConfig cfg = make_default_config();
  cfg.rng_seed = seed;
  cfg.horizon_slots = 2;
  const int model_pick = static_cast<int>(uniform01(rng) * 3.0);  // 0: LLaMA, 1: GPT3, 2: both
  std::vector<LlmModel> models;
  if (model_pick != 1) models.push_back(cfg.models[0]);
  if (model_pick != 0) models.push_back(cfg.models[1]);
  for (std::size_t m = 0; m < models.size(); ++m) models[m].id = static_cast<int>(m);
  cfg.models = models;
  cfg.cloud_unit_cost.assign(models.size(), 1.0);
  const int services = 1 + static_cast<int>(uniform01(rng) * 3.0);
  cfg.services = make_services(services, static_cast<int>(models.size()), seed);

  const int grounds = 1 + static_cast<int>(uniform01(rng) * 2.0);
  cfg.operators.resize(static_cast<std::size_t>(1 + grounds));
  const double rate = 0.02 + 0.18 * uniform01(rng);
  for (std::size_t n = 0; n < cfg.operators.size(); ++n) {
    auto& op = cfg.operators[n];
    op.population.request_rate = rate;
    if (op.is_satellite()) continue;
    op = cfg.operators[1];
    op.id = static_cast<int>(n);
    // GPU counts of the resource sweep; 8 GPUs already contend for 3 services.
    apply_gpu_count(op, 8 * (1 + static_cast<int>(uniform01(rng) * 4.0)), cfg.gpu);
    op.population.request_rate = rate;
    // Below half a LLaMA request, so no edge share of any request fits.
    if (uniform01(rng) < 0.1) op.gpu_energy_budget = 50.0;
  }
  populate_users(cfg);
  return cfg;
}

OracleReport tiny_optimality_suite(int instances, double threshold, std::uint64_t seed) {
  OracleReport rep;
  rep.suite = "tiny-optimality";
  double worst = 0.0;
  for (int k = 0; k < instances; ++k) {
    const std::uint64_t s = derive_seed(seed, {static_cast<std::uint64_t>(k)});
    const auto cfg = random_tiny_instance(s);
    ++rep.cases;
    double laot = 0.0;
    try {
      laot = run_scenario(cfg, Policy::least_aot).mean_total_cost(cfg);
    } catch (const std::exception& e) {
      rep.violations.push_back({s, std::string("least-AoT infeasible: ") + e.what()});
      continue;
    }
    const double opt = exhaustive_caching_oracle(cfg).optimal_cost;
    const double gap = opt > 0.0 ? (laot - opt) / opt : 0.0;
    worst = std::max(worst, gap);
    if (gap > threshold || laot < opt - 1e-9 * std::max(1.0, opt)) {
      std::ostringstream os;
      os << "least-AoT " << format_double(laot) << " vs optimum " << format_double(opt) << " (gap "
         << format_double(gap) << ")";
      rep.violations.push_back({s, os.str()});
    }
  }
  rep.notes.push_back("worst gap " + format_double(worst));
  return rep;
}

namespace {

BidProfile random_profile(Rng& rng, bool distinct_scale = false) {
  BidProfile b;
  const int grounds = 2 + static_cast<int>(uniform01(rng) * 5.0);
  double top = 0.0;
  for (int k = 0; k < grounds; ++k) {
    const double v = std::exp(2.0 * uniform01(rng) - 1.0) * (distinct_scale ? 1.0 + 1e-3 * k : 1.0);
    b.ground_bids.push_back(v);
    top = std::max(top, v);
  }
  b.satellite_contract = 1.5 * top * uniform01(rng);
  return b;
}

double utility(const MechanismOutcome& o, std::size_t id, double value) {
  return o.winners[id] ? value - o.payments[id] : 0.0;
}

}  // namespace

OracleReport strategyproofness_fuzz(const MechanismFn& mechanism, int profiles, int deviations,
                                    std::uint64_t seed, const std::string& name) {
  OracleReport rep;
  rep.suite = name;
  const int shards = 8;
  std::vector<OracleReport> parts(shards);
  parallel_for(shards, [&](std::size_t shard) {
    auto& part = parts[shard];
    for (int k = static_cast<int>(shard); k < profiles; k += shards) {
      const std::uint64_t s = derive_seed(seed, {static_cast<std::uint64_t>(k)});
      Rng rng(s);
      const BidProfile truth = random_profile(rng);
      const auto base = mechanism(truth);
      ++part.cases;
      for (std::size_t n = 1; n < truth.bidders(); ++n) {
        const double v = truth.bid(n);
        const double u0 = utility(base, n, v);
        double others = truth.satellite_contract;
        for (std::size_t j = 1; j < truth.bidders(); ++j)
          if (j != n) others = std::max(others, truth.bid(j));
        std::vector<double> grid;
        for (int d = 0; d < deviations; ++d)
          grid.push_back(v * 0.5 * std::pow(4.0, deviations > 1 ? static_cast<double>(d) / (deviations - 1) : 0.0));
        // bids just either side of the allocation boundary, for the plain and scaled rules
        for (double rho : {1.0, base.rho_used})
          for (double f : {1.0 - 1e-9, 1.0 + 1e-9, 1.0 - 1e-6, 1.0 + 1e-6}) grid.push_back(rho * others * f);
        for (double x : grid) {
          BidProfile dev = truth;
          dev.ground_bids[n - 1] = x;
          const double u = utility(mechanism(dev), n, v);
          if (u > u0 + 1e-12 * (1.0 + std::abs(v))) {
            std::ostringstream os;
            os << "bidder " << n << " value " << format_double(v) << " gains " << format_double(u - u0)
               << " by bidding " << format_double(x);
            part.violations.push_back({s, os.str()});
            break;
          }
        }
      }
    }
  });
  for (auto& p : parts) {
    rep.cases += p.cases;
    rep.violations.insert(rep.violations.end(), p.violations.begin(), p.violations.end());
  }
  std::sort(rep.violations.begin(), rep.violations.end(),
            [](const auto& a, const auto& b) { return a.seed < b.seed; });
  return rep;
}

OracleReport scaling_invariance_fuzz(const MechanismFn& mechanism, int cases, std::uint64_t seed,
                                     const std::string& name) {
  OracleReport rep;
  rep.suite = name;
  for (int k = 0; k < cases; ++k) {
    const std::uint64_t s = derive_seed(seed, {static_cast<std::uint64_t>(k)});
    Rng rng(s);
    const BidProfile b = random_profile(rng);
    const double c = std::exp(6.0 * uniform01(rng) - 3.0);
    const auto o1 = mechanism(b);
    const auto oc = mechanism(b.scaled(c));
    ++rep.cases;
    const double expected = c * o1.payment();
    const bool same_winner = o1.winner() == oc.winner();
    const bool scaled = std::abs(oc.payment() - expected) <= 8.0 * std::numeric_limits<double>::epsilon() * std::abs(expected);
    if (!same_winner || !scaled) {
      std::ostringstream os;
      os << "c = " << format_double(c) << ": winner " << o1.winner() << " -> " << oc.winner() << ", payment "
         << format_double(expected) << " -> " << format_double(oc.payment());
      rep.violations.push_back({s, os.str()});
    }
  }
  return rep;
}

OracleReport spa_equivalence_fuzz(int profiles, std::uint64_t seed) {
  OracleReport rep;
  rep.suite = "spa-equivalence";
  for (int k = 0; k < profiles; ++k) {
    const std::uint64_t s = derive_seed(seed, {static_cast<std::uint64_t>(k)});
    Rng rng(s);
    const BidProfile b = random_profile(rng, true);
    std::vector<double> all{b.satellite_contract};
    all.insert(all.end(), b.ground_bids.begin(), b.ground_bids.end());
    std::sort(all.begin(), all.end());
    if (std::adjacent_find(all.begin(), all.end()) != all.end()) {
      ++rep.skipped;
      continue;
    }
    ++rep.cases;
    if (!(msb(b, 1.0) == spa(b))) rep.violations.push_back({s, "msb(rho = 1) differs from spa"});
  }
  return rep;
}

OracleReport theorem1_sweep(const LatentFamily& family, int trials, std::uint64_t seed) {
  OracleReport rep;
  rep.suite = "theorem1";
  if (!(family.sigma >= 0.0 && family.sigma < 0.5)) {
    rep.skipped = trials;
    rep.notes.push_back("out of precondition: sigma must lie in [0, 0.5)");
    return rep;
  }
  std::int64_t above_sigma = 0;
  double worst_ratio = 0.0;
  for (int k = 0; k < trials; ++k) {
    const std::uint64_t s = derive_seed(seed, {static_cast<std::uint64_t>(k)});
    Rng rng(s);
    const auto inst = random_latent_instance(family, rng);
    PosteriorGap g;
    try {
      g = oracle_posterior_gap(inst.model, inst.examples, inst.task, inst.continuation);
    } catch (const std::domain_error&) {
      ++rep.skipped;
      continue;
    }
    ++rep.cases;
    for (double e : g.eps_examples) above_sigma += e > family.sigma ? 1 : 0;
    if (g.rhs > 0.0) worst_ratio = std::max(worst_ratio, g.lhs / g.rhs);
    const bool single = inst.model.contexts() == 1;
    if (!g.holds() || (single && g.lhs > 1e-12)) {
      std::ostringstream os;
      os << "gap " << format_double(g.lhs) << " exceeds bound " << format_double(g.rhs);
      rep.violations.push_back({s, os.str()});
    }
  }
  rep.notes.push_back("examples above sigma " + std::to_string(above_sigma));
  rep.notes.push_back("max gap/bound " + format_double(worst_ratio));
  return rep;
}

OracleReport gradient_check_suite(int networks, double tolerance, std::uint64_t seed) {
  OracleReport rep;
  rep.suite = "gradients";
  double worst = 0.0;
  for (int k = 0; k < networks; ++k) {
    const std::uint64_t s = derive_seed(seed, {static_cast<std::uint64_t>(k)});
    Rng rng(s);
    const int in = 2 + static_cast<int>(uniform01(rng) * 4.0);
    const int out = 2 + static_cast<int>(uniform01(rng) * 3.0);
    std::vector<int> sizes{in};
    const int hidden = 1 + static_cast<int>(uniform01(rng) * 2.0);
    for (int h = 0; h < hidden; ++h) sizes.push_back(2 + static_cast<int>(uniform01(rng) * 7.0));
    sizes.push_back(out);
    Mlp net(sizes, rng);
    for (auto& p : net.params()) p += 0.1 * (2.0 * uniform01(rng) - 1.0);  // nonzero biases
    Mlp target(sizes, rng);
    std::vector<Transition> batch(3);
    for (auto& t : batch) {
      for (int d = 0; d < in; ++d) {
        t.state.push_back(2.0 * uniform01(rng) - 1.0);
        t.next_state.push_back(2.0 * uniform01(rng) - 1.0);
      }
      t.action = std::min(static_cast<int>(uniform01(rng) * out), out - 1);
      t.reward = 2.0 * uniform01(rng) - 1.0;
      t.terminal = uniform01(rng) < 0.3;
    }
    std::vector<const Transition*> ptrs;
    for (const auto& t : batch) ptrs.push_back(&t);
    const double gamma = 0.9;
    std::vector<double> analytic;
    batch_loss_gradient(ptrs, net, target, gamma, analytic);
    double diff2 = 0.0, an2 = 0.0, fd2 = 0.0;
    const double h = 1e-6;
    for (std::size_t p = 0; p < net.params().size(); ++p) {
      const double keep = net.params()[p];
      net.params()[p] = keep + h;
      const double up = batch_loss(ptrs, net, target, gamma);
      net.params()[p] = keep - h;
      const double down = batch_loss(ptrs, net, target, gamma);
      net.params()[p] = keep;
      const double fd = (up - down) / (2.0 * h);
      diff2 += (fd - analytic[p]) * (fd - analytic[p]);
      an2 += analytic[p] * analytic[p];
      fd2 += fd * fd;
    }
    ++rep.cases;
    const double scale = std::sqrt(std::max(an2, fd2));
    const double rel = scale > 0.0 ? std::sqrt(diff2) / scale : 0.0;
    worst = std::max(worst, rel);
    if (rel > tolerance) rep.violations.push_back({s, "relative gradient error " + format_double(rel)});
  }
  rep.notes.push_back("worst relative error " + format_double(worst));
  return rep;
}

}  // namespace sagin
