#include "sagin/auction.hpp"

#include <cmath>
#include <stdexcept>

namespace sagin {

std::string_view mechanism_name(Mechanism m) {
  switch (m) {
    case Mechanism::dqmsb: return "dqmsb";
    case Mechanism::spa: return "spa";
    case Mechanism::msb: return "msb";
    case Mechanism::myopic: return "myopic";
    case Mechanism::optimal: return "optimal";
  }
  return "?";
}

Mechanism parse_mechanism(std::string_view name) {
  for (auto m : {Mechanism::dqmsb, Mechanism::spa, Mechanism::msb, Mechanism::myopic, Mechanism::optimal})
    if (mechanism_name(m) == name) return m;
  throw std::invalid_argument("unknown mechanism: " + std::string(name));
}

std::size_t market_width(const std::vector<Valuation>& valuations) { return valuations.size(); }

TrainingResult train_dqmsb(const ScenarioConfig& cfg, const std::vector<Valuation>& valuations,
                           std::uint64_t seed, int episodes) {
  const int total = episodes > 0 ? episodes : cfg.dqn.episodes;
  const std::size_t width = market_width(valuations);
  MarketSource source(cfg, valuations, derive_seed(seed, {0x7a1}));
  Rng init = make_rng(seed, {0x1a17});
  Rng rng = make_rng(seed, {0x57e9});
  // Rewards are surpluses in units of the first-best surplus, so Q targets stay O(1)
  // whatever the valuation scale; the greedy policy is unchanged by the rescale.
  TrainConfig tc = cfg.dqn;
  if (source.reference_surplus() > 0.0) tc.reward_scale /= source.reference_surplus();
  DqnAgent agent(tc, static_cast<int>(width), init);
  RoundSource next = [&source] { return source.next(); };

  TrainingResult out;
  out.contract = source.contract();
  for (int e = 0; e < total; ++e) {
    const auto trace = run_dqmsb_episode(next, agent, width, rng);
    CurveRow row;
    row.episode = e;
    row.mean_reward = trace.mean_reward();
    row.loss = trace.mean_loss();
    row.epsilon = trace.epsilon_end;
    row.rho_histogram.assign(static_cast<std::size_t>(cfg.dqn.action_count), 0);
    for (int a : trace.actions) ++row.rho_histogram[static_cast<std::size_t>(a)];
    out.curve.push_back(std::move(row));
  }
  out.net = agent.online();
  return out;
}

std::vector<EvalRow> evaluate_mechanisms(const ScenarioConfig& cfg, const std::vector<Valuation>& valuations,
                                         const Mlp* net, const std::vector<Mechanism>& mechanisms,
                                         std::uint64_t seed, const EvalSettings& settings) {
  const std::size_t width = market_width(valuations);
  MarketSource history_source(cfg, valuations, derive_seed(seed, {0x4157}));
  std::vector<BidProfile> history;
  for (int k = 0; k < settings.history; ++k) history.push_back(history_source.next().bids);
  const double rho_opt = optimal_rho(history);

  MarketSource source(cfg, valuations, derive_seed(seed, {0xe7a1}));
  std::vector<EvalRow> rows;
  for (int r = 0; r < settings.rounds; ++r) {
    const auto round = source.next();
    for (Mechanism m : mechanisms) {
      MechanismOutcome o;
      switch (m) {
        case Mechanism::dqmsb: {
          if (!net) throw std::invalid_argument("dqmsb evaluation needs a trained network");
          const auto q = net->forward(encode_state(round.bids, width));
          o = msb(round.bids, action_to_rho(argmax(q), static_cast<int>(q.size())));
          break;
        }
        case Mechanism::spa: o = spa(round.bids); break;
        case Mechanism::msb: o = msb(round.bids, settings.fixed_rho); break;
        case Mechanism::myopic: o = msb(round.bids, myopic_rho(round.bids)); break;
        case Mechanism::optimal: o = msb(round.bids, rho_opt); break;
      }
      EvalRow row;
      row.round = r;
      row.mechanism = m;
      row.rho = o.rho_used;
      row.winner = o.winner();
      row.payment = o.payment();
      row.surplus = realized_surplus(o, round.values);
      row.contract_bid = round.bids.satellite_contract;
      row.top_bid = ground_order_statistic(round.bids, 1);
      row.second_bid = ground_order_statistic(round.bids, 2);
      rows.push_back(row);
    }
  }
  return rows;
}

double mean_surplus(const std::vector<EvalRow>& rows, Mechanism m) {
  double s = 0.0, n = 0.0;
  for (const auto& r : rows) {
    if (r.mechanism != m) continue;
    s += r.surplus.total;
    n += 1.0;
  }
  return n > 0.0 ? s / n : 0.0;
}

double relative_plateau_slope(const std::vector<CurveRow>& curve, std::size_t window) {
  if (curve.size() < 2) return 0.0;
  window = std::min(window, curve.size());
  const std::size_t start = curve.size() - window;
  double sx = 0.0, sy = 0.0;
  for (std::size_t k = start; k < curve.size(); ++k) {
    sx += static_cast<double>(k);
    sy += curve[k].mean_reward;
  }
  const double n = static_cast<double>(window);
  const double mx = sx / n, my = sy / n;
  double num = 0.0, den = 0.0;
  for (std::size_t k = start; k < curve.size(); ++k) {
    const double dx = static_cast<double>(k) - mx;
    num += dx * (curve[k].mean_reward - my);
    den += dx * dx;
  }
  if (den == 0.0 || my == 0.0) return 0.0;
  return (num / den) / std::abs(my);
}

}  // namespace sagin
