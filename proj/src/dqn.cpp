#include "sagin/dqn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sagin {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("replay buffer capacity must be >= 1");
}

void ReplayBuffer::push(Transition t) {
  if (items_.size() == capacity_) items_.pop_front();
  items_.push_back(std::move(t));
}

std::vector<const Transition*> ReplayBuffer::sample(std::size_t count, Rng& rng) const {
  std::vector<const Transition*> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const auto idx = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(items_.size()));
    out.push_back(&items_[std::min(idx, items_.size() - 1)]);
  }
  return out;
}

std::vector<double> encode_state(const BidProfile& bids, std::size_t max_bidders) {
  if (bids.bidders() > max_bidders) throw std::invalid_argument("bid profile exceeds max_bidders");
  std::vector<double> s(max_bidders, 0.0);
  s[0] = bids.satellite_contract;
  std::vector<double> g = bids.ground_bids;
  std::sort(g.begin(), g.end(), std::greater<>());
  std::copy(g.begin(), g.end(), s.begin() + 1);
  const double top = *std::max_element(s.begin(), s.end());
  if (top > 0.0)
    for (auto& x : s) x /= top;
  return s;
}

double action_to_rho(int action, int action_count) {
  if (action < 0 || action >= action_count) throw std::domain_error("action index out of range");
  return std::pow(10.0, static_cast<double>(action) / action_count);
}

int argmax(std::span<const double> q) {
  return static_cast<int>(std::max_element(q.begin(), q.end()) - q.begin());
}

double td_target(const Transition& t, const Mlp& target, double gamma) {
  if (t.terminal || gamma == 0.0) return t.reward;
  const auto q = target.forward(t.next_state);
  return t.reward + gamma * *std::max_element(q.begin(), q.end());
}

double batch_loss(std::span<const Transition* const> batch, const Mlp& net, const Mlp& target, double gamma) {
  if (batch.empty()) throw std::domain_error("batch_loss needs a nonempty batch");
  double s = 0.0;
  for (const Transition* t : batch) {
    const double e = td_target(*t, target, gamma) - net.forward(t->state)[t->action];
    s += e * e;
  }
  return s / static_cast<double>(batch.size());
}

double batch_loss_gradient(std::span<const Transition* const> batch, const Mlp& net, const Mlp& target,
                           double gamma, std::vector<double>& grad) {
  if (batch.empty()) throw std::domain_error("batch_loss needs a nonempty batch");
  grad.assign(net.params().size(), 0.0);
  const double n = static_cast<double>(batch.size());
  double s = 0.0;
  Mlp::Tape tape;
  std::vector<double> gout(static_cast<std::size_t>(net.output_size()), 0.0);
  for (const Transition* t : batch) {
    const double y = td_target(*t, target, gamma);
    const auto q = net.forward(t->state, tape);
    const double e = q[t->action] - y;
    s += e * e;
    std::fill(gout.begin(), gout.end(), 0.0);
    gout[t->action] = 2.0 * e / n;
    net.backward(tape, gout, grad);
  }
  return s / n;
}

namespace {

std::vector<int> layer_sizes(const TrainConfig& cfg, int state_size) {
  std::vector<int> sizes{state_size};
  sizes.insert(sizes.end(), cfg.hidden.begin(), cfg.hidden.end());
  sizes.push_back(cfg.action_count);
  return sizes;
}

}  // namespace

DqnAgent::DqnAgent(const TrainConfig& cfg, int state_size, Rng& init_rng)
    : cfg_(cfg),
      online_(layer_sizes(cfg, state_size), init_rng),
      target_(online_),
      velocity_(online_.params().size(), 0.0),
      buffer_(static_cast<std::size_t>(cfg.buffer_capacity)) {}

double DqnAgent::epsilon() const {
  if (cfg_.epsilon_decay_steps <= 0) return cfg_.epsilon_end;
  const double f = std::min(1.0, static_cast<double>(act_steps_) / cfg_.epsilon_decay_steps);
  return cfg_.epsilon_start + (cfg_.epsilon_end - cfg_.epsilon_start) * f;
}

int DqnAgent::greedy_action(std::span<const double> state) const { return argmax(online_.forward(state)); }

int DqnAgent::select_action(std::span<const double> state, Rng& rng) {
  const double eps = epsilon();
  ++act_steps_;
  if (uniform01(rng) < eps)
    return std::min(static_cast<int>(uniform01(rng) * cfg_.action_count), cfg_.action_count - 1);
  return greedy_action(state);
}

std::optional<double> DqnAgent::train_step(Rng& rng) {
  if (buffer_.size() < static_cast<std::size_t>(cfg_.batch_size)) return std::nullopt;
  const auto batch = buffer_.sample(static_cast<std::size_t>(cfg_.batch_size), rng);
  std::vector<double> grad;
  const double loss = batch_loss_gradient(batch, online_, target_, cfg_.gamma, grad);
  if (cfg_.grad_clip > 0.0) {
    double norm = 0.0;
    for (double g : grad) norm += g * g;
    norm = std::sqrt(norm);
    if (norm > cfg_.grad_clip)
      for (auto& g : grad) g *= cfg_.grad_clip / norm;
  }
  auto& p = online_.params();
  for (std::size_t k = 0; k < p.size(); ++k) {
    velocity_[k] = cfg_.momentum * velocity_[k] + grad[k];
    p[k] -= cfg_.learning_rate * velocity_[k];
  }
  ++train_steps_;
  if (train_steps_ % cfg_.target_sync_period == 0) sync_target();
  return loss;
}

void DqnAgent::set_online(Mlp net) {
  if (net.sizes() != online_.sizes()) throw std::invalid_argument("network shape does not match the agent");
  online_ = std::move(net);
  target_ = online_;
  std::fill(velocity_.begin(), velocity_.end(), 0.0);
}

double EpisodeTrace::mean_reward() const {
  if (rewards.empty()) return 0.0;
  double s = 0.0;
  for (double r : rewards) s += r;
  return s / static_cast<double>(rewards.size());
}

double EpisodeTrace::mean_loss() const {
  if (losses.empty()) return 0.0;
  double s = 0.0;
  for (double l : losses) s += l;
  return s / static_cast<double>(losses.size());
}

EpisodeTrace run_dqmsb_episode(const RoundSource& source, DqnAgent& agent, std::size_t max_bidders, Rng& rng) {
  const auto& cfg = agent.config();
  EpisodeTrace trace;
  AuctionRound round = source();
  auto state = encode_state(round.bids, max_bidders);
  for (int k = 0; k < cfg.iterations; ++k) {
    const int action = agent.select_action(state, rng);
    const auto outcome = msb(round.bids, action_to_rho(action, cfg.action_count));
    const double reward = realized_surplus(outcome, round.values).total * cfg.reward_scale;
    const bool last = k + 1 == cfg.iterations;
    AuctionRound next = source();
    auto next_state = encode_state(next.bids, max_bidders);
    agent.buffer().push({state, action, reward, next_state, last});
    if (auto loss = agent.train_step(rng)) trace.losses.push_back(*loss);
    trace.rewards.push_back(reward);
    trace.actions.push_back(action);
    round = std::move(next);
    state = std::move(next_state);
  }
  trace.epsilon_end = agent.epsilon();
  return trace;
}

}  // namespace sagin
