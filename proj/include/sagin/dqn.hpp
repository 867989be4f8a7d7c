#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "sagin/market.hpp"
#include "sagin/mlp.hpp"
#include "sagin/rng.hpp"
#include "sagin/train_config.hpp"

namespace sagin {

struct Transition {
  std::vector<double> state;
  int action = 0;
  double reward = 0.0;
  std::vector<double> next_state;
  bool terminal = false;
};

// Fixed-capacity FIFO of transitions.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);
  void push(Transition t);
  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }
  // Index 0 is the oldest stored transition.
  const Transition& at(std::size_t k) const { return items_[k]; }
  // Uniform draws with replacement.
  std::vector<const Transition*> sample(std::size_t count, Rng& rng) const;

 private:
  std::size_t capacity_;
  std::deque<Transition> items_;
};

// x_0 then ground bids in descending order, divided by the profile maximum and zero
// padded to max_bidders. Throws std::invalid_argument if the profile has more bidders.
std::vector<double> encode_state(const BidProfile& bids, std::size_t max_bidders);

// 10^(action / action_count). Throws std::domain_error outside [0, action_count).
double action_to_rho(int action, int action_count);

// r + gamma * max_a Q_target(next, a); r alone at a terminal transition.
double td_target(const Transition& t, const Mlp& target, double gamma);

// Mean of (y - Q(s, a))^2. Throws std::domain_error for an empty batch.
double batch_loss(std::span<const Transition* const> batch, const Mlp& net, const Mlp& target, double gamma);

// batch_loss plus its exact gradient with respect to net's parameters (targets held fixed).
double batch_loss_gradient(std::span<const Transition* const> batch, const Mlp& net, const Mlp& target,
                           double gamma, std::vector<double>& grad);

int argmax(std::span<const double> q);

class DqnAgent {
 public:
  DqnAgent(const TrainConfig& cfg, int state_size, Rng& init_rng);

  const TrainConfig& config() const { return cfg_; }
  Mlp& online() { return online_; }
  const Mlp& online() const { return online_; }
  const Mlp& target() const { return target_; }
  ReplayBuffer& buffer() { return buffer_; }
  std::int64_t train_steps() const { return train_steps_; }
  std::int64_t act_steps() const { return act_steps_; }

  // Linear schedule over act_steps.
  double epsilon() const;
  // Epsilon-greedy; counts towards the schedule.
  int select_action(std::span<const double> state, Rng& rng);
  int greedy_action(std::span<const double> state) const;

  // One momentum-SGD update on a sampled batch; syncs the target every
  // target_sync_period updates. nullopt when the buffer holds fewer than batch_size items.
  std::optional<double> train_step(Rng& rng);

  void sync_target() { target_ = online_; }
  void set_online(Mlp net);

 private:
  TrainConfig cfg_;
  Mlp online_;
  Mlp target_;
  std::vector<double> velocity_;
  ReplayBuffer buffer_;
  std::int64_t train_steps_ = 0;
  std::int64_t act_steps_ = 0;
};

// One auction round: the profile bidders submit and their true values, both indexed by
// bidder id (0 = satellite).
struct AuctionRound {
  BidProfile bids;
  std::vector<double> values;
};

using RoundSource = std::function<AuctionRound()>;

struct EpisodeTrace {
  std::vector<double> rewards;
  std::vector<double> losses;  // only for iterations that trained
  std::vector<int> actions;
  double epsilon_end = 0.0;
  double mean_reward() const;
  double mean_loss() const;
};

// Algorithm 2: per iteration observe, act epsilon-greedily, clear with msb at the chosen
// rho, reward the realized total surplus (times reward_scale), store and train.
EpisodeTrace run_dqmsb_episode(const RoundSource& source, DqnAgent& agent, std::size_t max_bidders, Rng& rng);

}  // namespace sagin
