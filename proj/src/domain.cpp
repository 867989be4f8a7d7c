#include "sagin/domain.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "sagin/rng.hpp"

namespace sagin {

double derive_beta(double sigma) {
  if (!(sigma >= 0.0 && sigma < 0.5)) {
    throw std::domain_error("sigma must lie in [0, 0.5)");
  }
  return sigma / (1.0 - sigma);
}

LlmModel make_model(int id, std::string name, double param_count,
                    double context_window, double sigma) {
  LlmModel m;
  m.id = id;
  m.name = std::move(name);
  m.param_count = param_count;
  m.size_gb = 2.0 * param_count * 1e-9;           // 2 bytes per parameter
  m.energy_per_token = 2.0 * param_count * 1e-9;  // 2 FLOPs per parameter per token
  m.context_window = context_window;
  m.cot_noise_sigma = sigma;
  m.cot_gain_beta = derive_beta(sigma);
  return m;
}

int ScenarioConfig::ground_count() const {
  int n = 0;
  for (const auto& op : operators) n += op.is_satellite() ? 0 : 1;
  return n;
}

void apply_gpu_count(Operator& op, int gpus, const GpuSpec& spec) {
  op.gpus = gpus;
  op.gpu_memory_gb = gpus * spec.memory_gb;
  op.compute_rate = gpus * spec.efficiency_gflops_per_w;
  op.gpu_energy_budget = gpus * spec.power_w * spec.efficiency_gflops_per_w;
}

std::vector<Service> make_services(int count, int model_count, std::uint64_t seed) {
  std::vector<Service> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int i = 0; i < count; ++i) {
    Rng rng = make_rng(seed, {0x5e41ce, static_cast<std::uint64_t>(i)});
    Service s;
    s.id = i;
    s.input_size_mb = 100.0 + 100.0 * uniform01(rng);
    s.cot_example_tokens = std::floor(50.0 + 151.0 * uniform01(rng));
    s.zero_shot_accuracy.assign(static_cast<std::size_t>(model_count), kModalityAccuracy[i % 6]);
    s.model = model_count > 0 ? i % model_count : 0;
    out.push_back(std::move(s));
  }
  return out;
}

void populate_users(ScenarioConfig& cfg) {
  for (auto& op : cfg.operators) {
    const auto& pop = op.population;
    op.users.clear();
    for (int j = 0; j < pop.count; ++j) {
      Rng rng = make_rng(cfg.rng_seed, {0x05e7, static_cast<std::uint64_t>(op.id),
                                        static_cast<std::uint64_t>(j)});
      // uniform over the annulus area
      const double lo2 = pop.min_distance_m * pop.min_distance_m;
      const double hi2 = pop.max_distance_m * pop.max_distance_m;
      const double d = std::sqrt(lo2 + (hi2 - lo2) * uniform01(rng));
      User u;
      u.id = j;
      u.transmit_power_w = pop.transmit_power_w;
      u.mean_channel_gain = pop.reference_gain * std::pow(d, -pop.path_loss_exponent);
      u.request_rate = pop.request_rate;
      op.users.push_back(u);
    }
  }
}

ScenarioConfig make_default_config() {
  ScenarioConfig cfg;
  cfg.models.push_back(make_model(0, "LLaMA-65B", 65e9, 2048.0, 0.3));
  cfg.models.push_back(make_model(1, "GPT3-174B", 174e9, 8192.0, 0.2));
  cfg.services = make_services(10, 2, cfg.rng_seed);
  cfg.cloud_unit_cost = {1.0, 1.0};

  Operator sat;
  sat.id = 0;
  sat.kind = OperatorKind::satellite;
  sat.core_rate = 5e7;
  sat.edge_access_cost = 0.005;
  sat.cloud_access_cost = 0.025;
  sat.switch_coeff = 0.0;
  sat.population.min_distance_m = 780e3;
  sat.population.max_distance_m = 1200e3;
  sat.population.path_loss_exponent = 2.0;
  sat.population.reference_gain = 10.0;
  cfg.operators.push_back(sat);

  for (int n = 1; n <= 5; ++n) {
    Operator bs;
    bs.id = n;
    bs.kind = OperatorKind::ground_bs;
    apply_gpu_count(bs, 24, cfg.gpu);
    cfg.operators.push_back(bs);
  }
  populate_users(cfg);
  return cfg;
}

namespace {

template <typename... Args>
std::string cat(Args&&... args) {
  std::ostringstream os;
  (os << ... << args);
  return os.str();
}

}  // namespace

std::vector<std::string> validate_config(const ScenarioConfig& cfg) {
  std::vector<std::string> v;
  for (const auto& k : cfg.unknown_keys) v.push_back(cat("unknown key: ", k));

  if (cfg.horizon_slots < 1) v.push_back("horizon_slots must be >= 1");
  if (!(cfg.noise_power_w > 0.0)) v.push_back("noise_power_w must be > 0");
  if (!(cfg.aot_vanish >= 0.0)) v.push_back("aot_vanish must be >= 0");
  if (cfg.decay_mode == DecayMode::proportional && cfg.aot_vanish > 1.0)
    v.push_back("aot_vanish must be <= 1 in proportional decay mode");

  if (cfg.models.empty()) v.push_back("at least one model is required");
  for (std::size_t m = 0; m < cfg.models.size(); ++m) {
    const auto& mod = cfg.models[m];
    const std::string tag = cat("model ", mod.name.empty() ? std::to_string(m) : mod.name, ": ");
    if (mod.id != static_cast<int>(m)) v.push_back(tag + "id must equal its position");
    if (!(mod.size_gb > 0.0)) v.push_back(tag + "size_gb must be > 0");
    if (!(mod.energy_per_token > 0.0)) v.push_back(tag + "energy_per_token must be > 0");
    if (!(mod.context_window > 0.0)) v.push_back(tag + "context_window must be > 0");
    if (!(mod.cot_noise_sigma >= 0.0)) {
      v.push_back(tag + "sigma must be >= 0");
    } else if (!(mod.cot_noise_sigma < 0.5)) {
      v.push_back(tag + "sigma must be < 0.5");
    } else if (mod.cot_gain_beta != mod.cot_noise_sigma / (1.0 - mod.cot_noise_sigma)) {
      v.push_back(tag + "beta must equal sigma / (1 - sigma)");
    }
  }

  if (cfg.services.empty()) v.push_back("at least one service is required");
  for (std::size_t i = 0; i < cfg.services.size(); ++i) {
    const auto& s = cfg.services[i];
    const std::string tag = cat("service ", i, ": ");
    if (s.id != static_cast<int>(i)) v.push_back(tag + "id must equal its position");
    if (!(s.input_size_mb > 0.0)) v.push_back(tag + "input_size_mb must be > 0");
    if (!(s.cot_example_tokens > 0.0 && s.cot_example_tokens <= 200.0))
      v.push_back(tag + "cot_example_tokens must lie in (0, 200]");
    if (s.zero_shot_accuracy.size() != cfg.models.size()) {
      v.push_back(tag + "needs one zero-shot accuracy per model");
    } else {
      for (double a : s.zero_shot_accuracy)
        if (!(a > 0.0 && a <= 1.0)) v.push_back(tag + "zero-shot accuracy must lie in (0, 1]");
    }
    if (s.model < 0 || s.model >= static_cast<int>(cfg.models.size()))
      v.push_back(tag + "model affinity out of range");
  }

  if (cfg.cloud_unit_cost.size() != cfg.models.size()) {
    v.push_back("cloud_unit_cost needs one entry per model");
  } else {
    for (double c : cfg.cloud_unit_cost)
      if (!(c >= 0.0)) v.push_back("cloud_unit_cost must be >= 0");
  }

  if (cfg.operators.empty() || !cfg.operators.front().is_satellite())
    v.push_back("operator 0 must be the satellite");
  if (cfg.ground_count() < 1) v.push_back("at least one ground base station is required");
  for (std::size_t n = 0; n < cfg.operators.size(); ++n) {
    const auto& op = cfg.operators[n];
    const std::string tag = cat("operator ", n, ": ");
    if (op.id != static_cast<int>(n)) v.push_back(tag + "id must equal its position");
    if (n > 0 && op.is_satellite()) v.push_back(tag + "only operator 0 may be a satellite");
    if (op.is_satellite() && op.gpu_memory_gb != 0.0)
      v.push_back(tag + "satellite caches nothing (gpu_memory_gb must be 0)");
    if (!(op.bandwidth_hz > 0.0)) v.push_back(tag + "bandwidth_hz must be > 0");
    if (!(op.gpu_memory_gb >= 0.0) || !(op.gpu_energy_budget >= 0.0))
      v.push_back(tag + "capacities must be nonnegative");
    if (!op.is_satellite() && !(op.compute_rate > 0.0)) v.push_back(tag + "compute_rate must be > 0");
    if (!(op.core_rate > 0.0)) v.push_back(tag + "core_rate must be > 0");
    if (!(op.edge_access_cost >= 0.0) || !(op.cloud_access_cost >= 0.0) || !(op.switch_coeff >= 0.0))
      v.push_back(tag + "cost coefficients must be nonnegative");
    if (op.users.empty()) v.push_back(tag + "needs at least one user");
    for (const auto& u : op.users) {
      if (!(u.transmit_power_w > 0.0)) v.push_back(cat(tag, "user ", u.id, ": transmit power must be > 0"));
      if (!(u.mean_channel_gain >= 0.0)) v.push_back(cat(tag, "user ", u.id, ": gain must be >= 0"));
      if (!(u.request_rate >= 0.0)) v.push_back(cat(tag, "user ", u.id, ": request rate must be >= 0"));
    }
  }

  const auto& g = cfg.satellite;
  if (!(g.altitude_km > 0.0)) v.push_back("satellite altitude_km must be > 0");
  if (!(g.earth_radius_km > 0.0)) v.push_back("earth_radius_km must be > 0");
  if (!(g.velocity_km_s > 0.0)) v.push_back("satellite velocity_km_s must be > 0");
  if (!(g.min_elevation_rad >= 0.0 && g.min_elevation_rad < std::numbers::pi / 2))
    v.push_back("min_elevation_rad must lie in [0, pi/2)");

  if (cfg.workload.zipf_exponent < 0.0) v.push_back("zipf_exponent must be >= 0");
  if (cfg.workload.popularity_shift_period < 0) v.push_back("popularity_shift_period must be >= 0");

  const auto& m = cfg.market;
  if (!(m.cloud_context_aot >= 0.0)) v.push_back("cloud_context_aot must be >= 0");
  if (!(m.match_jitter_sigma >= 0.0) || !(m.common_shock_sigma >= 0.0))
    v.push_back("market jitter sigmas must be >= 0");
  if (m.contract_samples < 1) v.push_back("contract_samples must be >= 1");
  if (m.rounds_per_episode < 1) v.push_back("rounds_per_episode must be >= 1");

  const auto& d = cfg.dqn;
  if (!(d.gamma >= 0.0 && d.gamma < 1.0)) v.push_back("dqn gamma must lie in [0, 1)");
  if (!(d.epsilon_start >= 0.0 && d.epsilon_start <= 1.0) || !(d.epsilon_end >= 0.0 && d.epsilon_end <= 1.0))
    v.push_back("dqn epsilon must lie in [0, 1]");
  if (d.action_count < 2) v.push_back("dqn action_count must be >= 2");
  if (d.batch_size < 1) v.push_back("dqn batch_size must be >= 1");
  if (d.buffer_capacity < d.batch_size) v.push_back("dqn buffer_capacity must be >= batch_size");
  if (d.target_sync_period < 1) v.push_back("dqn target_sync_period must be >= 1");
  if (d.learning_rate < 0.0) v.push_back("dqn learning_rate must be >= 0");
  if (d.hidden.empty()) v.push_back("dqn needs at least one hidden layer");
  for (int h : d.hidden)
    if (h < 1) v.push_back("dqn hidden sizes must be >= 1");

  if (!(cfg.tiny_gap_threshold >= 0.0)) v.push_back("tiny_gap_threshold must be >= 0");
  return v;
}

}  // namespace sagin
