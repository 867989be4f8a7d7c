#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "sagin/train_config.hpp"

namespace sagin {

enum class OperatorKind { satellite, ground_bs };
enum class DecayMode { subtractive, proportional };

/// A cacheable language model. Sizes follow half-precision serving estimates.
struct LlmModel {
  int id = 0;
  std::string name;
  double param_count = 0.0;
  double size_gb = 0.0;           // s_m
  double energy_per_token = 0.0;  // e_m, GFLOP per token
  double context_window = 0.0;    // w_m, tokens
  double cot_noise_sigma = 0.0;   // ambiguity ceiling, [0, 0.5)
  double cot_gain_beta = 0.0;     // sigma / (1 - sigma)
};

/// Returns sigma / (1 - sigma). Throws std::domain_error unless 0 <= sigma < 0.5.
double derive_beta(double sigma);

LlmModel make_model(int id, std::string name, double param_count,
                    double context_window, double sigma);

struct Service {
  int id = 0;
  double input_size_mb = 0.0;       // d_i
  double cot_example_tokens = 0.0;  // k_i
  std::vector<double> zero_shot_accuracy;  // alpha_{i,m}, indexed by model id
  int model = 0;                    // affinity: the model this service requests
};

struct User {
  int id = 0;
  double transmit_power_w = 0.0;
  double mean_channel_gain = 0.0;
  double request_rate = 0.0;  // Poisson intensity per slot
};

// Parameters for drawing an operator's user cohort.
struct UserPopulation {
  int count = 10;
  double transmit_power_w = 0.2;
  double request_rate = 0.05;
  double min_distance_m = 50.0;
  double max_distance_m = 500.0;
  double path_loss_exponent = 3.5;
  double reference_gain = 1e-3;  // channel gain at 1 m
};

struct Operator {
  int id = 0;
  OperatorKind kind = OperatorKind::ground_bs;
  int gpus = 0;
  double bandwidth_hz = 20e6;
  double gpu_memory_gb = 0.0;      // G_n
  double gpu_energy_budget = 0.0;  // E_n, GFLOP per slot
  double compute_rate = 0.0;       // f_n, GFLOP/s
  double core_rate = 1e8;          // r^C_n, bit/s
  double edge_access_cost = 1e-4;
  double cloud_access_cost = 0.04;
  double switch_coeff = 0.5;       // lambda
  UserPopulation population;
  std::vector<User> users;

  bool is_satellite() const { return kind == OperatorKind::satellite; }
};

struct SatelliteGeometry {
  double altitude_km = 780.0;
  double earth_radius_km = 6371.0;
  double velocity_km_s = 7.46;
  double min_elevation_rad = 0.0;
  double slant_distance_km = 0.0;  // recorded only
};

struct GpuSpec {
  double memory_gb = 80.0;
  double power_w = 300.0;
  double efficiency_gflops_per_w = 810.0;
};

// Request popularity: Zipf weights over services, re-ranked every shift period.
struct WorkloadSettings {
  double zipf_exponent = 1.0;
  int popularity_shift_period = 10;  // slots; 0 disables re-ranking
};

struct MarketSettings {
  // AoT credited to cloud-served requests; 10 puts the satellite value near 0.85 of the
  // top ground value, so the satellite is a fallback rather than the default winner.
  double cloud_context_aot = 10.0;
  double match_jitter_sigma = 0.1;    // log-normal, per bidder and round
  double common_shock_sigma = 0.3;    // log-normal, shared by all bidders in a round
  int contract_samples = 1000;
  int rounds_per_episode = 50;
};

struct ScenarioConfig {
  std::vector<LlmModel> models;
  std::vector<Service> services;
  std::vector<Operator> operators;  // operator 0 is the satellite
  int horizon_slots = 100;
  double noise_power_w = 1e-13;
  double aot_vanish = 0.6;
  DecayMode decay_mode = DecayMode::proportional;
  std::vector<double> cloud_unit_cost;  // l_{0,m} multiplier, per model
  std::uint64_t rng_seed = 1;
  SatelliteGeometry satellite;
  GpuSpec gpu;
  WorkloadSettings workload;
  MarketSettings market;
  TrainConfig dqn;
  double tiny_gap_threshold = 0.25;
  double plateau_slope_threshold = 0.002;
  // Keys the parser did not recognise; validate_config reports them.
  std::vector<std::string> unknown_keys;

  std::size_t pair_count() const { return services.size() * models.size(); }
  std::size_t pair_index(std::size_t service, std::size_t model) const {
    return service * models.size() + model;
  }
  int ground_count() const;
};

// R^t_{n,i,m}: request counts for one slot, one row per operator, pair_index columns.
struct RequestMatrix {
  int slot = 0;
  std::size_t pairs = 0;
  std::vector<double> counts;  // [operator * pairs + pair]

  RequestMatrix() = default;
  RequestMatrix(int slot_, std::size_t operators, std::size_t pairs_)
      : slot(slot_), pairs(pairs_), counts(operators * pairs_, 0.0) {}
  std::size_t operators() const { return pairs == 0 ? 0 : counts.size() / pairs; }
  double& at(std::size_t op, std::size_t pair) { return counts[op * pairs + pair]; }
  double at(std::size_t op, std::size_t pair) const { return counts[op * pairs + pair]; }
  std::vector<double> row(std::size_t op) const {
    return {counts.begin() + static_cast<std::ptrdiff_t>(op * pairs),
            counts.begin() + static_cast<std::ptrdiff_t>((op + 1) * pairs)};
  }
};

// Recomputes memory, energy budget and compute rate from the GPU count.
void apply_gpu_count(Operator& op, int gpus, const GpuSpec& spec);

// Service i is drawn from its own stream so shorter lists are prefixes of longer ones.
std::vector<Service> make_services(int count, int model_count, std::uint64_t seed);

// Draws each operator's users (gains from a log-distance model); prefix-stable per user.
void populate_users(ScenarioConfig& cfg);

ScenarioConfig make_default_config();

std::vector<std::string> validate_config(const ScenarioConfig& cfg);

// Zero-shot accuracies of the perception module, cycled across services.
inline constexpr double kModalityAccuracy[6] = {0.777, 0.500, 0.634, 0.540, 0.669, 0.250};

}  // namespace sagin
