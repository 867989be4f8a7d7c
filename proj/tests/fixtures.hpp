#pragma once

#include <initializer_list>
#include <utility>
#include <vector>

#include "sagin/domain.hpp"

namespace fixtures {

// One model, `services` services with k tokens each, a satellite and one ground BS.
// Entries of a 20e9-parameter model take 40 GB, so `gpus` GPUs hold 2 * gpus entries.
inline sagin::ScenarioConfig small_config(int services, int gpus, double k = 100.0,
                                          double param_count = 20e9, double window = 2048.0) {
  using namespace sagin;
  ScenarioConfig cfg = make_default_config();
  cfg.models = {make_model(0, "test", param_count, window, 0.3)};
  cfg.services.clear();
  for (int i = 0; i < services; ++i) {
    Service s;
    s.id = i;
    s.input_size_mb = 100.0;
    s.cot_example_tokens = k;
    s.zero_shot_accuracy = {0.777};
    s.model = 0;
    cfg.services.push_back(s);
  }
  cfg.cloud_unit_cost = {1.0};
  cfg.operators.resize(2);
  apply_gpu_count(cfg.operators[1], gpus, cfg.gpu);
  return cfg;
}

inline std::vector<double> requests_at(std::size_t pairs, std::initializer_list<std::pair<std::size_t, double>> hits) {
  std::vector<double> r(pairs, 0.0);
  for (auto [p, v] : hits) r[p] = v;
  return r;
}

}  // namespace fixtures
