#pragma once

#include <vector>

namespace sagin {

struct TrainConfig {
  double gamma = 0.95;
  double learning_rate = 1e-3;
  double momentum = 0.9;
  double epsilon_start = 1.0;
  double epsilon_end = 0.05;
  int epsilon_decay_steps = 5000;
  int batch_size = 64;
  int buffer_capacity = 10000;
  int target_sync_period = 100;
  int action_count = 10;
  int episodes = 500;
  int iterations = 50;
  std::vector<int> hidden = {64, 64};
  double reward_scale = 1.0;  // rewards are multiplied by this before storage
  double grad_clip = 0.0;     // max gradient L2 norm; 0 disables
};

}  // namespace sagin
