#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sagin::cli {

enum ExitCode : int { kOk = 0, kVerifyFailed = 1, kConfigError = 2, kIoError = 3, kCheckpointError = 4 };

struct Options {
  std::string verb;
  std::string config_path;  // empty: built-in defaults
  std::string out = "out";
  std::optional<std::uint64_t> seed;
  std::vector<std::string> policies;
  std::vector<std::string> mechanisms;
  int episodes = 0;
  std::string suite = "all";
  int trials = 0;
  std::string axis;
  std::vector<double> values;
  std::string checkpoint;
  int seeds = 1;
  int rounds = 1000;
  std::optional<double> rho;
  std::string command_line;
};

int run_command(const Options& opt);

}  // namespace sagin::cli
