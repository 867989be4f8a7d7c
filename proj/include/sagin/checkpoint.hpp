#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "sagin/mlp.hpp"

namespace sagin {

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Layout, all integers and doubles little-endian:
//   8 bytes  magic "DQMSBCK1"
//   u32      format version (1)
//   u32      L, number of layer sizes
//   u32 x L  layer sizes, input first
//   per layer l: f64 weights, (size[l+1] x size[l]) row-major, then f64 biases x size[l+1]
inline constexpr char kCheckpointMagic[8] = {'D', 'Q', 'M', 'S', 'B', 'C', 'K', '1'};
inline constexpr unsigned kCheckpointVersion = 1;

void save_checkpoint(const Mlp& net, std::ostream& out);
void save_checkpoint(const Mlp& net, const std::string& path);

// Throws CheckpointError on bad magic, unknown version, implausible shape or truncation.
Mlp load_checkpoint(std::istream& in);
Mlp load_checkpoint(const std::string& path);

}  // namespace sagin
