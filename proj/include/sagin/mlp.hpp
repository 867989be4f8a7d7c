#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sagin/rng.hpp"

namespace sagin {

// Fully connected network: ReLU on hidden layers, linear output. Parameters live in one
// flat vector; layer l stores its (out x in) row-major weights, then its biases.
class Mlp {
 public:
  Mlp() = default;
  // He-uniform weights, zero biases. sizes = {input, hidden..., output}.
  Mlp(std::vector<int> sizes, Rng& rng);
  // Zero parameters of the given shape.
  explicit Mlp(std::vector<int> sizes);

  const std::vector<int>& sizes() const { return sizes_; }
  int input_size() const { return sizes_.front(); }
  int output_size() const { return sizes_.back(); }
  std::size_t layer_count() const { return sizes_.size() - 1; }

  std::vector<double>& params() { return params_; }
  const std::vector<double>& params() const { return params_; }
  std::size_t weight_offset(std::size_t layer) const { return offsets_[layer]; }
  std::size_t bias_offset(std::size_t layer) const;

  std::vector<double> forward(std::span<const double> x) const;

  // Activations of every layer, kept for backward(). acts[0] is the input,
  // acts.back() the output; hidden entries are post-ReLU.
  struct Tape {
    std::vector<std::vector<double>> acts;
  };
  std::vector<double> forward(std::span<const double> x, Tape& tape) const;

  // Adds dL/dparams to grad given dL/doutput for the taped input.
  void backward(const Tape& tape, std::span<const double> grad_out, std::vector<double>& grad) const;

  bool operator==(const Mlp&) const = default;

 private:
  void layout();
  std::vector<int> sizes_;
  std::vector<std::size_t> offsets_;
  std::vector<double> params_;
};

}  // namespace sagin
