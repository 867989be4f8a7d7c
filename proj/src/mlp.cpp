#include "sagin/mlp.hpp"

#include <cmath>
#include <stdexcept>

namespace sagin {

void Mlp::layout() {
  if (sizes_.size() < 2) throw std::invalid_argument("Mlp needs at least an input and an output layer");
  for (int s : sizes_)
    if (s < 1) throw std::invalid_argument("Mlp layer sizes must be >= 1");
  offsets_.clear();
  std::size_t total = 0;
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    offsets_.push_back(total);
    total += static_cast<std::size_t>(sizes_[l]) * sizes_[l + 1] + sizes_[l + 1];
  }
  params_.assign(total, 0.0);
}

Mlp::Mlp(std::vector<int> sizes) : sizes_(std::move(sizes)) { layout(); }

Mlp::Mlp(std::vector<int> sizes, Rng& rng) : sizes_(std::move(sizes)) {
  layout();
  for (std::size_t l = 0; l < layer_count(); ++l) {
    const int in = sizes_[l];
    const double limit = std::sqrt(6.0 / in);
    const std::size_t n = static_cast<std::size_t>(in) * sizes_[l + 1];
    for (std::size_t k = 0; k < n; ++k) params_[offsets_[l] + k] = (2.0 * uniform01(rng) - 1.0) * limit;
  }
}

std::size_t Mlp::bias_offset(std::size_t layer) const {
  return offsets_[layer] + static_cast<std::size_t>(sizes_[layer]) * sizes_[layer + 1];
}

std::vector<double> Mlp::forward(std::span<const double> x) const {
  Tape tape;
  return forward(x, tape);
}

std::vector<double> Mlp::forward(std::span<const double> x, Tape& tape) const {
  if (static_cast<int>(x.size()) != input_size()) throw std::invalid_argument("Mlp input size mismatch");
  tape.acts.assign(1, std::vector<double>(x.begin(), x.end()));
  for (std::size_t l = 0; l < layer_count(); ++l) {
    const int in = sizes_[l], out = sizes_[l + 1];
    const double* w = params_.data() + offsets_[l];
    const double* b = params_.data() + bias_offset(l);
    const auto& a = tape.acts.back();
    std::vector<double> z(static_cast<std::size_t>(out));
    for (int o = 0; o < out; ++o) {
      double s = b[o];
      const double* row = w + static_cast<std::size_t>(o) * in;
      for (int i = 0; i < in; ++i) s += row[i] * a[i];
      z[o] = (l + 1 < layer_count() && s < 0.0) ? 0.0 : s;
    }
    tape.acts.push_back(std::move(z));
  }
  return tape.acts.back();
}

void Mlp::backward(const Tape& tape, std::span<const double> grad_out, std::vector<double>& grad) const {
  if (grad.size() != params_.size()) grad.assign(params_.size(), 0.0);
  std::vector<double> delta(grad_out.begin(), grad_out.end());
  for (std::size_t l = layer_count(); l-- > 0;) {
    const int in = sizes_[l], out = sizes_[l + 1];
    const double* w = params_.data() + offsets_[l];
    double* gw = grad.data() + offsets_[l];
    double* gb = grad.data() + bias_offset(l);
    const auto& a = tape.acts[l];
    std::vector<double> prev(static_cast<std::size_t>(in), 0.0);
    for (int o = 0; o < out; ++o) {
      const double d = delta[o];
      if (d == 0.0) continue;
      gb[o] += d;
      double* grow = gw + static_cast<std::size_t>(o) * in;
      const double* wrow = w + static_cast<std::size_t>(o) * in;
      for (int i = 0; i < in; ++i) {
        grow[i] += d * a[i];
        prev[i] += d * wrow[i];
      }
    }
    if (l > 0) {
      // ReLU gate: the stored activation is zero exactly where the unit was inactive
      for (int i = 0; i < in; ++i)
        if (!(a[i] > 0.0)) prev[i] = 0.0;
    }
    delta = std::move(prev);
  }
}

}  // namespace sagin
