#include "sagin/cot.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sagin {

double log_inverse_beta(double beta) {
  if (beta <= 0.0) return kLogCap;
  return std::min(-std::log(beta), kLogCap);
}

double delta_tokens(bool cached, double offload, double requests, double k_i) {
  if (!cached) return 0.0;
  return (1.0 - offload) * requests * k_i;
}

double update_tokens(const ContextState& prev, bool cached, double delta) {
  return cached ? prev.tokens + delta : 0.0;
}

double update_aot(const ContextState& prev, bool cached, double delta, double vanish, DecayMode mode) {
  if (vanish < 0.0) throw std::domain_error("vanishing factor must be >= 0");
  if (mode == DecayMode::proportional && vanish > 1.0)
    throw std::domain_error("proportional decay needs a vanishing factor <= 1");
  if (!cached) return 0.0;
  const double next = mode == DecayMode::subtractive ? prev.aot + delta - vanish
                                                     : (1.0 - vanish) * prev.aot + delta;
  return std::max(next, 0.0);
}

ContextState advance_context(const ContextState& prev, bool cached, double delta, double vanish,
                             DecayMode mode) {
  return {update_tokens(prev, cached, delta), update_aot(prev, cached, delta, vanish, mode)};
}

double accuracy(double alpha, double beta, double kappa) {
  return alpha * kappa * log_inverse_beta(beta);
}

double unit_accuracy_cost(double alpha, double beta, double kappa) {
  if (alpha >= 1.0) return 0.0;
  return (1.0 - alpha) / (std::max(kappa, 1.0) * log_inverse_beta(beta));
}

double ambiguity_bound(double eps_d0, std::span<const double> eps_examples) {
  auto odds = [](double e) {
    if (!(e >= 0.0 && e < 1.0)) throw std::domain_error("ambiguity must lie in [0, 1)");
    return e / (1.0 - e);
  };
  double bound = 2.0 * odds(eps_d0);
  for (double e : eps_examples) bound *= odds(e);
  return bound;
}

std::int64_t length_threshold(const std::function<double(std::int64_t)>& eps, double sigma,
                              std::int64_t cap) {
  if (!(sigma >= 0.0 && sigma < 0.5)) throw std::domain_error("sigma must lie in [0, 0.5)");
  if (eps(1) <= sigma) return 1;
  // invariant: eps(lo) > sigma, and eps(hi) <= sigma once found
  std::int64_t lo = 1;
  std::int64_t hi = 2;
  while (eps(hi) > sigma) {
    lo = hi;
    if (hi >= cap) throw std::range_error("length_threshold: eps stays above sigma up to the cap");
    hi = std::min(hi * 2, cap);
  }
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (eps(mid) <= sigma) hi = mid;
    else lo = mid;
  }
  return hi;
}

}  // namespace sagin
