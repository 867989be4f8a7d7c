#pragma once

#include <cstdint>
#include <functional>
#include <span>

#include "sagin/domain.hpp"

namespace sagin {

// Substitute for ln(1/beta) when beta = 0.
inline constexpr double kLogCap = 50.0;

struct ContextState {
  double tokens = 0.0;  // K
  double aot = 0.0;     // kappa
  bool operator==(const ContextState&) const = default;
};

// ln(1/beta), capped at kLogCap.
double log_inverse_beta(double beta);

// a * (1 - offload) * R * k_i. offload is the cloud share of the requests.
double delta_tokens(bool cached, double offload, double requests, double k_i);

double update_tokens(const ContextState& prev, bool cached, double delta);

// Throws std::domain_error for a negative vanish, or vanish > 1 in proportional mode.
double update_aot(const ContextState& prev, bool cached, double delta, double vanish, DecayMode mode);

ContextState advance_context(const ContextState& prev, bool cached, double delta, double vanish,
                             DecayMode mode);

// alpha * kappa * ln(1/beta).
double accuracy(double alpha, double beta, double kappa);

// (1 - alpha) / (max(kappa, 1) * ln(1/beta)).
double unit_accuracy_cost(double alpha, double beta, double kappa);

// eta * prod eps_y / (1 - eps_y), eta = 2 eps_d0 / (1 - eps_d0).
double ambiguity_bound(double eps_d0, std::span<const double> eps_examples);

// Smallest k >= 1 with eps(k) <= sigma; eps must be nonincreasing.
// Throws std::range_error if no such k exists up to cap.
std::int64_t length_threshold(const std::function<double(std::int64_t)>& eps, double sigma,
                              std::int64_t cap = std::int64_t{1} << 40);

}  // namespace sagin
