#pragma once

#include <span>

#include "sagin/domain.hpp"

namespace sagin {

// Co-channel transmitter as seen by the receiving operator.
struct Transmitter {
  double gain = 0.0;
  double power_w = 0.0;
};

struct LinkBudget {
  double bandwidth_hz = 0.0;
  double noise_power_w = 0.0;
};

// theta_g = arccos(E/(E+l) * cos(theta_e)) - theta_e, clamped at 0.
double geocentric_angle(const SatelliteGeometry& geom);

// Pass duration in seconds: 2 * theta_g * (E + l) / v.
double coverage_time(const SatelliteGeometry& geom);

// Shannon rate of cohort[user] treating every other member as interference.
double uplink_rate(const LinkBudget& budget, std::span<const Transmitter> cohort, std::size_t user);

// Arithmetic mean of uplink_rate over the cohort. Throws std::domain_error if empty.
double mean_uplink_rate(const LinkBudget& budget, std::span<const Transmitter> cohort);

std::vector<Transmitter> cohort_of(const Operator& op);
LinkBudget budget_of(const Operator& op, double noise_power_w);

// E[r] for an operator's own user cohort.
double operator_mean_rate(const Operator& op, double noise_power_w);

}  // namespace sagin
