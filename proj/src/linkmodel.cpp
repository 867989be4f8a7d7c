#include "sagin/linkmodel.hpp"

#include <cmath>
#include <stdexcept>

namespace sagin {

double geocentric_angle(const SatelliteGeometry& geom) {
  const double r = geom.earth_radius_km / (geom.earth_radius_km + geom.altitude_km);
  const double theta = std::acos(r * std::cos(geom.min_elevation_rad)) - geom.min_elevation_rad;
  return theta > 0.0 ? theta : 0.0;
}

double coverage_time(const SatelliteGeometry& geom) {
  const double arc_km = 2.0 * geocentric_angle(geom) * (geom.earth_radius_km + geom.altitude_km);
  return arc_km / geom.velocity_km_s;
}

double uplink_rate(const LinkBudget& budget, std::span<const Transmitter> cohort, std::size_t user) {
  double interference = 0.0;
  for (std::size_t j = 0; j < cohort.size(); ++j)
    if (j != user) interference += cohort[j].gain * cohort[j].power_w;
  const double signal = cohort[user].gain * cohort[user].power_w;
  return budget.bandwidth_hz * std::log2(1.0 + signal / (interference + budget.noise_power_w));
}

double mean_uplink_rate(const LinkBudget& budget, std::span<const Transmitter> cohort) {
  if (cohort.empty()) throw std::domain_error("mean_uplink_rate: empty cohort");
  double sum = 0.0;
  for (std::size_t u = 0; u < cohort.size(); ++u) sum += uplink_rate(budget, cohort, u);
  return sum / static_cast<double>(cohort.size());
}

std::vector<Transmitter> cohort_of(const Operator& op) {
  std::vector<Transmitter> out;
  out.reserve(op.users.size());
  for (const auto& u : op.users) out.push_back({u.mean_channel_gain, u.transmit_power_w});
  return out;
}

LinkBudget budget_of(const Operator& op, double noise_power_w) {
  return {op.bandwidth_hz, noise_power_w};
}

double operator_mean_rate(const Operator& op, double noise_power_w) {
  const auto cohort = cohort_of(op);
  return mean_uplink_rate(budget_of(op, noise_power_w), cohort);
}

}  // namespace sagin
