#include <stdexcept>
#include <cmath>
#include <vector>

#include "derived_values.hpp"
#include "doctest.h"
#include "sagin/domain.hpp"
#include "sagin/linkmodel.hpp"

using namespace sagin;

TEST_SUITE("linkmodel") {
  TEST_CASE("geocentric angle at zero elevation") {
    SatelliteGeometry g;
    CHECK(geocentric_angle(g) == doctest::Approx(derived::kGeocentricAngleDefault).epsilon(1e-14));
    CHECK(geocentric_angle(g) > 0.0);
    CHECK(geocentric_angle(g) < M_PI / 2);
    g.altitude_km = 550.0;
    CHECK(geocentric_angle(g) == doctest::Approx(std::acos(6371.0 / 6921.0)).epsilon(1e-14));
  }

  TEST_CASE("geocentric angle clamps at the zenith limit") {
    SatelliteGeometry g;
    g.min_elevation_rad = M_PI / 2;
    CHECK(geocentric_angle(g) == 0.0);
    CHECK(coverage_time(g) == 0.0);
  }

  TEST_CASE("coverage time") {
    SatelliteGeometry g;
    CHECK(coverage_time(g) == doctest::Approx(derived::kCoverageTimeDefault).epsilon(1e-13));
    const double arc = 2.0 * geocentric_angle(g) * (g.earth_radius_km + g.altitude_km);
    CHECK(coverage_time(g) == doctest::Approx(arc / g.velocity_km_s).epsilon(1e-15));
    SatelliteGeometry h{550.0, 6371.0, 7.6, 10.0 * M_PI / 180.0, 0.0};
    CHECK(coverage_time(h) == doctest::Approx(derived::kCoverageTime550km10deg).epsilon(1e-13));
  }

  TEST_CASE("doubling the velocity halves the pass") {
    SatelliteGeometry g;
    const double t = coverage_time(g);
    g.velocity_km_s *= 2.0;
    CHECK(coverage_time(g) == t / 2.0);
  }

  TEST_CASE("single user at unit SNR") {
    const LinkBudget b{20e6, 1e-13};
    const std::vector<Transmitter> one{{1e-12, 0.1}};
    CHECK(uplink_rate(b, one, 0) == doctest::Approx(20e6).epsilon(1e-14));
    const std::vector<Transmitter> dead{{0.0, 0.2}};
    CHECK(uplink_rate(b, dead, 0) == 0.0);
  }

  TEST_CASE("two symmetric users") {
    const LinkBudget b{20e6, 1e-13};
    const std::vector<Transmitter> two{{1e-12, 0.1}, {1e-12, 0.1}};
    const double expect = 20e6 * std::log2(1.5);
    CHECK(uplink_rate(b, two, 0) == doctest::Approx(expect).epsilon(1e-14));
    CHECK(uplink_rate(b, two, 1) == uplink_rate(b, two, 0));
  }

  TEST_CASE("asymmetric pair against the oracle") {
    const LinkBudget b{20e6, 1e-13};
    const std::vector<Transmitter> two{{1e-10, 0.2}, {5e-11, 0.2}};
    CHECK(uplink_rate(b, two, 0) == doctest::Approx(derived::kUplinkTwoUserFirst).epsilon(1e-13));
    CHECK(uplink_rate(b, two, 1) == doctest::Approx(derived::kUplinkTwoUserSecond).epsilon(1e-13));
    CHECK(mean_uplink_rate(b, two) == doctest::Approx(derived::kUplinkTwoUserMean).epsilon(1e-13));
    const std::vector<Transmitter> one{{1e-10, 0.2}};
    CHECK(mean_uplink_rate(b, one) == doctest::Approx(derived::kUplinkSingleUser).epsilon(1e-13));
    CHECK(mean_uplink_rate(b, one) == uplink_rate(b, one, 0));
  }

  TEST_CASE("mean of an empty cohort throws") {
    CHECK_THROWS_AS(mean_uplink_rate(LinkBudget{20e6, 1e-13}, {}), std::domain_error);
  }

  TEST_CASE("default cohort matches long-double summation") {
    const auto cfg = make_default_config();
    const auto& op = cfg.operators[1];
    REQUIRE(op.users.size() == 10);
    long double total = 0.0L, sum = 0.0L;
    for (const auto& u : op.users) total += static_cast<long double>(u.mean_channel_gain) * u.transmit_power_w;
    for (const auto& u : op.users) {
      const long double own = static_cast<long double>(u.mean_channel_gain) * u.transmit_power_w;
      sum += op.bandwidth_hz * std::log2(1.0L + own / (total - own + cfg.noise_power_w));
    }
    const double expect = static_cast<double>(sum / op.users.size());
    CHECK(operator_mean_rate(op, cfg.noise_power_w) == doctest::Approx(expect).epsilon(1e-12));
  }

  TEST_CASE("adding an interferer never raises a rate") {
    const LinkBudget b{20e6, 1e-13};
    std::vector<Transmitter> c{{1e-10, 0.2}};
    double prev = uplink_rate(b, c, 0);
    for (int k = 0; k < 8; ++k) {
      c.push_back({1e-11 * (k + 1), 0.2});
      const double r = uplink_rate(b, c, 0);
      CHECK(r <= prev);
      prev = r;
    }
  }
}
