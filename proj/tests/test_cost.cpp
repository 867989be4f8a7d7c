#include <stdexcept>
#include <vector>

#include "derived_values.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "sagin/cost.hpp"
#include "sagin/linkmodel.hpp"
#include "sagin/sim.hpp"

using namespace sagin;

namespace {

CacheDecision decision(std::vector<std::uint8_t> cached, std::vector<double> edge) {
  CacheDecision d = CacheDecision::empty(cached.size());
  d.cached = std::move(cached);
  d.edge = std::move(edge);
  return d;
}

}  // namespace

TEST_SUITE("cost") {
  TEST_CASE("switching counts loads only") {
    const std::vector<std::uint8_t> a{1, 0, 1}, b{1, 1, 1}, none{0, 0, 0};
    CHECK(switching_cost(a, a, 0.5) == 0.0);
    CHECK(switching_cost(std::vector<std::uint8_t>{0, 0, 1}, b, 0.5) == 1.0);
    CHECK(switching_cost(b, none, 0.5) == 0.0);
  }

  TEST_CASE("transmission") {
    const std::vector<double> bits{8e8};
    CHECK(transmission_cost(decision({1}, {1.0}), std::vector<double>{0.0}, bits, 2.5e7, 1e8, 1e-4) == 0.0);
    // Edge-served: access term only.
    CHECK(transmission_cost(decision({1}, {1.0}), std::vector<double>{3.0}, bits, 2.5e7, 1e8, 1e-4) ==
          doctest::Approx(3.0 * 1e-4 * 8e8 / 2.5e7));
    CHECK(transmission_cost(decision({1}, {0.5}), std::vector<double>{3.0}, bits, 2.5e7, 1e8, 1e-4) ==
          doctest::Approx(derived::kTransmissionExample).epsilon(1e-14));
  }

  TEST_CASE("transmission with the default operator") {
    const auto cfg = make_default_config();
    const auto& op = cfg.operators[1];
    const double rate = operator_mean_rate(op, cfg.noise_power_w);
    const std::vector<double> bits{100.0 * kBitsPerMegabyte};
    const double expect = op.edge_access_cost * 8e8 / rate + 8e8 / op.core_rate;
    CHECK(transmission_cost(decision({0}, {0.0}), std::vector<double>{1.0}, bits, rate, op.core_rate,
                            op.edge_access_cost) == doctest::Approx(expect).epsilon(1e-14));
  }

  TEST_CASE("compute") {
    const std::vector<double> e{130.0}, k{200.0}, r{3.0};
    CHECK(compute_cost(decision({1}, {0.0}), r, e, k, 19440.0) == 0.0);
    CHECK(compute_cost(decision({1}, {1.0}), r, e, k, 19440.0) ==
          doctest::Approx(derived::kComputeExample).epsilon(1e-14));
    CHECK(compute_cost(decision({1}, {1.0}), r, e, k, 2 * 19440.0) ==
          compute_cost(decision({1}, {1.0}), r, e, k, 19440.0) / 2.0);
  }

  TEST_CASE("accuracy") {
    const std::vector<double> r{2.0, 3.0};
    const std::vector<double> perfect{0.0, 0.0};
    CHECK(accuracy_cost(decision({1, 1}, {1.0, 1.0}), r, perfect) == 0.0);
    const std::vector<double> unit{0.2, 0.1};
    CHECK(accuracy_cost(decision({1, 1}, {0.0, 0.0}), r, unit) == 0.0);
    CHECK(accuracy_cost(decision({1, 1}, {1.0, 0.5}), r, unit) == doctest::Approx(0.4 + 0.15));
  }

  TEST_CASE("accuracy with the default service accuracies") {
    const auto cfg = make_default_config();
    const double beta = cfg.models[0].cot_gain_beta;
    const double u = unit_accuracy_cost(kModalityAccuracy[0], beta, 200.0);
    const std::vector<double> r{4.0}, unit{u};
    CHECK(accuracy_cost(decision({1}, {1.0}), r, unit) ==
          doctest::Approx(4.0 * derived::kUnitAccuracyLlama200).epsilon(1e-13));
  }

  TEST_CASE("cloud") {
    const std::vector<double> r{10.0};
    CHECK(cloud_cost(decision({1}, {1.0}), r, std::vector<double>{0.04}) == 0.0);
    CHECK(cloud_cost(decision({0}, {0.0}), r, std::vector<double>{0.025}) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(cloud_cost(decision({1}, {0.5}), r, std::vector<double>{0.04}) ==
          cloud_cost(decision({0}, {0.0}), r, std::vector<double>{0.04}) / 2.0);
  }

  TEST_CASE("time average") {
    CostBreakdown a, b;
    a.total = 1.0;
    b.total = 3.0;
    CHECK(total_cost(std::vector<CostBreakdown>{a, b}) == 2.0);
    CHECK(total_cost(std::vector<CostBreakdown>(7, b)) == 3.0);
    CHECK_THROWS_AS(total_cost(std::vector<CostBreakdown>{}), std::domain_error);
  }

  TEST_CASE("default scenario average against long-double accumulation") {
    auto cfg = make_default_config();
    cfg.horizon_slots = 30;
    const auto res = run_scenario(cfg, Policy::least_aot);
    for (std::size_t n = 0; n < cfg.operators.size(); ++n) {
      long double s = 0.0L;
      for (const auto& t : res.traces) {
        const auto& c = t.costs[n];
        s += static_cast<long double>(c.switching) + c.transmission + c.compute + c.accuracy + c.cloud;
      }
      CHECK(res.average_cost[n] == doctest::Approx(static_cast<double>(s / res.traces.size())).epsilon(1e-12));
    }
  }
}
