#include <stdexcept>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "sagin/linkmodel.hpp"
#include "sagin/sim.hpp"

using namespace sagin;

TEST_SUITE("sim") {
  TEST_CASE("zero rates give an empty matrix") {
    auto cfg = make_default_config();
    for (auto& op : cfg.operators)
      for (auto& u : op.users) u.request_rate = 0.0;
    Rng rng = make_rng(1);
    const auto r = generate_requests(rng, cfg, 0);
    for (double c : r.counts) CHECK(c == 0.0);
  }

  TEST_CASE("request counts follow the rate") {
    const auto cfg = fixtures::small_config(1, 2);
    const double rate = 10 * 0.05;
    Rng rng = make_rng(2);
    const int n = 100000;
    double sum = 0.0;
    for (int t = 0; t < n; ++t) sum += generate_requests(rng, cfg, t).at(1, 0);
    CHECK(std::abs(sum / n - rate) <= 3.0 * std::sqrt(rate / n));
  }

  TEST_CASE("same seed, same requests") {
    const auto cfg = make_default_config();
    CHECK(slot_requests(cfg, 7).counts == slot_requests(cfg, 7).counts);
    Rng a = make_rng(3), b = make_rng(3);
    CHECK(generate_requests(a, cfg, 0).counts == generate_requests(b, cfg, 0).counts);
  }

  TEST_CASE("popularity weights average one") {
    const auto cfg = make_default_config();
    for (int slot : {0, 9, 10, 55}) {
      const auto w = popularity_weights(cfg, 1, slot);
      double s = 0.0;
      for (double x : w) s += x;
      CHECK(s / w.size() == doctest::Approx(1.0).epsilon(1e-12));
    }
  }

  TEST_CASE("empty workload costs nothing") {
    auto cfg = make_default_config();
    cfg.horizon_slots = 1;
    for (auto& op : cfg.operators)
      for (auto& u : op.users) u.request_rate = 0.0;
    const auto res = run_scenario(cfg, Policy::least_aot);
    REQUIRE(res.traces.size() == 1);
    for (const auto& c : res.traces[0].costs) CHECK(c.total == 0.0);
  }

  TEST_CASE("runs are deterministic") {
    auto cfg = make_default_config();
    cfg.horizon_slots = 20;
    for (Policy p : {Policy::least_aot, Policy::fifo, Policy::lfu}) {
      const auto a = run_scenario(cfg, p), b = run_scenario(cfg, p);
      CHECK(a.average_cost == b.average_cost);
      for (std::size_t t = 0; t < a.traces.size(); ++t)
        for (std::size_t n = 0; n < cfg.operators.size(); ++n)
          CHECK(a.traces[t].costs[n].total == b.traces[t].costs[n].total);
    }
  }

  TEST_CASE("traces are contiguous and averages recompute") {
    auto cfg = make_default_config();
    cfg.horizon_slots = 25;
    const auto res = run_scenario(cfg, Policy::fifo);
    REQUIRE(res.traces.size() == 25);
    for (std::size_t t = 0; t < res.traces.size(); ++t) CHECK(res.traces[t].slot == static_cast<int>(t));
    const auto again = recompute_averages(res);
    for (std::size_t n = 0; n < again.size(); ++n)
      CHECK(again[n] == doctest::Approx(res.average_cost[n]).epsilon(1e-9));
  }

  TEST_CASE("invalid configs are refused") {
    auto cfg = make_default_config();
    cfg.horizon_slots = 0;
    CHECK_THROWS_AS(run_scenario(cfg, Policy::least_aot), std::invalid_argument);
  }

  TEST_CASE("relay feasibility") {
    auto cfg = make_default_config();
    cfg.horizon_slots = 10;
    for (auto& u : cfg.operators[0].users) u.request_rate = 0.0;
    const auto idle = satellite_relay_feasible(cfg, run_scenario(cfg, Policy::least_aot));
    CHECK(idle.feasible);
    CHECK(idle.relay_time_s == 0.0);
    CHECK(idle.slack_s == coverage_time(cfg.satellite));
  }

  TEST_CASE("relay slack against long-double accumulation") {
    auto cfg = make_default_config();
    cfg.horizon_slots = 40;
    const auto res = run_scenario(cfg, Policy::least_aot);
    const auto& sat = cfg.operators[0];
    const long double rate = static_cast<long double>(operator_mean_rate(sat, cfg.noise_power_w)) + sat.core_rate;
    long double used = 0.0L;
    for (const auto& t : res.traces)
      for (std::size_t p = 0; p < cfg.pair_count(); ++p)
        used += static_cast<long double>(cfg.services[p / cfg.models.size()].input_size_mb) * 8e6L *
                t.requests.at(0, p) / rate;
    const auto c = satellite_relay_feasible(cfg, res);
    CHECK(c.relay_time_s == doctest::Approx(static_cast<double>(used)).epsilon(1e-12));
    CHECK(c.slack_s == doctest::Approx(coverage_time(cfg.satellite) - static_cast<double>(used)).epsilon(1e-12));
    CHECK(c.feasible == (c.slack_s >= 0.0));
    // A pass far shorter than the relay load is infeasible.
    cfg.satellite.velocity_km_s = 1e9;
    CHECK_FALSE(satellite_relay_feasible(cfg, res).feasible);
  }

  TEST_CASE("every request is served once") {
    auto cfg = make_default_config();
    cfg.horizon_slots = 30;
    const auto res = run_scenario(cfg, Policy::least_aot);
    for (const auto& t : res.traces) {
      for (std::size_t n = 0; n < cfg.operators.size(); ++n) {
        double total = 0.0;
        for (std::size_t p = 0; p < cfg.pair_count(); ++p) total += t.requests.at(n, p);
        CHECK(t.request_total[n] == total);
      }
    }
  }

  TEST_CASE("singleton sweep equals run_scenario") {
    auto cfg = make_default_config();
    cfg.horizon_slots = 20;
    const auto rows = sweep(cfg, SweepAxis::gpus, {24.0}, {Policy::least_aot});
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].mean_total_cost == run_scenario(cfg, Policy::least_aot).mean_total_cost(cfg));
  }

  TEST_CASE("sweep rows come back in order") {
    auto cfg = make_default_config();
    cfg.horizon_slots = 10;
    const auto rows = sweep(cfg, SweepAxis::users, {5.0, 10.0}, {Policy::fifo, Policy::lfu}, 2);
    REQUIRE(rows.size() == 8);
    CHECK(rows[0].value == 5.0);
    CHECK(rows[0].policy == Policy::fifo);
    CHECK(rows[1].seed != rows[0].seed);
    CHECK(rows[2].policy == Policy::lfu);
    CHECK(rows[4].value == 10.0);
  }

  TEST_CASE("more gpus never cost more for least aot") {
    auto cfg = make_default_config();
    cfg.horizon_slots = 50;
    const auto rows = sweep(cfg, SweepAxis::gpus, {8.0, 16.0, 24.0, 32.0}, {Policy::least_aot});
    int inversions = 0;
    for (std::size_t k = 1; k < rows.size(); ++k) inversions += rows[k].mean_total_cost > rows[k - 1].mean_total_cost;
    CHECK(inversions <= 1);
  }

  TEST_CASE("more users cost more") {
    auto cfg = make_default_config();
    cfg.horizon_slots = 50;
    for (Policy p : {Policy::least_aot, Policy::fifo, Policy::lfu}) {
      const auto rows = sweep(cfg, SweepAxis::users, {5.0, 10.0, 15.0, 20.0}, {p});
      int inversions = 0;
      for (std::size_t k = 1; k < rows.size(); ++k) inversions += rows[k].mean_total_cost < rows[k - 1].mean_total_cost;
      CHECK(inversions <= 1);
    }
  }

  TEST_CASE("derive_config applies each axis") {
    const auto cfg = make_default_config();
    CHECK(derive_config(cfg, SweepAxis::slots, 40).horizon_slots == 40);
    CHECK(derive_config(cfg, SweepAxis::services, 6).services.size() == 6);
    CHECK(derive_config(cfg, SweepAxis::gpus, 8).operators[1].gpus == 8);
    CHECK(derive_config(cfg, SweepAxis::users, 15).operators[1].users.size() == 15);
    CHECK(derive_config(cfg, SweepAxis::vanish, 0.2).aot_vanish == 0.2);
    CHECK(parse_axis("gpus") == SweepAxis::gpus);
    CHECK_THROWS(parse_axis("colour"));
  }
}
