#include <stdexcept>
#include <sstream>

#include "derived_values.hpp"
#include "doctest.h"
#include "sagin/config.hpp"
#include "sagin/domain.hpp"

using namespace sagin;

TEST_SUITE("domain") {
  TEST_CASE("default config validates") {
    const auto cfg = make_default_config();
    CHECK(validate_config(cfg).empty());
    CHECK(cfg.gpu.memory_gb == 80.0);
    CHECK(cfg.models[0].context_window == 2048.0);
    CHECK(cfg.models[1].context_window == 8192.0);
    CHECK(cfg.ground_count() == 5);
    CHECK(cfg.operators[1].gpus == 24);
    CHECK(cfg.services.size() == 10);
  }

  TEST_CASE("sigma at one half is rejected") {
    auto cfg = make_default_config();
    cfg.models[0].cot_noise_sigma = 0.5;
    const auto v = validate_config(cfg);
    REQUIRE(v.size() == 1);
    CHECK(v[0].find("sigma must be < 0.5") != std::string::npos);
  }

  TEST_CASE("satellite with memory is rejected") {
    auto cfg = make_default_config();
    cfg.operators[0].gpu_memory_gb = 10.0;
    const auto v = validate_config(cfg);
    REQUIRE(v.size() == 1);
    CHECK(v[0].find("satellite caches nothing") != std::string::npos);
  }

  TEST_CASE("derive_beta") {
    CHECK(derive_beta(0.0) == 0.0);
    CHECK(derive_beta(1.0 / 3.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(derive_beta(0.45) == doctest::Approx(derived::kBeta045).epsilon(1e-15));
    CHECK_THROWS_AS(derive_beta(0.5), std::domain_error);
    CHECK_THROWS_AS(derive_beta(-0.1), std::domain_error);
  }

  TEST_CASE("beta is monotone in sigma") {
    double prev = -1.0;
    for (int k = 0; k < 50; ++k) {
      const double b = derive_beta(k * 0.01);
      CHECK(b > prev);
      CHECK(b < 1.0);
      prev = b;
    }
  }

  TEST_CASE("gpu count sets capacities") {
    Operator op;
    apply_gpu_count(op, 24, GpuSpec{});
    CHECK(op.gpu_memory_gb == 1920.0);
    CHECK(op.compute_rate == 19440.0);
    CHECK(op.gpu_energy_budget == 24 * 300.0 * 810.0);
  }

  TEST_CASE("service lists are prefix stable") {
    const auto a = make_services(6, 2, 1);
    const auto b = make_services(18, 2, 1);
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].input_size_mb == b[i].input_size_mb);
      CHECK(a[i].cot_example_tokens == b[i].cot_example_tokens);
    }
    for (const auto& s : b) {
      CHECK(s.cot_example_tokens >= 50.0);
      CHECK(s.cot_example_tokens <= 200.0);
    }
  }
}

TEST_SUITE("config") {
  TEST_CASE("write then parse round-trips") {
    const auto cfg = make_default_config();
    std::istringstream in(config_to_string(cfg));
    const auto back = parse_config(in);
    CHECK(config_to_string(back) == config_to_string(cfg));
    CHECK(config_hash(back) == config_hash(cfg));
    CHECK(validate_config(back).empty());
  }

  TEST_CASE("unknown keys are reported by validation") {
    std::istringstream in("[scenario]\nhorizon_slots = 50\nbogus_key = 3\n");
    const auto cfg = parse_config(in);
    CHECK(cfg.horizon_slots == 50);
    const auto v = validate_config(cfg);
    REQUIRE(v.size() == 1);
    CHECK(v[0].find("bogus_key") != std::string::npos);
  }

  TEST_CASE("malformed values throw ConfigError") {
    std::istringstream in("[scenario]\nhorizon_slots = many\n");
    CHECK_THROWS_AS(parse_config(in), ConfigError);
  }

  TEST_CASE("hash changes with content") {
    auto cfg = make_default_config();
    const auto h = config_hash(cfg);
    cfg.aot_vanish = 0.4;
    CHECK(config_hash(cfg) != h);
  }
}
