#include <stdexcept>
#include <sstream>

#include "derived_values.hpp"
#include "doctest.h"
#include "sagin/latent_oracle.hpp"
#include "sagin/verify.hpp"

using namespace sagin;

namespace {

FiniteLatentModel hand_model() {
  FiniteLatentModel m;
  m.prior = {0.5, 0.5};
  m.intent = {{0.7, 0.3}, {0.2, 0.8}};
  m.emit = {{0.6, 0.3, 0.1}, {0.1, 0.3, 0.6}};
  return m;
}

}  // namespace

TEST_SUITE("latent") {
  TEST_CASE("hand-built model against the enumeration oracle") {
    const auto m = hand_model();
    CHECK(check_model(m).empty());
    const auto gap = oracle_posterior_gap(m, {{0, 0, 1}, {0, 2, 0}}, {0, 1, 0}, {{2, 2}});
    CHECK(gap.lhs == doctest::Approx(derived::kLatentGapLhs).epsilon(1e-12));
    CHECK(gap.rhs == doctest::Approx(derived::kLatentGapRhs).epsilon(1e-12));
    CHECK(gap.eps_task == doctest::Approx(derived::kLatentTaskAmbiguity).epsilon(1e-12));
    CHECK(gap.holds());
    CHECK(message_ambiguity(m, {0, 1, 0}) == doctest::Approx(derived::kLatentTaskAmbiguity).epsilon(1e-12));
  }

  TEST_CASE("single context gives a zero gap") {
    FiniteLatentModel m;
    m.prior = {1.0};
    m.intent = {{0.4, 0.6}};
    m.emit = {{0.5, 0.5}, {0.2, 0.8}};
    const auto gap = oracle_posterior_gap(m, {{0, 1}}, {1, 1}, {{0}});
    CHECK(gap.lhs == 0.0);
    CHECK(gap.lambda == 0.0);
    CHECK(gap.upsilon == 0.0);
  }

  TEST_CASE("uniform prior has unit skewness") { CHECK(skewness(hand_model()) == 1.0); }

  TEST_CASE("malformed distributions are reported") {
    auto m = hand_model();
    m.emit[0][0] = 0.7;
    CHECK_FALSE(check_model(m).empty());
  }

  TEST_CASE("text form round-trips") {
    const auto m = hand_model();
    std::ostringstream out;
    write_latent_model(m, out);
    std::istringstream in(out.str());
    const auto back = parse_latent_model(in);
    CHECK(back.prior == m.prior);
    CHECK(back.intent == m.intent);
    CHECK(back.emit == m.emit);
    std::istringstream bad("prior 0 zero\n");
    CHECK_THROWS_AS(parse_latent_model(bad), std::invalid_argument);
  }

  TEST_CASE("likelihoods sum to one over all messages of a length") {
    const auto m = hand_model();
    for (int c = 0; c < 2; ++c) {
      double s = 0.0;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) s += message_likelihood(m, {a, b}, c);
      CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
    }
  }

  TEST_CASE("seeded sweeps") {
    const auto base = theorem1_sweep(LatentFamily{}, 200, 3);
    CHECK(base.passed());
    CHECK(base.cases == 200);
    LatentFamily single;
    single.contexts = 1;
    CHECK(theorem1_sweep(single, 100, 4).passed());
    LatentFamily outside;
    outside.sigma = 0.5;
    const auto gated = theorem1_sweep(outside, 10, 5);
    CHECK(gated.passed());
    CHECK(gated.cases == 0);
    CHECK(gated.skipped > 0);
  }
}
