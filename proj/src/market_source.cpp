#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sagin/sim.hpp"

namespace sagin {

namespace {

double standard_normal(Rng& rng) {
  // Box-Muller on 53-bit uniforms keeps draws identical across standard libraries
  const double u1 = 1.0 - uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::vector<double> draw(const MarketSettings& s, const std::vector<Valuation>& vals, Rng& rng) {
  const double shock = std::exp(s.common_shock_sigma * standard_normal(rng));
  std::vector<double> v(vals.size());
  for (std::size_t n = 0; n < vals.size(); ++n) {
    const double jitter = std::exp(s.match_jitter_sigma * standard_normal(rng));
    v[n] = vals[n].common * shock * vals[n].match * jitter;
  }
  return v;
}

}  // namespace

MarketSource::MarketSource(const ScenarioConfig& cfg, std::vector<Valuation> valuations, std::uint64_t seed)
    : settings_(cfg.market), valuations_(std::move(valuations)), rng_(make_rng(seed, {0xa0c7})) {
  if (valuations_.size() < 2) throw std::invalid_argument("market needs the satellite and at least one ground BS");
  Rng warm = make_rng(seed, {0xc0de});
  std::vector<double> top;
  double v0 = 0.0;
  for (int k = 0; k < settings_.contract_samples; ++k) {
    const auto v = draw(settings_, valuations_, warm);
    v0 += v[0];
    top.push_back(*std::max_element(v.begin() + 1, v.end()));
    reference_ += std::max(v[0], top.back());
  }
  v0 /= settings_.contract_samples;
  reference_ /= settings_.contract_samples;
  contract_ = contract_price(v0, top);
}

std::vector<double> MarketSource::draw_values() { return draw(settings_, valuations_, rng_); }

AuctionRound MarketSource::next() {
  AuctionRound r;
  r.values = draw_values();
  r.bids.satellite_contract = contract_;
  r.bids.ground_bids.assign(r.values.begin() + 1, r.values.end());
  return r;
}

}  // namespace sagin
