#include "sagin/market.hpp"

#include <algorithm>
#include <stdexcept>

namespace sagin {

Valuation valuation_from_trace(std::span<const double> common_trace, std::span<const double> match_trace) {
  if (common_trace.empty() || common_trace.size() != match_trace.size())
    throw std::domain_error("valuation traces must be nonempty and of equal length");
  Valuation v;
  for (double c : common_trace) v.common += c;
  for (double m : match_trace) v.match += m;
  v.common /= static_cast<double>(common_trace.size());
  v.match /= static_cast<double>(match_trace.size());
  v.value = v.common * v.match;
  return v;
}

BidProfile BidProfile::scaled(double c) const {
  BidProfile out{satellite_contract * c, ground_bids};
  for (auto& x : out.ground_bids) x *= c;
  return out;
}

int MechanismOutcome::winner() const {
  for (std::size_t k = 0; k < winners.size(); ++k)
    if (winners[k]) return static_cast<int>(k);
  return -1;
}

double MechanismOutcome::payment() const {
  const int w = winner();
  return w < 0 ? 0.0 : payments[static_cast<std::size_t>(w)];
}

namespace {

MechanismOutcome award(std::size_t bidders, std::size_t who, double price, double rho) {
  MechanismOutcome out;
  out.winners.assign(bidders, 0);
  out.payments.assign(bidders, 0.0);
  out.winners[who] = 1;
  out.payments[who] = price;
  out.rho_used = rho;
  return out;
}

}  // namespace

MechanismOutcome msb(const BidProfile& bids, double rho) {
  if (!(rho >= 1.0)) throw std::domain_error("msb needs rho >= 1");
  const std::size_t n = bids.bidders();
  // top two ground bids suffice to get max(x_{-n}) for every n
  std::size_t first = 0;
  double best = -1.0, second = -1.0;
  for (std::size_t k = 1; k < n; ++k) {
    const double x = bids.bid(k);
    if (x > best) {
      second = best;
      best = x;
      first = k;
    } else if (x > second) {
      second = x;
    }
  }
  for (std::size_t k = 1; k < n; ++k) {
    const double others = std::max(bids.satellite_contract, k == first ? second : best);
    const double threshold = rho * std::max(others, 0.0);
    if (bids.bid(k) > threshold) return award(n, k, threshold, rho);
  }
  return award(n, 0, bids.satellite_contract, rho);
}

MechanismOutcome spa(const BidProfile& bids) {
  const std::size_t n = bids.bidders();
  std::vector<double> all(n);
  for (std::size_t k = 0; k < n; ++k) all[k] = bids.bid(k);
  const auto r = second_price(all);
  return award(n, r.winner, r.winner == 0 ? bids.satellite_contract : r.payment, 1.0);
}

MechanismOutcome first_price(const BidProfile& bids) {
  const std::size_t n = bids.bidders();
  std::size_t w = 0;
  for (std::size_t k = 1; k < n; ++k)
    if (bids.bid(k) > bids.bid(w)) w = k;
  return award(n, w, bids.bid(w), 1.0);
}

SecondPriceResult second_price(std::span<const double> bids) {
  if (bids.size() < 2) throw std::domain_error("second-price auction needs at least 2 bids");
  std::size_t w = 0;
  for (std::size_t k = 1; k < bids.size(); ++k)
    if (bids[k] > bids[w]) w = k;
  double pay = -1.0;
  for (std::size_t k = 0; k < bids.size(); ++k)
    if (k != w) pay = std::max(pay, bids[k]);
  return {w, pay};
}

double ground_order_statistic(const BidProfile& bids, std::size_t k) {
  if (k == 0 || k > bids.ground_bids.size()) return 0.0;
  std::vector<double> g = bids.ground_bids;
  std::nth_element(g.begin(), g.begin() + static_cast<std::ptrdiff_t>(k - 1), g.end(), std::greater<>());
  return g[k - 1];
}

double myopic_rho(const BidProfile& bids) {
  const double x2 = ground_order_statistic(bids, 2);
  if (!(x2 > 0.0)) return 1.0;
  return std::max(1.0, bids.satellite_contract / x2);
}

double optimal_rho(std::span<const BidProfile> history) {
  if (history.empty()) return 1.0;
  double x0 = 0.0, x2 = 0.0;
  for (const auto& b : history) {
    x0 += b.satellite_contract;
    x2 += ground_order_statistic(b, 2);
  }
  if (!(x2 > 0.0)) return 1.0;
  return std::max(1.0, x0 / x2);
}

double contract_price(double v0, std::span<const double> samples) {
  if (samples.empty()) throw std::domain_error("contract_price needs at least one sample");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double best_price = sorted.front();
  double best_profit = 0.0;
  bool have = false;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    if (k > 0 && sorted[k] == sorted[k - 1]) continue;
    const double x = sorted[k];
    const auto below = std::upper_bound(sorted.begin(), sorted.end(), x) - sorted.begin();
    const double profit = (v0 - x) * static_cast<double>(below) / n;
    if (!have || profit > best_profit) {
      best_profit = profit;
      best_price = x;
      have = true;
    }
  }
  return best_price;
}

double critical_payment(std::span<const double> competitors, double rho) {
  if (competitors.empty()) throw std::domain_error("critical_payment needs at least one competitor");
  if (!(rho >= 1.0)) throw std::domain_error("critical_payment needs rho >= 1");
  return rho * *std::max_element(competitors.begin(), competitors.end());
}

Surplus realized_surplus(const MechanismOutcome& outcome, std::span<const double> values) {
  Surplus s;
  const int w = outcome.winner();
  if (w < 0) return s;
  const double v = values[static_cast<std::size_t>(w)];
  s.total = v;
  const double u = v - outcome.payments[static_cast<std::size_t>(w)];
  if (w == 0) s.satellite = u;
  else s.bs = u;
  return s;
}

}  // namespace sagin
