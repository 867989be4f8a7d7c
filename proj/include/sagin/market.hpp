#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace sagin {

struct Valuation {
  double common = 0.0;  // c_n
  double match = 0.0;   // m_n
  double value = 0.0;   // c_n * m_n
};

// Averages per-slot common values (total cost less accuracy cost) and match gains
// (kappa * ln(1/beta)). Throws std::domain_error for empty or mismatched traces.
Valuation valuation_from_trace(std::span<const double> common_trace, std::span<const double> match_trace);

// Bidder 0 is the satellite; bidders 1..N are ground BSs.
struct BidProfile {
  double satellite_contract = 0.0;  // x_0
  std::vector<double> ground_bids;  // x_1..x_N

  std::size_t bidders() const { return ground_bids.size() + 1; }
  double bid(std::size_t id) const { return id == 0 ? satellite_contract : ground_bids[id - 1]; }
  BidProfile scaled(double c) const;
};

struct MechanismOutcome {
  std::vector<std::uint8_t> winners;  // z, indexed by bidder id
  std::vector<double> payments;       // p, indexed by bidder id
  double rho_used = 1.0;

  // Winning bidder id, or -1 if nobody won.
  int winner() const;
  double payment() const;
  bool operator==(const MechanismOutcome&) const = default;
};

// Ground BS n wins iff x_n > rho * max(x_{-n}), x_{-n} including x_0, and pays that
// threshold; otherwise the satellite wins at x_0. Throws std::domain_error for rho < 1.
MechanismOutcome msb(const BidProfile& bids, double rho);

// Highest bid wins, ties to the lowest id. A ground winner pays the second-highest bid;
// a satellite winner pays its contract. Throws std::domain_error for fewer than 2 bidders.
MechanismOutcome spa(const BidProfile& bids);

// Highest bidder pays its own bid. Not strategy-proof; used as a fuzzing control.
MechanismOutcome first_price(const BidProfile& bids);

struct SecondPriceResult {
  std::size_t winner = 0;
  double payment = 0.0;
};
// Plain second-price rule over a bid list. Throws std::domain_error for fewer than 2 bids.
SecondPriceResult second_price(std::span<const double> bids);

// k-th highest ground bid (k = 1 is the highest); 0 when fewer than k ground bids.
double ground_order_statistic(const BidProfile& bids, std::size_t k);

// max(1, x_0 / x_(2)) with x_(2) the second-highest ground bid; 1 if x_(2) <= 0.
double myopic_rho(const BidProfile& bids);
// max(1, mean x_0 / mean x_(2)) over the history; 1 for an empty history.
double optimal_rho(std::span<const BidProfile> history);

// argmax over the sample values x of mean((v0 - x) * 1(s <= x)); ties to the lowest x.
// Throws std::domain_error for an empty sample.
double contract_price(double v0, std::span<const double> samples);

// rho * max(competitors). Throws std::domain_error when empty or rho < 1.
double critical_payment(std::span<const double> competitors, double rho);

struct Surplus {
  double total = 0.0;      // sum v * z
  double bs = 0.0;         // ground winner's v - p
  double satellite = 0.0;  // satellite winner's v - p
};
// values indexed by bidder id like the outcome.
Surplus realized_surplus(const MechanismOutcome& outcome, std::span<const double> values);

}  // namespace sagin
