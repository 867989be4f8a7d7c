#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sagin/rng.hpp"

namespace sagin {

using Message = std::vector<int>;  // token indices

// Generative model: a context c ~ prior; each message draws its own intention
// theta ~ intent[c], then iid tokens from emit[theta].
struct FiniteLatentModel {
  std::vector<double> prior;               // q(c)
  std::vector<std::vector<double>> intent; // q(theta | c), [c][theta]
  std::vector<std::vector<double>> emit;   // q(s | theta), [theta][s]
  int true_context = 0;                    // c*
  int true_intention = 0;                  // theta*

  int contexts() const { return static_cast<int>(prior.size()); }
  int intentions() const { return static_cast<int>(emit.size()); }
  int alphabet() const { return emit.empty() ? 0 : static_cast<int>(emit.front().size()); }
};

// Empty when the model is well formed; distributions must sum to 1 within 1e-12.
std::vector<std::string> check_model(const FiniteLatentModel& model);

// q(x | c) = sum_theta q(theta | c) prod_s q(s | theta).
double message_likelihood(const FiniteLatentModel& model, const Message& x, int context);

// Definition of ambiguity: 1 - q(c*, theta* | x).
double message_ambiguity(const FiniteLatentModel& model, const Message& x);

// max over c of q(c*) / q(c); 1 for a uniform prior.
double skewness(const FiniteLatentModel& model);

struct PosteriorGap {
  double lhs = 0.0;      // |p_m(D | d0, E) - q(D | d0, c*)|
  double rhs = 0.0;      // eta * gamma^|E| * prod eps/(1-eps)
  double eta = 0.0;
  double lambda = 0.0;
  double upsilon = 0.0;
  double eps_task = 0.0;
  std::vector<double> eps_examples;
  bool holds() const { return lhs <= rhs; }
};

// Exact marginalisation over contexts and per-message intentions. continuation is
// D without d0. Throws std::domain_error when q(d0, E, c*) = 0 or an ambiguity is 1.
PosteriorGap oracle_posterior_gap(const FiniteLatentModel& model, const std::vector<Message>& examples,
                                  const Message& task, const std::vector<Message>& continuation);

// Rows: "prior c p", "intent c theta p", "emit theta s p", "truth c theta".
// '#' starts a comment. Throws std::invalid_argument on malformed rows.
FiniteLatentModel parse_latent_model(std::istream& in);
void write_latent_model(const FiniteLatentModel& model, std::ostream& out);

struct LatentFamily {
  int contexts = 2;
  int intentions = 2;
  int alphabet = 3;
  int examples = 2;
  int message_length = 3;
  int continuation_messages = 1;
  bool uniform_prior = true;
  double sharpness = 2.0;  // exponent on uniform draws; larger means peakier emissions
  double sigma = 0.45;     // ambiguity ceiling the examples are meant to respect
};

struct LatentInstance {
  FiniteLatentModel model;
  std::vector<Message> examples;
  Message task;
  std::vector<Message> continuation;
};

// Draws a model and messages from the generative process with c = c*; examples use theta*.
LatentInstance random_latent_instance(const LatentFamily& family, Rng& rng);

}  // namespace sagin
