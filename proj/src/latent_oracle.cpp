#include "sagin/latent_oracle.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "sagin/csv.hpp"

namespace sagin {

namespace {

bool normalized(const std::vector<double>& p) {
  double s = 0.0;
  for (double x : p) {
    if (!(x >= 0.0)) return false;
    s += x;
  }
  return std::abs(s - 1.0) <= 1e-12;
}

double odds(double e) {
  if (!(e >= 0.0 && e < 1.0)) throw std::domain_error("ambiguity must lie in [0, 1)");
  return e / (1.0 - e);
}

double emission_product(const FiniteLatentModel& m, const Message& x, int theta) {
  double p = 1.0;
  for (int s : x) p *= m.emit[theta][s];
  return p;
}

int sample_index(const std::vector<double>& p, Rng& rng) {
  double u = uniform01(rng);
  for (std::size_t k = 0; k + 1 < p.size(); ++k) {
    if (u < p[k]) return static_cast<int>(k);
    u -= p[k];
  }
  return static_cast<int>(p.size()) - 1;
}

std::vector<double> random_simplex(int n, double sharpness, Rng& rng) {
  std::vector<double> p(static_cast<std::size_t>(n));
  double s = 0.0;
  for (auto& x : p) {
    x = std::pow(uniform01(rng) + 1e-3, sharpness);
    s += x;
  }
  for (auto& x : p) x /= s;
  return p;
}

}  // namespace

std::vector<std::string> check_model(const FiniteLatentModel& m) {
  std::vector<std::string> v;
  if (m.prior.empty()) v.push_back("no contexts");
  if (m.emit.empty()) v.push_back("no intentions");
  if (!normalized(m.prior)) v.push_back("prior is not a distribution");
  if (m.intent.size() != m.prior.size()) v.push_back("one intention row per context required");
  for (const auto& row : m.intent)
    if (row.size() != m.emit.size() || !normalized(row)) v.push_back("intention row is not a distribution");
  for (const auto& row : m.emit)
    if (static_cast<int>(row.size()) != m.alphabet() || row.empty() || !normalized(row))
      v.push_back("emission row is not a distribution");
  if (m.true_context < 0 || m.true_context >= m.contexts()) v.push_back("true context out of range");
  if (m.true_intention < 0 || m.true_intention >= m.intentions()) v.push_back("true intention out of range");
  return v;
}

double message_likelihood(const FiniteLatentModel& m, const Message& x, int context) {
  double p = 0.0;
  for (int theta = 0; theta < m.intentions(); ++theta)
    p += m.intent[context][theta] * emission_product(m, x, theta);
  return p;
}

double message_ambiguity(const FiniteLatentModel& m, const Message& x) {
  double evidence = 0.0;
  for (int c = 0; c < m.contexts(); ++c) evidence += m.prior[c] * message_likelihood(m, x, c);
  if (!(evidence > 0.0)) throw std::domain_error("message has zero probability");
  const double truth = m.prior[m.true_context] * m.intent[m.true_context][m.true_intention] *
                       emission_product(m, x, m.true_intention);
  return 1.0 - truth / evidence;
}

double skewness(const FiniteLatentModel& m) {
  double g = 1.0;
  for (double q : m.prior)
    if (q > 0.0) g = std::max(g, m.prior[m.true_context] / q);
  return g;
}

PosteriorGap oracle_posterior_gap(const FiniteLatentModel& m, const std::vector<Message>& examples,
                                  const Message& task, const std::vector<Message>& continuation) {
  const int star = m.true_context;
  std::vector<double> joint(static_cast<std::size_t>(m.contexts()));  // q(c, d0, E)
  std::vector<double> cont(joint.size());                              // q(D \ d0 | c)
  for (int c = 0; c < m.contexts(); ++c) {
    double j = m.prior[c] * message_likelihood(m, task, c);
    for (const auto& e : examples) j *= message_likelihood(m, e, c);
    joint[c] = j;
    double d = 1.0;
    for (const auto& x : continuation) d *= message_likelihood(m, x, c);
    cont[c] = d;
  }
  if (!(joint[star] > 0.0)) throw std::domain_error("conditioning event q(d0, E, c*) has zero probability");

  PosteriorGap g;
  for (int c = 0; c < m.contexts(); ++c) {
    if (c == star) continue;
    g.lambda += joint[c] * cont[c] / joint[star];
    g.upsilon += joint[c] / joint[star];
  }
  const double pm = (cont[star] + g.lambda) / (1.0 + g.upsilon);
  g.lhs = std::abs(pm - cont[star]);

  g.eps_task = message_ambiguity(m, task);
  g.eta = 2.0 * odds(g.eps_task);
  double rhs = g.eta * std::pow(skewness(m), static_cast<double>(examples.size()));
  for (const auto& e : examples) {
    g.eps_examples.push_back(message_ambiguity(m, e));
    rhs *= odds(g.eps_examples.back());
  }
  g.rhs = rhs;
  return g;
}

FiniteLatentModel parse_latent_model(std::istream& in) {
  struct Row {
    int a, b;
    double p;
  };
  std::vector<std::pair<int, double>> priors;
  std::vector<Row> intents, emits;
  int truth_c = -1, truth_t = -1;
  int max_c = -1, max_t = -1, max_s = -1;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream ls(line);
    std::string kind;
    if (!(ls >> kind)) continue;
    auto fail = [&] { throw std::invalid_argument("latent model line " + std::to_string(lineno) + ": malformed row"); };
    int a = 0, b = 0;
    double p = 0.0;
    if (kind == "prior") {
      if (!(ls >> a >> p) || a < 0) fail();
      priors.emplace_back(a, p);
      max_c = std::max(max_c, a);
    } else if (kind == "intent") {
      if (!(ls >> a >> b >> p) || a < 0 || b < 0) fail();
      intents.push_back({a, b, p});
      max_c = std::max(max_c, a);
      max_t = std::max(max_t, b);
    } else if (kind == "emit") {
      if (!(ls >> a >> b >> p) || a < 0 || b < 0) fail();
      emits.push_back({a, b, p});
      max_t = std::max(max_t, a);
      max_s = std::max(max_s, b);
    } else if (kind == "truth") {
      if (!(ls >> truth_c >> truth_t)) fail();
    } else {
      fail();
    }
    std::string extra;
    if (ls >> extra) fail();
  }
  if (max_c < 0 || max_t < 0 || max_s < 0 || truth_c < 0)
    throw std::invalid_argument("latent model needs prior, intent, emit and truth rows");
  FiniteLatentModel m;
  m.prior.assign(static_cast<std::size_t>(max_c + 1), 0.0);
  m.intent.assign(m.prior.size(), std::vector<double>(static_cast<std::size_t>(max_t + 1), 0.0));
  m.emit.assign(static_cast<std::size_t>(max_t + 1), std::vector<double>(static_cast<std::size_t>(max_s + 1), 0.0));
  for (auto [c, p] : priors) m.prior[c] = p;
  for (const auto& r : intents) m.intent[r.a][r.b] = r.p;
  for (const auto& r : emits) m.emit[r.a][r.b] = r.p;
  m.true_context = truth_c;
  m.true_intention = truth_t;
  return m;
}

void write_latent_model(const FiniteLatentModel& m, std::ostream& out) {
  for (int c = 0; c < m.contexts(); ++c) out << "prior " << c << ' ' << format_double(m.prior[c]) << '\n';
  for (int c = 0; c < m.contexts(); ++c)
    for (int t = 0; t < m.intentions(); ++t)
      out << "intent " << c << ' ' << t << ' ' << format_double(m.intent[c][t]) << '\n';
  for (int t = 0; t < m.intentions(); ++t)
    for (int s = 0; s < m.alphabet(); ++s)
      out << "emit " << t << ' ' << s << ' ' << format_double(m.emit[t][s]) << '\n';
  out << "truth " << m.true_context << ' ' << m.true_intention << '\n';
}

LatentInstance random_latent_instance(const LatentFamily& f, Rng& rng) {
  LatentInstance inst;
  auto& m = inst.model;
  m.prior = f.uniform_prior ? std::vector<double>(static_cast<std::size_t>(f.contexts), 1.0 / f.contexts)
                            : random_simplex(f.contexts, 1.0, rng);
  for (int c = 0; c < f.contexts; ++c) m.intent.push_back(random_simplex(f.intentions, f.sharpness, rng));
  for (int t = 0; t < f.intentions; ++t) m.emit.push_back(random_simplex(f.alphabet, f.sharpness, rng));
  m.true_context = sample_index(m.prior, rng);
  m.true_intention = sample_index(m.intent[m.true_context], rng);

  auto draw = [&](int theta) {
    const int len = 1 + static_cast<int>(uniform01(rng) * f.message_length);
    Message x;
    for (int k = 0; k < len; ++k) x.push_back(sample_index(m.emit[theta], rng));
    return x;
  };
  for (int y = 0; y < f.examples; ++y) inst.examples.push_back(draw(m.true_intention));
  inst.task = draw(sample_index(m.intent[m.true_context], rng));
  for (int k = 0; k < f.continuation_messages; ++k)
    inst.continuation.push_back(draw(sample_index(m.intent[m.true_context], rng)));
  return inst;
}

}  // namespace sagin
