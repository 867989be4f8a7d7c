#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include "sagin/auction.hpp"
#include "sagin/checkpoint.hpp"
#include "sagin/config.hpp"
#include "sagin/csv.hpp"
#include "sagin/sim.hpp"
#include "sagin/verify.hpp"

namespace sagin::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "0.1.0";

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::ofstream open_out(const fs::path& path, bool binary = false) {
  std::ofstream f(path, binary ? std::ios::binary : std::ios::out);
  if (!f) throw IoError("cannot write " + path.string());
  return f;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + dir.string());
}

ScenarioConfig load(const Options& opt) {
  ScenarioConfig cfg = opt.config_path.empty() ? make_default_config() : load_config(opt.config_path);
  if (opt.seed) {
    cfg.rng_seed = *opt.seed;
    populate_users(cfg);
  }
  return cfg;
}

// Prints every violation and returns false when the config is invalid.
bool check(const ScenarioConfig& cfg) {
  const auto v = validate_config(cfg);
  for (const auto& s : v) std::cerr << "config: " << s << '\n';
  return v.empty();
}

std::string hex(std::uint64_t x) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << x;
  return os.str();
}

void write_manifest(const Options& opt, const ScenarioConfig& cfg, const fs::path& dir) {
  auto f = open_out(dir / "manifest.txt");
  f << "command = " << opt.command_line << '\n'
    << "verb = " << opt.verb << '\n'
    << "seed = " << cfg.rng_seed << '\n'
    << "config_hash = " << hex(config_hash(cfg)) << '\n'
    << "config_copy = config.cfg\n"
    << "version = " << kVersion << '\n'
    << "compiler = " << __VERSION__ << '\n';
  auto c = open_out(dir / "config.cfg");
  write_config(cfg, c);
  if (!f || !c) throw IoError("failed writing manifest in " + dir.string());
}

std::vector<Policy> policies_of(const Options& opt, std::vector<Policy> fallback) {
  if (opt.policies.empty()) return fallback;
  std::vector<Policy> out;
  for (const auto& p : opt.policies) out.push_back(parse_policy(p));
  return out;
}

int simulate(const Options& opt) {
  const auto cfg = load(opt);
  if (!check(cfg)) return kConfigError;
  const fs::path dir = opt.out;
  ensure_dir(dir);
  for (Policy policy : policies_of(opt, {Policy::least_aot})) {
    const auto res = run_scenario(cfg, policy);
    const std::string name(policy_name(policy));
    {
      auto f = open_out(dir / ("costs_" + name + ".csv"));
      CsvWriter w(f);
      w.header({"slot", "operator", "policy", "switching", "transmission", "compute", "accuracy", "cloud", "total"});
      const double grounds = cfg.ground_count();
      for (const auto& t : res.traces) {
        CostBreakdown b;
        for (std::size_t n = 0; n < cfg.operators.size(); ++n)
          if (!cfg.operators[n].is_satellite()) b += t.costs[n];
        w << t.slot << "ground_mean" << name << b.switching / grounds << b.transmission / grounds
          << b.compute / grounds << b.accuracy / grounds << b.cloud / grounds << b.total / grounds;
        w.end_row();
      }
    }
    {
      auto f = open_out(dir / ("operator_costs_" + name + ".csv"));
      CsvWriter w(f);
      w.header({"slot", "operator", "policy", "switching", "transmission", "compute", "accuracy", "cloud", "total"});
      for (const auto& t : res.traces)
        for (std::size_t n = 0; n < t.costs.size(); ++n) {
          const auto& b = t.costs[n];
          w << t.slot << n << name << b.switching << b.transmission << b.compute << b.accuracy << b.cloud << b.total;
          w.end_row();
        }
    }
    {
      auto f = open_out(dir / ("events_" + name + ".csv"));
      CsvWriter w(f);
      w.header({"slot", "operator", "policy", "event", "service", "model", "kappa", "tokens"});
      for (const auto& t : res.traces)
        for (const auto& e : t.events) {
          w << t.slot << e.op << name << event_name(e.event.kind) << e.event.service << e.event.model
            << e.event.kappa << e.event.tokens;
          w.end_row();
        }
    }
    const auto relay = satellite_relay_feasible(cfg, res);
    std::cout << name << ": mean total cost " << format_double(res.mean_total_cost(cfg)) << ", satellite relay "
              << (relay.feasible ? "feasible" : "infeasible") << " (slack " << format_double(relay.slack_s)
              << " s)\n";
  }
  write_manifest(opt, cfg, dir);
  return kOk;
}

int run_sweep(const Options& opt) {
  const auto cfg = load(opt);
  if (!check(cfg)) return kConfigError;
  const SweepAxis axis = parse_axis(opt.axis);
  const auto rows = sweep(cfg, axis, opt.values, policies_of(opt, {Policy::least_aot, Policy::fifo, Policy::lfu}),
                          opt.seeds);
  const fs::path dir = opt.out;
  ensure_dir(dir);
  auto f = open_out(dir / "sweep.csv");
  CsvWriter w(f);
  w.header({"axis", "value", "policy", "seed", "mean_total_cost", "switching", "transmission", "compute",
            "accuracy", "cloud", "performance_gain"});
  for (const auto& r : rows) {
    w << axis_name(r.axis) << r.value << policy_name(r.policy) << std::to_string(r.seed) << r.mean_total_cost
      << r.breakdown.switching << r.breakdown.transmission << r.breakdown.compute << r.breakdown.accuracy
      << r.breakdown.cloud << r.performance_gain;
    w.end_row();
  }
  write_manifest(opt, cfg, dir);
  std::cout << "wrote " << rows.size() << " rows to " << (dir / "sweep.csv").string() << '\n';
  return kOk;
}

int auction_train(const Options& opt) {
  const auto cfg = load(opt);
  if (!check(cfg)) return kConfigError;
  const fs::path dir = opt.out;
  ensure_dir(dir);
  const auto vals = operator_valuations(cfg);
  const auto res = train_dqmsb(cfg, vals, cfg.rng_seed, opt.episodes);
  {
    auto f = open_out(dir / "dqmsb.ckpt", true);
    save_checkpoint(res.net, f);
    if (!f) throw IoError("failed writing checkpoint");
  }
  auto f = open_out(dir / "curve.csv");
  CsvWriter w(f);
  w.header({"episode", "mean_reward", "loss", "epsilon", "rho_hist"});
  for (const auto& r : res.curve) {
    std::string hist;
    for (std::size_t k = 0; k < r.rho_histogram.size(); ++k) hist += (k ? ";" : "") + std::to_string(r.rho_histogram[k]);
    w << r.episode << r.mean_reward << r.loss << r.epsilon << hist;
    w.end_row();
  }
  write_manifest(opt, cfg, dir);
  const double slope = relative_plateau_slope(res.curve, 50);
  std::cout << "trained " << res.curve.size() << " episodes; contract price " << format_double(res.contract)
            << "; relative slope over the last 50 episodes " << format_double(slope)
            << (std::abs(slope) < cfg.plateau_slope_threshold ? " (plateau)" : " (not yet flat)") << '\n';
  return kOk;
}

int auction_eval(const Options& opt) {
  const auto cfg = load(opt);
  if (!check(cfg)) return kConfigError;
  const fs::path dir = opt.out;
  ensure_dir(dir);
  std::vector<Mechanism> mechs;
  for (const auto& m : opt.mechanisms) mechs.push_back(parse_mechanism(m));
  if (mechs.empty())
    mechs = {Mechanism::dqmsb, Mechanism::spa, Mechanism::msb, Mechanism::myopic, Mechanism::optimal};
  const auto vals = operator_valuations(cfg);
  std::optional<Mlp> net;
  for (auto m : mechs) {
    if (m != Mechanism::dqmsb || net) continue;
    net = load_checkpoint(opt.checkpoint.empty() ? (dir / "dqmsb.ckpt").string() : opt.checkpoint);
    if (net->input_size() != static_cast<int>(market_width(vals)) || net->output_size() != cfg.dqn.action_count)
      throw CheckpointError("checkpoint shape does not match the market");
  }
  EvalSettings settings;
  settings.rounds = opt.rounds;
  if (opt.rho) settings.fixed_rho = *opt.rho;
  const auto rows = evaluate_mechanisms(cfg, vals, net ? &*net : nullptr, mechs,
                                        derive_seed(cfg.rng_seed, {0xe7a1}), settings);
  auto f = open_out(dir / "rounds.csv");
  CsvWriter w(f);
  w.header({"round", "mechanism", "rho", "winner", "payment", "total_surplus", "bs_surplus", "satellite_surplus",
            "contract_bid", "top_bid", "second_bid"});
  for (const auto& r : rows) {
    w << r.round << mechanism_name(r.mechanism) << r.rho << r.winner << r.payment << r.surplus.total
      << r.surplus.bs << r.surplus.satellite << r.contract_bid << r.top_bid << r.second_bid;
    w.end_row();
  }
  write_manifest(opt, cfg, dir);
  for (auto m : mechs)
    std::cout << mechanism_name(m) << ": mean total surplus " << format_double(mean_surplus(rows, m)) << '\n';
  return kOk;
}

int run_verify(const Options& opt) {
  const auto cfg = load(opt);
  if (!check(cfg)) return kConfigError;
  const fs::path dir = opt.out;
  ensure_dir(dir);
  const std::uint64_t seed = cfg.rng_seed;
  auto n = [&](int fallback) { return opt.trials > 0 ? opt.trials : fallback; };
  auto want = [&](const char* s) { return opt.suite == "all" || opt.suite == s; };
  const std::vector<std::string> known{"all", "theorem1", "strategyproof", "scaling", "spa", "tiny", "gradients"};
  if (std::find(known.begin(), known.end(), opt.suite) == known.end()) throw UsageError("unknown suite: " + opt.suite);

  std::vector<OracleReport> reports;
  if (want("theorem1")) {
    LatentFamily fam;
    reports.push_back(theorem1_sweep(fam, n(1000), seed));
    LatentFamily single;
    single.contexts = 1;
    auto r = theorem1_sweep(single, n(1000), seed);
    r.suite = "theorem1-single-context";
    reports.push_back(r);
  }
  if (want("strategyproof")) {
    std::vector<std::string> names = opt.mechanisms.empty() ? std::vector<std::string>{"msb"} : opt.mechanisms;
    for (const auto& name : names) {
      if (name == "first_price") {
        reports.push_back(strategyproofness_fuzz([](const BidProfile& b) { return first_price(b); }, n(10000), 50,
                                                 seed, "strategyproof-first_price"));
        continue;
      }
      if (name != "msb" && name != "spa") throw UsageError("strategy-proofness fuzz supports msb, spa, first_price");
      for (double rho : name == "spa" ? std::vector<double>{1.0}
                                      : std::vector<double>{1.0, std::pow(10.0, 0.3), std::pow(10.0, 0.7)}) {
        reports.push_back(strategyproofness_fuzz([rho](const BidProfile& b) { return msb(b, rho); }, n(10000), 50,
                                                 seed, "strategyproof-" + name + "-rho" + format_double(rho)));
      }
    }
  }
  if (want("scaling"))
    reports.push_back(scaling_invariance_fuzz([](const BidProfile& b) { return msb(b, 2.0); }, n(10000), seed));
  if (want("spa")) reports.push_back(spa_equivalence_fuzz(n(10000), seed));
  if (want("tiny")) reports.push_back(tiny_optimality_suite(n(50), cfg.tiny_gap_threshold, seed));
  if (want("gradients")) reports.push_back(gradient_check_suite(n(100), 1e-4, seed));

  const auto path = dir / "verify_report.csv";
  {
    auto f = open_out(path);
    write_report_csv(reports, f);
  }
  write_manifest(opt, cfg, dir);
  bool ok = true;
  for (const auto& r : reports) {
    std::cout << (r.passed() ? "PASS " : "FAIL ") << r.suite << ": " << r.cases << " cases, " << r.violations.size()
              << " violations";
    for (const auto& note : r.notes) std::cout << "; " << note;
    std::cout << '\n';
    ok = ok && r.passed();
  }
  if (!ok) std::cout << "report: " << path.string() << '\n';
  return ok ? kOk : kVerifyFailed;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::ifstream f(p);
  if (!f) throw IoError("cannot read " + p.string());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(f, line))
    if (!line.empty()) rows.push_back(split_csv_line(line));
  return rows;
}

int report(const Options& opt) {
  const fs::path dir = opt.out;
  if (!fs::is_directory(dir)) throw IoError("no such directory: " + dir.string());
  bool any = false;
  auto out = open_out(dir / "report.csv");
  CsvWriter w(out);
  w.header({"source", "key", "policy", "runs", "mean_total_cost"});
  if (fs::exists(dir / "sweep.csv")) {
    any = true;
    const auto rows = read_csv(dir / "sweep.csv");
    std::map<std::pair<double, std::string>, std::pair<double, int>> agg;
    for (std::size_t k = 1; k < rows.size(); ++k) {
      auto& a = agg[{std::stod(rows[k][1]), rows[k][2]}];
      a.first += std::stod(rows[k][4]);
      a.second += 1;
    }
    std::cout << "sweep (" << (rows.size() > 1 ? rows[1][0] : "") << ")\n";
    for (const auto& [key, v] : agg) {
      const double mean = v.first / v.second;
      std::cout << "  " << std::setw(8) << format_double(key.first) << "  " << std::setw(10) << key.second << "  "
                << format_double(mean) << '\n';
      w << "sweep" << format_double(key.first) << key.second << v.second << mean;
      w.end_row();
    }
  }
  for (const auto& entry : fs::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (name.rfind("costs_", 0) != 0 || entry.path().extension() != ".csv") continue;
    any = true;
    const auto rows = read_csv(entry.path());
    double s = 0.0;
    for (std::size_t k = 1; k < rows.size(); ++k) s += std::stod(rows[k][8]);
    const int slots = static_cast<int>(rows.size()) - 1;
    const std::string policy = rows.size() > 1 ? rows[1][2] : "";
    std::cout << "simulate " << policy << ": mean total cost " << format_double(slots ? s / slots : 0.0) << '\n';
    w << "simulate" << "ground_mean" << policy << 1 << (slots ? s / slots : 0.0);
    w.end_row();
  }
  if (fs::exists(dir / "rounds.csv")) {
    any = true;
    const auto rows = read_csv(dir / "rounds.csv");
    std::map<std::string, std::pair<double, int>> agg;
    for (std::size_t k = 1; k < rows.size(); ++k) {
      auto& a = agg[rows[k][1]];
      a.first += std::stod(rows[k][5]);
      a.second += 1;
    }
    for (const auto& [mech, v] : agg) {
      std::cout << "auction " << mech << ": mean total surplus " << format_double(v.first / v.second) << '\n';
      w << "auction" << "total_surplus" << mech << v.second << v.first / v.second;
      w.end_row();
    }
  }
  if (!any) std::cout << "nothing to report in " << dir.string() << '\n';
  return kOk;
}

}  // namespace

int run_command(const Options& opt) {
  try {
    if (opt.verb == "simulate") return simulate(opt);
    if (opt.verb == "sweep") return run_sweep(opt);
    if (opt.verb == "auction-train") return auction_train(opt);
    if (opt.verb == "auction-eval") return auction_eval(opt);
    if (opt.verb == "verify") return run_verify(opt);
    if (opt.verb == "report") return report(opt);
    std::cerr << "unknown verb: " << opt.verb << '\n';
    return kConfigError;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kConfigError;
  } catch (const CheckpointError& e) {
    std::cerr << "checkpoint error: " << e.what() << '\n';
    return kCheckpointError;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  }
}

}  // namespace sagin::cli
