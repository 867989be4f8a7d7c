#include "sagin/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "sagin/csv.hpp"

namespace sagin {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size())
    throw ConfigError("key '" + key + "': expected a number, got '" + v + "'");
  return out;
}

long long to_int(const std::string& key, const std::string& v) {
  long long out = 0;
  auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size())
    throw ConfigError("key '" + key + "': expected an integer, got '" + v + "'");
  return out;
}

std::vector<double> to_doubles(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& part : split_csv_line(v)) out.push_back(to_double(key, trim(part)));
  return out;
}

using Setter = std::function<void(const std::string& key, const std::string& value)>;
using Table = std::map<std::string, Setter>;

Setter num(double& dst) {
  return [&dst](const std::string& k, const std::string& v) { dst = to_double(k, v); };
}
Setter integer(int& dst) {
  return [&dst](const std::string& k, const std::string& v) { dst = static_cast<int>(to_int(k, v)); };
}

struct ModelDraft {
  std::string name;
  double param_count = 0.0;
  std::optional<double> size_gb, energy_per_token;
  double context_window = 0.0;
  double sigma = 0.0;
  double cloud_unit_cost = 1.0;
};

struct OperatorDraft {
  Operator op;
  std::optional<int> gpus;
  std::set<std::string> explicit_keys;
};

struct ServiceDraft {
  Service s;
};

class Parser {
 public:
  ScenarioConfig parse(std::istream& in) {
    cfg_ = make_default_config();
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      auto hash = line.find('#');
      if (hash != std::string::npos) line.resize(hash);
      const std::string t = trim(line);
      if (t.empty()) continue;
      if (t.front() == '[') {
        if (t.back() != ']') throw ConfigError("line " + std::to_string(lineno) + ": unterminated section header");
        open_section(trim(std::string_view(t).substr(1, t.size() - 2)));
        continue;
      }
      const auto eq = t.find('=');
      if (eq == std::string::npos)
        throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
      const std::string key = trim(std::string_view(t).substr(0, eq));
      const std::string value = trim(std::string_view(t).substr(eq + 1));
      if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
      assign(key, value);
    }
    return finish();
  }

 private:
  void open_section(const std::string& name) {
    section_ = name;
    if (name == "model") {
      models_.emplace_back();
    } else if (name == "service") {
      services_.emplace_back();
    } else if (name == "operator") {
      operators_.emplace_back();
    } else if (name != "scenario" && name != "satellite_geometry" && name != "gpu" &&
               name != "workload" && name != "market" && name != "dqn" && name != "services") {
      unknown_section_ = true;
      return;
    }
    unknown_section_ = false;
  }

  void assign(const std::string& key, const std::string& value) {
    const std::string qualified = (section_.empty() ? std::string("<none>") : section_) + "." + key;
    if (section_.empty() || unknown_section_) {
      cfg_.unknown_keys.push_back(qualified);
      return;
    }
    Table table = table_for_section();
    auto it = table.find(key);
    if (it == table.end()) {
      cfg_.unknown_keys.push_back(qualified);
      return;
    }
    it->second(qualified, value);
    if (section_ == "operator") operators_.back().explicit_keys.insert(key);
  }

  Table table_for_section() {
    auto& c = cfg_;
    if (section_ == "scenario") {
      return {
          {"horizon_slots", integer(c.horizon_slots)},
          {"noise_power_w", num(c.noise_power_w)},
          {"aot_vanish", num(c.aot_vanish)},
          {"decay_mode",
           [&c](const std::string& k, const std::string& v) {
             if (v == "proportional") c.decay_mode = DecayMode::proportional;
             else if (v == "subtractive") c.decay_mode = DecayMode::subtractive;
             else throw ConfigError("key '" + k + "': expected proportional|subtractive");
           }},
          {"rng_seed",
           [&c](const std::string& k, const std::string& v) {
             c.rng_seed = static_cast<std::uint64_t>(to_int(k, v));
           }},
          {"tiny_gap_threshold", num(c.tiny_gap_threshold)},
          {"plateau_slope_threshold", num(c.plateau_slope_threshold)},
      };
    }
    if (section_ == "satellite_geometry") {
      auto& g = c.satellite;
      return {{"altitude_km", num(g.altitude_km)},
              {"earth_radius_km", num(g.earth_radius_km)},
              {"velocity_km_s", num(g.velocity_km_s)},
              {"min_elevation_rad", num(g.min_elevation_rad)},
              {"slant_distance_km", num(g.slant_distance_km)}};
    }
    if (section_ == "gpu") {
      return {{"memory_gb", num(c.gpu.memory_gb)},
              {"power_w", num(c.gpu.power_w)},
              {"efficiency_gflops_per_w", num(c.gpu.efficiency_gflops_per_w)}};
    }
    if (section_ == "workload") {
      return {{"zipf_exponent", num(c.workload.zipf_exponent)},
              {"popularity_shift_period", integer(c.workload.popularity_shift_period)}};
    }
    if (section_ == "market") {
      auto& m = c.market;
      return {{"cloud_context_aot", num(m.cloud_context_aot)},
              {"match_jitter_sigma", num(m.match_jitter_sigma)},
              {"common_shock_sigma", num(m.common_shock_sigma)},
              {"contract_samples", integer(m.contract_samples)},
              {"rounds_per_episode", integer(m.rounds_per_episode)}};
    }
    if (section_ == "dqn") {
      auto& d = c.dqn;
      return {{"gamma", num(d.gamma)},
              {"learning_rate", num(d.learning_rate)},
              {"momentum", num(d.momentum)},
              {"epsilon_start", num(d.epsilon_start)},
              {"epsilon_end", num(d.epsilon_end)},
              {"epsilon_decay_steps", integer(d.epsilon_decay_steps)},
              {"batch_size", integer(d.batch_size)},
              {"buffer_capacity", integer(d.buffer_capacity)},
              {"target_sync_period", integer(d.target_sync_period)},
              {"action_count", integer(d.action_count)},
              {"episodes", integer(d.episodes)},
              {"iterations", integer(d.iterations)},
              {"hidden",
               [&d](const std::string& k, const std::string& v) {
                 d.hidden.clear();
                 for (double h : to_doubles(k, v)) d.hidden.push_back(static_cast<int>(h));
               }},
              {"reward_scale", num(d.reward_scale)},
              {"grad_clip", num(d.grad_clip)}};
    }
    if (section_ == "services") {
      return {{"count", [this](const std::string& k, const std::string& v) {
                 generated_services_ = static_cast<int>(to_int(k, v));
               }}};
    }
    if (section_ == "model") {
      auto& m = models_.back();
      return {{"name", [&m](const std::string&, const std::string& v) { m.name = v; }},
              {"param_count", num(m.param_count)},
              {"size_gb", [&m](const std::string& k, const std::string& v) { m.size_gb = to_double(k, v); }},
              {"energy_per_token",
               [&m](const std::string& k, const std::string& v) { m.energy_per_token = to_double(k, v); }},
              {"context_window", num(m.context_window)},
              {"sigma", num(m.sigma)},
              {"cloud_unit_cost", num(m.cloud_unit_cost)}};
    }
    if (section_ == "service") {
      auto& s = services_.back().s;
      return {{"input_size_mb", num(s.input_size_mb)},
              {"cot_example_tokens", num(s.cot_example_tokens)},
              {"zero_shot_accuracy",
               [&s](const std::string& k, const std::string& v) { s.zero_shot_accuracy = to_doubles(k, v); }},
              {"model", integer(s.model)}};
    }
    // operator
    auto& d = operators_.back();
    auto& op = d.op;
    auto& p = op.population;
    return {{"kind",
             [&op](const std::string& k, const std::string& v) {
               if (v == "satellite") op.kind = OperatorKind::satellite;
               else if (v == "ground_bs") op.kind = OperatorKind::ground_bs;
               else throw ConfigError("key '" + k + "': expected satellite|ground_bs");
             }},
            {"gpus", [&d](const std::string& k, const std::string& v) { d.gpus = static_cast<int>(to_int(k, v)); }},
            {"bandwidth_hz", num(op.bandwidth_hz)},
            {"gpu_memory_gb", num(op.gpu_memory_gb)},
            {"gpu_energy_budget", num(op.gpu_energy_budget)},
            {"compute_rate", num(op.compute_rate)},
            {"core_rate", num(op.core_rate)},
            {"edge_access_cost", num(op.edge_access_cost)},
            {"cloud_access_cost", num(op.cloud_access_cost)},
            {"switch_coeff", num(op.switch_coeff)},
            {"users", integer(p.count)},
            {"user_power_w", num(p.transmit_power_w)},
            {"user_request_rate", num(p.request_rate)},
            {"min_distance_m", num(p.min_distance_m)},
            {"max_distance_m", num(p.max_distance_m)},
            {"path_loss_exponent", num(p.path_loss_exponent)},
            {"reference_gain", num(p.reference_gain)}};
  }

  ScenarioConfig finish() {
    if (!models_.empty()) {
      cfg_.models.clear();
      cfg_.cloud_unit_cost.clear();
      for (std::size_t i = 0; i < models_.size(); ++i) {
        const auto& d = models_[i];
        LlmModel m;
        m.id = static_cast<int>(i);
        m.name = d.name;
        m.param_count = d.param_count;
        m.size_gb = d.size_gb.value_or(2.0 * d.param_count * 1e-9);
        m.energy_per_token = d.energy_per_token.value_or(2.0 * d.param_count * 1e-9);
        m.context_window = d.context_window;
        m.cot_noise_sigma = d.sigma;
        // out-of-range sigma is left for validate_config to report
        m.cot_gain_beta = (d.sigma >= 0.0 && d.sigma < 0.5) ? derive_beta(d.sigma) : std::nan("");
        cfg_.models.push_back(m);
        cfg_.cloud_unit_cost.push_back(d.cloud_unit_cost);
      }
    }
    const int model_count = static_cast<int>(cfg_.models.size());
    if (!services_.empty()) {
      cfg_.services.clear();
      for (std::size_t i = 0; i < services_.size(); ++i) {
        Service s = services_[i].s;
        s.id = static_cast<int>(i);
        cfg_.services.push_back(std::move(s));
      }
    } else {
      const int count = generated_services_.value_or(static_cast<int>(cfg_.services.size()));
      cfg_.services = make_services(count, model_count, cfg_.rng_seed);
    }
    if (!operators_.empty()) {
      cfg_.operators.clear();
      for (std::size_t n = 0; n < operators_.size(); ++n) {
        auto& d = operators_[n];
        Operator op = d.op;
        op.id = static_cast<int>(n);
        if (d.gpus) {
          Operator derived = op;
          apply_gpu_count(derived, *d.gpus, cfg_.gpu);
          op.gpus = *d.gpus;
          if (!d.explicit_keys.count("gpu_memory_gb")) op.gpu_memory_gb = derived.gpu_memory_gb;
          if (!d.explicit_keys.count("gpu_energy_budget")) op.gpu_energy_budget = derived.gpu_energy_budget;
          if (!d.explicit_keys.count("compute_rate")) op.compute_rate = derived.compute_rate;
        }
        cfg_.operators.push_back(std::move(op));
      }
    } else {
      // default operators pick up a possibly changed GPU spec
      for (auto& op : cfg_.operators)
        if (!op.is_satellite()) apply_gpu_count(op, op.gpus, cfg_.gpu);
    }
    populate_users(cfg_);
    return std::move(cfg_);
  }

  ScenarioConfig cfg_;
  std::string section_;
  bool unknown_section_ = false;
  std::vector<ModelDraft> models_;
  std::vector<ServiceDraft> services_;
  std::vector<OperatorDraft> operators_;
  std::optional<int> generated_services_;
};


}  // namespace

ScenarioConfig parse_config(std::istream& in) { return Parser{}.parse(in); }

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path);
  return parse_config(in);
}

void write_config(const ScenarioConfig& c, std::ostream& out) {
  auto kv = [&out](std::string_view k, const auto& v) {
    out << k << " = ";
    if constexpr (std::is_floating_point_v<std::decay_t<decltype(v)>>) {
      out << format_double(v);
    } else {
      out << v;
    }
    out << '\n';
  };
  auto list = [](const auto& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (i) s += ", ";
      if constexpr (std::is_floating_point_v<std::decay_t<decltype(xs[0])>>) s += format_double(xs[i]);
      else s += std::to_string(xs[i]);
    }
    return s;
  };
  out << "[scenario]\n";
  kv("horizon_slots", c.horizon_slots);
  kv("noise_power_w", c.noise_power_w);
  kv("aot_vanish", c.aot_vanish);
  kv("decay_mode", std::string(c.decay_mode == DecayMode::proportional ? "proportional" : "subtractive"));
  kv("rng_seed", c.rng_seed);
  kv("tiny_gap_threshold", c.tiny_gap_threshold);
  kv("plateau_slope_threshold", c.plateau_slope_threshold);

  out << "\n[satellite_geometry]\n";
  kv("altitude_km", c.satellite.altitude_km);
  kv("earth_radius_km", c.satellite.earth_radius_km);
  kv("velocity_km_s", c.satellite.velocity_km_s);
  kv("min_elevation_rad", c.satellite.min_elevation_rad);
  kv("slant_distance_km", c.satellite.slant_distance_km);

  out << "\n[gpu]\n";
  kv("memory_gb", c.gpu.memory_gb);
  kv("power_w", c.gpu.power_w);
  kv("efficiency_gflops_per_w", c.gpu.efficiency_gflops_per_w);

  out << "\n[workload]\n";
  kv("zipf_exponent", c.workload.zipf_exponent);
  kv("popularity_shift_period", c.workload.popularity_shift_period);

  out << "\n[market]\n";
  kv("cloud_context_aot", c.market.cloud_context_aot);
  kv("match_jitter_sigma", c.market.match_jitter_sigma);
  kv("common_shock_sigma", c.market.common_shock_sigma);
  kv("contract_samples", c.market.contract_samples);
  kv("rounds_per_episode", c.market.rounds_per_episode);

  out << "\n[dqn]\n";
  const auto& d = c.dqn;
  kv("gamma", d.gamma);
  kv("learning_rate", d.learning_rate);
  kv("momentum", d.momentum);
  kv("epsilon_start", d.epsilon_start);
  kv("epsilon_end", d.epsilon_end);
  kv("epsilon_decay_steps", d.epsilon_decay_steps);
  kv("batch_size", d.batch_size);
  kv("buffer_capacity", d.buffer_capacity);
  kv("target_sync_period", d.target_sync_period);
  kv("action_count", d.action_count);
  kv("episodes", d.episodes);
  kv("iterations", d.iterations);
  kv("hidden", list(d.hidden));
  kv("reward_scale", d.reward_scale);
  kv("grad_clip", d.grad_clip);

  for (std::size_t m = 0; m < c.models.size(); ++m) {
    const auto& mod = c.models[m];
    out << "\n[model]\n";
    kv("name", mod.name);
    kv("param_count", mod.param_count);
    kv("size_gb", mod.size_gb);
    kv("energy_per_token", mod.energy_per_token);
    kv("context_window", mod.context_window);
    kv("sigma", mod.cot_noise_sigma);
    kv("cloud_unit_cost", m < c.cloud_unit_cost.size() ? c.cloud_unit_cost[m] : 1.0);
  }
  for (const auto& s : c.services) {
    out << "\n[service]\n";
    kv("input_size_mb", s.input_size_mb);
    kv("cot_example_tokens", s.cot_example_tokens);
    kv("zero_shot_accuracy", list(s.zero_shot_accuracy));
    kv("model", s.model);
  }
  for (const auto& op : c.operators) {
    out << "\n[operator]\n";
    kv("kind", std::string(op.is_satellite() ? "satellite" : "ground_bs"));
    kv("gpus", op.gpus);
    kv("bandwidth_hz", op.bandwidth_hz);
    kv("gpu_memory_gb", op.gpu_memory_gb);
    kv("gpu_energy_budget", op.gpu_energy_budget);
    kv("compute_rate", op.compute_rate);
    kv("core_rate", op.core_rate);
    kv("edge_access_cost", op.edge_access_cost);
    kv("cloud_access_cost", op.cloud_access_cost);
    kv("switch_coeff", op.switch_coeff);
    kv("users", op.population.count);
    kv("user_power_w", op.population.transmit_power_w);
    kv("user_request_rate", op.population.request_rate);
    kv("min_distance_m", op.population.min_distance_m);
    kv("max_distance_m", op.population.max_distance_m);
    kv("path_loss_exponent", op.population.path_loss_exponent);
    kv("reference_gain", op.population.reference_gain);
  }
}

std::string config_to_string(const ScenarioConfig& cfg) {
  std::ostringstream os;
  write_config(cfg, os);
  return os.str();
}

std::uint64_t config_hash(const ScenarioConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : config_to_string(cfg)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace sagin
