#include "udn/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace udn {

const char* to_string(Method m) {
  switch (m) {
    case Method::Madqn: return "madqn";
    case Method::Tabular: return "tabular";
    case Method::MaxRsrp: return "max_rsrp";
    case Method::Random: return "random";
    case Method::BruteForce: return "brute_force";
  }
  return "unknown";
}

Method method_from_string(const std::string& s) {
  for (Method m : {Method::Madqn, Method::Tabular, Method::MaxRsrp, Method::Random,
                   Method::BruteForce})
    if (s == to_string(m)) return m;
  throw std::invalid_argument("unknown method '" + s + "'");
}

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) out.push_back(trim(item));
  return out;
}

double parse_double(const std::string& s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw std::invalid_argument("expected a number, got '" + s + "'");
  return v;
}

template <typename Int>
Int parse_int(const std::string& s) {
  Int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw std::invalid_argument("expected an integer, got '" + s + "'");
  return v;
}

bool parse_bool(const std::string& s) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw std::invalid_argument("expected true/false, got '" + s + "'");
}

std::string join_ints(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out;
}

std::vector<int> parse_ints(const std::string& s) {
  std::vector<int> out;
  for (const auto& p : split(s, ',')) out.push_back(parse_int<int>(p));
  if (out.empty()) throw std::invalid_argument("expected a comma-separated list");
  return out;
}

ConfigField dbl(std::string name, std::string help, double ExperimentConfig::*member) {
  return {std::move(name), std::move(help),
          [member](const ExperimentConfig& c) { return format_double(c.*member); },
          [member](ExperimentConfig& c, const std::string& v) { c.*member = parse_double(v); }};
}

ConfigField integer(std::string name, std::string help, int ExperimentConfig::*member) {
  return {std::move(name), std::move(help),
          [member](const ExperimentConfig& c) { return std::to_string(c.*member); },
          [member](ExperimentConfig& c, const std::string& v) { c.*member = parse_int<int>(v); }};
}

template <typename Sub, typename T>
ConfigField nested(std::string name, std::string help, Sub ExperimentConfig::*outer, T Sub::*inner) {
  ConfigField f{std::move(name), std::move(help), nullptr, nullptr};
  if constexpr (std::is_same_v<T, double>) {
    f.get = [=](const ExperimentConfig& c) { return format_double(c.*outer.*inner); };
    f.set = [=](ExperimentConfig& c, const std::string& v) { c.*outer.*inner = parse_double(v); };
  } else if constexpr (std::is_same_v<T, bool>) {
    f.get = [=](const ExperimentConfig& c) { return std::string(c.*outer.*inner ? "true" : "false"); };
    f.set = [=](ExperimentConfig& c, const std::string& v) { c.*outer.*inner = parse_bool(v); };
  } else if constexpr (std::is_same_v<T, std::uint64_t>) {
    f.get = [=](const ExperimentConfig& c) { return std::to_string(c.*outer.*inner); };
    f.set = [=](ExperimentConfig& c, const std::string& v) {
      c.*outer.*inner = parse_int<std::uint64_t>(v);
    };
  } else {
    f.get = [=](const ExperimentConfig& c) { return std::to_string(c.*outer.*inner); };
    f.set = [=](ExperimentConfig& c, const std::string& v) { c.*outer.*inner = parse_int<int>(v); };
  }
  return f;
}

std::vector<ConfigField> build_fields() {
  using C = ExperimentConfig;
  std::vector<ConfigField> f;
  f.push_back(dbl("carrier_ghz", "carrier frequency label (GHz)", &C::carrier_ghz));
  f.push_back(integer("subcarriers", "number of subcarriers L", &C::subcarriers));
  f.push_back(dbl("subcarrier_bandwidth_hz", "subcarrier bandwidth W (Hz)", &C::subcarrier_bandwidth_hz));
  f.push_back(integer("aps", "number of APs M", &C::aps));
  f.push_back(integer("users", "number of users N", &C::users));
  f.push_back(dbl("area_m", "side of the square area (m)", &C::area_m));
  f.push_back(dbl("radius_m", "AP coverage radius r (m)", &C::radius_m));
  f.push_back(dbl("ap_power_dbm", "AP transmit power (dBm)", &C::ap_power_dbm));
  f.push_back(dbl("antenna_gain_dbi", "antenna gain (dBi)", &C::antenna_gain_dbi));
  f.push_back(integer("k", "max APs per user", &C::k));
  f.push_back(integer("f", "max users per AP", &C::f));
  f.push_back(dbl("noise_dbm_hz", "noise power density (dBm/Hz)", &C::noise_dbm_hz));
  f.push_back(dbl("qos_bps", "minimum QoS rate (bit/s)", &C::qos_bps));
  f.push_back(dbl("los_probability", "per-link LOS probability", &C::los_probability));
  f.push_back(nested("los_alpha", "LOS pathloss intercept (dB)", &C::los, &PathlossParams::alpha));
  f.push_back(nested("los_beta", "LOS pathloss exponent", &C::los, &PathlossParams::beta));
  f.push_back(nested("los_sigma", "LOS shadowing std-dev (dB)", &C::los, &PathlossParams::sigma));
  f.push_back(nested("nlos_alpha", "NLOS pathloss intercept (dB)", &C::nlos, &PathlossParams::alpha));
  f.push_back(nested("nlos_beta", "NLOS pathloss exponent", &C::nlos, &PathlossParams::beta));
  f.push_back(nested("nlos_sigma", "NLOS shadowing std-dev (dB)", &C::nlos, &PathlossParams::sigma));
  f.push_back({"interference", "co_subcarrier | all",
               [](const C& c) { return std::string(to_string(c.interference)); },
               [](C& c, const std::string& v) { c.interference = interference_mode_from_string(v); }});

  f.push_back(integer("drops", "number of random drops", &C::drops));
  f.push_back({"seed", "master seed", [](const C& c) { return std::to_string(c.seed); },
               [](C& c, const std::string& v) { c.seed = parse_int<std::uint64_t>(v); }});
  f.push_back({"user_sweep", "user counts for sweeps, e.g. 2,4,6",
               [](const C& c) { return join_ints(c.user_sweep); },
               [](C& c, const std::string& v) { c.user_sweep = parse_ints(v); }});
  f.push_back({"ap_sweep", "AP counts for sweeps, e.g. 5,10",
               [](const C& c) { return join_ints(c.ap_sweep); },
               [](C& c, const std::string& v) { c.ap_sweep = parse_ints(v); }});
  f.push_back({"kf_sweep", "(k,f) pairs for sweeps, e.g. 1:1,2:2",
               [](const C& c) {
                 std::string out;
                 for (std::size_t i = 0; i < c.kf_sweep.size(); ++i)
                   out += (i ? "," : "") + std::to_string(c.kf_sweep[i].k) + ":" +
                          std::to_string(c.kf_sweep[i].f);
                 return out;
               },
               [](C& c, const std::string& v) {
                 std::vector<KF> out;
                 for (const auto& pair : split(v, ',')) {
                   const auto parts = split(pair, ':');
                   if (parts.size() != 2) throw std::invalid_argument("expected k:f, got '" + pair + "'");
                   out.push_back({parse_int<int>(parts[0]), parse_int<int>(parts[1])});
                 }
                 if (out.empty()) throw std::invalid_argument("expected at least one k:f pair");
                 c.kf_sweep = out;
               }});
  f.push_back({"methods", "madqn,tabular,max_rsrp,random,brute_force",
               [](const C& c) {
                 std::string out;
                 for (std::size_t i = 0; i < c.methods.size(); ++i)
                   out += std::string(i ? "," : "") + to_string(c.methods[i]);
                 return out;
               },
               [](C& c, const std::string& v) {
                 std::vector<Method> out;
                 for (const auto& name : split(v, ',')) out.push_back(method_from_string(name));
                 if (out.empty()) throw std::invalid_argument("expected at least one method");
                 c.methods = out;
               }});
  f.push_back(integer("jobs", "worker threads", &C::jobs));
  f.push_back(dbl("oracle_limit", "brute-force search space limit", &C::oracle_limit));

  f.push_back(nested("episodes", "training episodes", &C::train, &TrainConfig::episodes));
  f.push_back(nested("steps", "steps per episode", &C::train, &TrainConfig::steps_per_episode));
  f.push_back(nested("learning_rate", "RMSProp learning rate", &C::train, &TrainConfig::learning_rate));
  f.push_back(nested("gamma", "discount factor", &C::train, &TrainConfig::gamma));
  f.push_back(nested("epsilon_start", "initial exploration rate", &C::train, &TrainConfig::epsilon_start));
  f.push_back(nested("epsilon_end", "final exploration rate", &C::train, &TrainConfig::epsilon_end));
  f.push_back(nested("decay_epsilon", "decay exploration over episodes", &C::train, &TrainConfig::decay_epsilon));
  f.push_back({"epsilon_schedule", "linear | exponential",
               [](const C& c) { return std::string(to_string(c.train.epsilon_schedule)); },
               [](C& c, const std::string& v) { c.train.epsilon_schedule = epsilon_schedule_from_string(v); }});
  f.push_back(nested("target_sync", "target network sync period (steps)", &C::train, &TrainConfig::target_sync_steps));
  f.push_back(nested("minibatch", "replay minibatch size", &C::train, &TrainConfig::minibatch));
  f.push_back(nested("replay_capacity", "replay memory capacity", &C::train, &TrainConfig::replay_capacity));
  f.push_back(nested("rms_decay", "RMSProp decay", &C::train, &TrainConfig::rms_decay));
  f.push_back(nested("rms_delta", "RMSProp stabilizer", &C::train, &TrainConfig::rms_delta));
  f.push_back({"hidden", "hidden layer widths, e.g. 100,200,50",
               [](const C& c) { return join_ints(c.train.hidden); },
               [](C& c, const std::string& v) { c.train.hidden = parse_ints(v); }});
  f.push_back(nested("reward_scale", "learner reward scale (per bit/s)", &C::train, &TrainConfig::reward_scale));
  f.push_back(nested("throughput_window", "final steps averaged for throughput", &C::train, &TrainConfig::throughput_window));

  f.push_back(nested("tabular_episodes", "tabular training episodes", &C::tabular, &TabularConfig::episodes));
  f.push_back(nested("tabular_steps", "tabular steps per episode", &C::tabular, &TabularConfig::steps_per_episode));
  f.push_back(nested("tabular_alpha", "tabular learning rate", &C::tabular, &TabularConfig::alpha));
  f.push_back(nested("tabular_epsilon_start", "tabular initial exploration", &C::tabular, &TabularConfig::epsilon_start));
  f.push_back(nested("tabular_epsilon_end", "tabular final exploration", &C::tabular, &TabularConfig::epsilon_end));
  return f;
}

}  // namespace

const std::vector<ConfigField>& config_fields() {
  static const std::vector<ConfigField> fields = build_fields();
  return fields;
}

void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  for (const auto& field : config_fields()) {
    if (field.name != key) continue;
    try {
      field.set(cfg, value);
    } catch (const std::exception& e) {
      throw ConfigError(key, e.what());
    }
    return;
  }
  throw ConfigError(key, "unknown configuration key");
}

ExperimentConfig parse_config(const std::string& text, ExperimentConfig base) {
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("", "line " + std::to_string(lineno) + ": expected key=value");
    set_config_value(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return base;
}

ExperimentConfig load_config(const std::string& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

std::string format_config(const ExperimentConfig& cfg) {
  std::string out;
  for (const auto& field : config_fields()) out += field.name + "=" + field.get(cfg) + "\n";
  return out;
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
  for (const auto& field : config_fields())
    if (field.get(a) != field.get(b)) return false;
  return true;
}

void ExperimentConfig::validate() const {
  auto require = [](bool ok, const char* field, const char* what) {
    if (!ok) throw ConfigError(field, what);
  };
  require(subcarriers >= 1, "subcarriers", "must be >= 1");
  require(subcarrier_bandwidth_hz > 0.0, "subcarrier_bandwidth_hz", "must be > 0");
  require(aps >= 1, "aps", "must be >= 1");
  require(users >= 1 && users <= 64, "users", "must lie in [1, 64]");
  require(area_m > 0.0, "area_m", "must be > 0");
  require(radius_m > 0.0, "radius_m", "must be > 0");
  require(k >= 1, "k", "must be >= 1");
  require(f >= 1, "f", "must be >= 1");
  require(qos_bps >= 0.0, "qos_bps", "must be >= 0");
  require(los_probability >= 0.0 && los_probability <= 1.0, "los_probability", "must lie in [0, 1]");
  require(los.beta > 0.0, "los_beta", "must be > 0");
  require(nlos.beta > 0.0, "nlos_beta", "must be > 0");
  require(los.sigma >= 0.0, "los_sigma", "must be >= 0");
  require(nlos.sigma >= 0.0, "nlos_sigma", "must be >= 0");
  require(drops >= 1, "drops", "must be >= 1");
  require(jobs >= 1, "jobs", "must be >= 1");
  for (int n : user_sweep) require(n >= 1 && n <= 64, "user_sweep", "entries must lie in [1, 64]");
  for (int m : ap_sweep) require(m >= 1, "ap_sweep", "entries must be >= 1");
  for (const auto& kf : kf_sweep) require(kf.k >= 1 && kf.f >= 1, "kf_sweep", "k and f must be >= 1");
  require(!methods.empty(), "methods", "must not be empty");
  try {
    train.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("train", e.what());
  }
  require(tabular.episodes >= 1, "tabular_episodes", "must be >= 1");
  require(tabular.steps_per_episode >= 1, "tabular_steps", "must be >= 1");
  require(tabular.alpha > 0.0 && tabular.alpha <= 1.0, "tabular_alpha", "must lie in (0, 1]");
}

EnvConfig ExperimentConfig::env_config(int k_max, int f_max) const {
  EnvConfig e;
  e.radio.ap_power_w = dbm_to_watts(ap_power_dbm);
  e.radio.noise_w = noise_power(noise_dbm_hz, subcarrier_bandwidth_hz);
  e.radio.bandwidth_hz = subcarrier_bandwidth_hz;
  e.radio.mode = interference;
  e.num_subcarriers = subcarriers;
  e.k_max = k_max;
  e.f_max = f_max;
  e.qos_threshold_bps = qos_bps;
  return e;
}

DropParams ExperimentConfig::drop_params(int num_users, int num_aps) const {
  DropParams d;
  d.num_users = num_users;
  d.num_aps = num_aps;
  d.area_side_m = area_m;
  d.coverage_radius_m = radius_m;
  return d;
}

ChannelParams ExperimentConfig::channel_params() const {
  ChannelParams c;
  c.los = los;
  c.nlos = nlos;
  c.los_probability = los_probability;
  c.antenna_gain_dbi = antenna_gain_dbi;
  return c;
}

void ExperimentConfig::apply_fast_profile() {
  drops = 10;
  train.episodes = 100;
  train.steps_per_episode = 100;
}

}  // namespace udn
