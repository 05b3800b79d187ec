// Experiment configuration and its flat key=value text form.
#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "udn/dqn.hpp"
#include "udn/env.hpp"
#include "udn/geometry.hpp"
#include "udn/tabular.hpp"

namespace udn {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field.empty() ? message : field + ": " + message),
        field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct KF {
  int k = 4;
  int f = 4;
  friend bool operator==(const KF&, const KF&) = default;
};

enum class Method { Madqn, Tabular, MaxRsrp, Random, BruteForce };

const char* to_string(Method m);
Method method_from_string(const std::string& s);

struct ExperimentConfig {
  // Radio and deployment.
  double carrier_ghz = 28.0;  // label only; the pathloss constants already embed it
  int subcarriers = 4;
  double subcarrier_bandwidth_hz = 180e3;
  int aps = 10;
  int users = 10;
  double area_m = 50.0;
  double radius_m = 15.0;
  double ap_power_dbm = 23.0;
  double antenna_gain_dbi = 5.0;
  int k = 4;
  int f = 4;
  double noise_dbm_hz = -174.0;
  double qos_bps = 2e6;
  double los_probability = 0.5;
  PathlossParams los = kLosPathloss;
  PathlossParams nlos = kNlosPathloss;
  InterferenceMode interference = InterferenceMode::CoSubcarrier;

  // Orchestration.
  int drops = 50;
  std::uint64_t seed = 1;
  std::vector<int> user_sweep = {2, 4, 6, 8, 10};
  std::vector<int> ap_sweep = {5, 10};
  std::vector<KF> kf_sweep = {{1, 1}, {2, 2}, {4, 4}};
  std::vector<Method> methods = {Method::Madqn, Method::MaxRsrp};
  int jobs = 1;
  double oracle_limit = 1e7;

  TrainConfig train;
  TabularConfig tabular;

  /// Throws ConfigError naming the first offending field.
  void validate() const;

  EnvConfig env_config(int k_max, int f_max) const;
  DropParams drop_params(int num_users, int num_aps) const;
  ChannelParams channel_params() const;

  /// Reduced profile: 10 drops, 100 episodes of 100 steps.
  void apply_fast_profile();

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&);
};

/// One named, string-typed view of a config field.
struct ConfigField {
  std::string name;
  std::string help;
  std::function<std::string(const ExperimentConfig&)> get;
  std::function<void(ExperimentConfig&, const std::string&)> set;
};

const std::vector<ConfigField>& config_fields();

/// Sets one field from its text value; throws ConfigError for unknown keys or
/// malformed values.
void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// Flat key=value text: one pair per line, '#' comments, blank lines ignored.
ExperimentConfig parse_config(const std::string& text, ExperimentConfig base = {});
ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {});
std::string format_config(const ExperimentConfig& cfg);

/// Shortest text that parses back to exactly `v`.
std::string format_double(double v);

}  // namespace udn
