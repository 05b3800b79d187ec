// Multi-drop orchestration, aggregation and CSV output.
#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "udn/config.hpp"

namespace udn {

struct Scenario {
  int users = 10;
  int aps = 10;
  int k = 4;
  int f = 4;
  friend bool operator==(const Scenario&, const Scenario&) = default;
};

struct ThroughputRow {
  int drop = 0;
  Method method = Method::Madqn;
  Scenario scenario;
  double total_bps = 0.0;
  double avg_user_bps = 0.0;
};

struct SummaryRow {
  Method method = Method::Madqn;
  Scenario scenario;
  double mean_total_bps = 0.0;
  double mean_avg_user_bps = 0.0;
  int drops = 0;
};

struct TraceRow {
  int episode = 0;  // 1-based
  double reward_bps = 0.0;
  double normalized = 0.0;
};

struct MetricsRecord {
  std::vector<TraceRow> trace;
  std::vector<ThroughputRow> throughput;
  std::vector<SummaryRow> summary;
};

/// Divides every entry by the trace maximum; an all-zero trace stays zero.
/// Throws std::invalid_argument on an empty trace or a non-positive maximum.
std::vector<double> normalize_trace(std::span<const double> rewards);

/// Seed for drop geometry; independent of the method being evaluated.
std::uint64_t topology_seed(std::uint64_t master, int drop, int users, int aps);
/// Seed for a policy's own randomness (exploration, init, subcarrier draws).
std::uint64_t policy_seed(std::uint64_t master, int drop, Method method, const Scenario& s);

struct DropOutcome {
  double total_bps = 0.0;
  std::vector<double> user_rate_bps;
  /// Per-episode mean utility for learning methods, empty otherwise.
  std::vector<double> episode_reward_bps;
  /// Trained networks (madqn only).
  std::vector<QNetwork> networks;
};

/// Runs one method on one drop of one scenario. Throws SearchSpaceTooLarge
/// for brute_force on oversized instances.
DropOutcome run_drop(const ExperimentConfig& cfg, const Scenario& scenario, int drop, Method method);

/// Every (scenario, drop, method) combination, executed on `cfg.jobs`
/// workers. Rows come back ordered by scenario, then drop, then method.
/// brute_force rows are omitted where the instance exceeds the oracle limit.
/// If `with_trace`, the madqn episode rewards of the first scenario are
/// averaged over drops into `trace`.
MetricsRecord run_experiment(const ExperimentConfig& cfg, std::span<const Scenario> scenarios,
                             std::span<const Method> methods, bool with_trace = false,
                             std::vector<QNetwork>* first_networks = nullptr);

/// users x aps x (k, f) grid from the sweep fields.
std::vector<Scenario> sweep_scenarios(const ExperimentConfig& cfg);
Scenario single_scenario(const ExperimentConfig& cfg);

void write_trace_csv(const std::filesystem::path& path, std::span<const TraceRow> rows);
void write_throughput_csv(const std::filesystem::path& path, std::span<const ThroughputRow> rows);
void write_summary_csv(const std::filesystem::path& path, std::span<const SummaryRow> rows);
/// Writes trace.csv (when present), throughput.csv and summary.csv into `dir`.
void write_outputs(const std::filesystem::path& dir, const MetricsRecord& record);

std::vector<ThroughputRow> read_throughput_csv(const std::filesystem::path& path);

}  // namespace udn
