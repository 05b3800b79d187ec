#include "udn/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "udn/baselines.hpp"

namespace udn {

std::vector<double> normalize_trace(std::span<const double> rewards) {
  if (rewards.empty()) throw std::invalid_argument("cannot normalize an empty trace");
  const double peak = *std::max_element(rewards.begin(), rewards.end());
  const bool all_zero = std::all_of(rewards.begin(), rewards.end(), [](double r) { return r == 0.0; });
  std::vector<double> out(rewards.size(), 0.0);
  if (all_zero) return out;
  if (!(peak > 0.0)) throw std::invalid_argument("trace maximum must be > 0");
  for (std::size_t i = 0; i < rewards.size(); ++i) out[i] = rewards[i] / peak;
  return out;
}

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t mix(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0;
  for (auto p : parts) h = splitmix(h ^ splitmix(p));
  return h;
}

}  // namespace

std::uint64_t topology_seed(std::uint64_t master, int drop, int users, int aps) {
  return mix({master, 0x746f706fULL, static_cast<std::uint64_t>(drop),
              static_cast<std::uint64_t>(users), static_cast<std::uint64_t>(aps)});
}

std::uint64_t policy_seed(std::uint64_t master, int drop, Method method, const Scenario& s) {
  return mix({master, 0x706f6c69ULL, static_cast<std::uint64_t>(drop),
              static_cast<std::uint64_t>(method), static_cast<std::uint64_t>(s.users),
              static_cast<std::uint64_t>(s.aps), static_cast<std::uint64_t>(s.k),
              static_cast<std::uint64_t>(s.f)});
}

DropOutcome run_drop(const ExperimentConfig& cfg, const Scenario& sc, int drop, Method method) {
  Topology topo = generate_topology(cfg.drop_params(sc.users, sc.aps), cfg.channel_params(),
                                    topology_seed(cfg.seed, drop, sc.users, sc.aps));
  const Environment env(std::move(topo), cfg.env_config(sc.k, sc.f));
  const std::uint64_t seed = policy_seed(cfg.seed, drop, method, sc);

  DropOutcome out;
  switch (method) {
    case Method::Madqn: {
      TrainConfig tc = cfg.train;
      tc.seed = seed;
      TrainResult r = train_madqn(env, tc);
      out.total_bps = r.window_utility_bps;
      out.user_rate_bps = std::move(r.window_user_rate_bps);
      out.episode_reward_bps = std::move(r.episode_reward_bps);
      out.networks = std::move(r.networks);
      break;
    }
    case Method::Tabular: {
      TabularConfig tc = cfg.tabular;
      tc.seed = seed;
      tc.gamma = cfg.train.gamma;
      TabularResult r = train_tabular(env, tc);
      GreedyRollout roll = greedy_rollout(env, r.tables, tc.steps_per_episode);
      const int steps = static_cast<int>(roll.step_utility_bps.size());
      const int begin = steps - std::min(steps, cfg.train.throughput_window);
      out.user_rate_bps.assign(sc.users, 0.0);
      for (int t = begin; t < steps; ++t) {
        out.total_bps += roll.step_utility_bps[t];
        for (int i = 0; i < sc.users; ++i) out.user_rate_bps[i] += roll.step_user_rate_bps[t][i];
      }
      out.total_bps /= steps - begin;
      for (auto& v : out.user_rate_bps) v /= steps - begin;
      out.episode_reward_bps = std::move(r.episode_reward_bps);
      break;
    }
    case Method::MaxRsrp:
    case Method::Random: {
      std::mt19937_64 rng(seed);
      PolicyVerdict v = method == Method::MaxRsrp ? max_rsrp_policy(env, rng) : random_policy(env, rng);
      out.total_bps = v.utility_bps;
      out.user_rate_bps = std::move(v.user_rate_bps);
      break;
    }
    case Method::BruteForce: {
      PolicyVerdict v = brute_force_optimum(env, cfg.oracle_limit);
      out.total_bps = v.utility_bps;
      out.user_rate_bps = std::move(v.user_rate_bps);
      break;
    }
  }

  double sum = 0.0;
  for (double r : out.user_rate_bps) sum += r;
  if (std::abs(sum - out.total_bps) > 1e-9 * std::max(1.0, std::abs(out.total_bps)))
    throw std::runtime_error("throughput accounting mismatch: total " + format_double(out.total_bps) +
                             " vs per-user sum " + format_double(sum));
  return out;
}

std::vector<Scenario> sweep_scenarios(const ExperimentConfig& cfg) {
  std::vector<Scenario> out;
  for (int m : cfg.ap_sweep)
    for (const KF& kf : cfg.kf_sweep)
      for (int n : cfg.user_sweep) out.push_back({n, m, kf.k, kf.f});
  return out;
}

Scenario single_scenario(const ExperimentConfig& cfg) { return {cfg.users, cfg.aps, cfg.k, cfg.f}; }

MetricsRecord run_experiment(const ExperimentConfig& cfg, std::span<const Scenario> scenarios,
                             std::span<const Method> methods, bool with_trace,
                             std::vector<QNetwork>* first_networks) {
  cfg.validate();
  struct Task {
    std::size_t scenario;
    int drop;
    Method method;
  };
  std::vector<Task> tasks;
  for (std::size_t s = 0; s < scenarios.size(); ++s)
    for (int d = 0; d < cfg.drops; ++d)
      for (Method m : methods) tasks.push_back({s, d, m});

  std::vector<std::optional<DropOutcome>> results(tasks.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (std::size_t t = next++; t < tasks.size(); t = next++) {
      const Task& task = tasks[t];
      try {
        results[t] = run_drop(cfg, scenarios[task.scenario], task.drop, task.method);
      } catch (const SearchSpaceTooLarge&) {
        // brute_force is only reported where feasible.
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = tasks.size();
      }
    }
  };
  const int jobs = std::max(1, std::min<int>(cfg.jobs, static_cast<int>(tasks.size())));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  MetricsRecord record;
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    if (!results[t]) continue;
    const Scenario& sc = scenarios[tasks[t].scenario];
    record.throughput.push_back({tasks[t].drop, tasks[t].method, sc, results[t]->total_bps,
                                 results[t]->total_bps / sc.users});
  }

  for (const Scenario& sc : scenarios) {
    for (Method m : methods) {
      SummaryRow row{m, sc, 0.0, 0.0, 0};
      for (const auto& r : record.throughput) {
        if (r.method != m || !(r.scenario == sc)) continue;
        row.mean_total_bps += r.total_bps;
        row.mean_avg_user_bps += r.avg_user_bps;
        ++row.drops;
      }
      if (row.drops == 0) continue;
      row.mean_total_bps /= row.drops;
      row.mean_avg_user_bps /= row.drops;
      record.summary.push_back(row);
    }
  }

  if (with_trace && !scenarios.empty()) {
    std::vector<double> mean;
    int count = 0;
    for (std::size_t t = 0; t < tasks.size(); ++t) {
      if (tasks[t].scenario != 0 || tasks[t].method != Method::Madqn || !results[t]) continue;
      const auto& ep = results[t]->episode_reward_bps;
      if (mean.empty()) mean.assign(ep.size(), 0.0);
      for (std::size_t e = 0; e < ep.size(); ++e) mean[e] += ep[e];
      ++count;
    }
    if (count > 0) {
      for (auto& v : mean) v /= count;
      const auto norm = normalize_trace(mean);
      for (std::size_t e = 0; e < mean.size(); ++e)
        record.trace.push_back({static_cast<int>(e) + 1, mean[e], norm[e]});
    }
  }

  if (first_networks) {
    for (std::size_t t = 0; t < tasks.size(); ++t) {
      if (results[t] && tasks[t].method == Method::Madqn) {
        *first_networks = std::move(results[t]->networks);
        break;
      }
    }
  }
  return record;
}

namespace {

std::ofstream open_csv(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  return os;
}

}  // namespace

void write_trace_csv(const std::filesystem::path& path, std::span<const TraceRow> rows) {
  auto os = open_csv(path);
  os << "episode,reward,normalized_reward\n";
  for (const auto& r : rows)
    os << r.episode << ',' << format_double(r.reward_bps) << ',' << format_double(r.normalized) << '\n';
}

void write_throughput_csv(const std::filesystem::path& path, std::span<const ThroughputRow> rows) {
  auto os = open_csv(path);
  os << "drop,method,N,M,k,f,total_bps,avg_user_bps\n";
  for (const auto& r : rows)
    os << r.drop << ',' << to_string(r.method) << ',' << r.scenario.users << ',' << r.scenario.aps
       << ',' << r.scenario.k << ',' << r.scenario.f << ',' << format_double(r.total_bps) << ','
       << format_double(r.avg_user_bps) << '\n';
}

void write_summary_csv(const std::filesystem::path& path, std::span<const SummaryRow> rows) {
  auto os = open_csv(path);
  os << "method,N,M,k,f,mean_total_bps,mean_avg_user_bps\n";
  for (const auto& r : rows)
    os << to_string(r.method) << ',' << r.scenario.users << ',' << r.scenario.aps << ','
       << r.scenario.k << ',' << r.scenario.f << ',' << format_double(r.mean_total_bps) << ','
       << format_double(r.mean_avg_user_bps) << '\n';
}

void write_outputs(const std::filesystem::path& dir, const MetricsRecord& record) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
  if (!record.trace.empty()) write_trace_csv(dir / "trace.csv", record.trace);
  write_throughput_csv(dir / "throughput.csv", record.throughput);
  write_summary_csv(dir / "summary.csv", record.summary);
}

std::vector<ThroughputRow> read_throughput_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  std::getline(in, line);
  if (line != "drop,method,N,M,k,f,total_bps,avg_user_bps")
    throw std::runtime_error("unexpected throughput.csv header");
  std::vector<ThroughputRow> rows;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() != 8) throw std::runtime_error("malformed throughput.csv row: " + line);
    ThroughputRow r;
    r.drop = std::stoi(cells[0]);
    r.method = method_from_string(cells[1]);
    r.scenario = {std::stoi(cells[2]), std::stoi(cells[3]), std::stoi(cells[4]), std::stoi(cells[5])};
    r.total_bps = std::strtod(cells[6].c_str(), nullptr);
    r.avg_user_bps = std::strtod(cells[7].c_str(), nullptr);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace udn
