// Python bindings. Configs cross the boundary as {field: value} dicts using
// the same names as the flat key=value files.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <random>
#include <sstream>

#include "udn/baselines.hpp"
#include "udn/config.hpp"
#include "udn/experiment.hpp"

namespace py = pybind11;
using namespace udn;

namespace {

std::string as_text(const py::handle& v) {
  if (py::isinstance<py::bool_>(v)) return v.cast<bool>() ? "true" : "false";
  if (py::isinstance<py::float_>(v)) return format_double(v.cast<double>());
  if (py::isinstance<py::list>(v) || py::isinstance<py::tuple>(v)) {
    std::string out;
    for (const auto& item : v) {
      if (!out.empty()) out += ",";
      out += as_text(item);
    }
    return out;
  }
  return py::str(v).cast<std::string>();
}

ExperimentConfig make_config(const py::dict& overrides) {
  ExperimentConfig cfg;
  for (const auto& [key, value] : overrides) set_config_value(cfg, key.cast<std::string>(), as_text(value));
  cfg.validate();
  return cfg;
}

py::dict verdict(const PolicyVerdict& v) {
  py::dict d;
  d["state"] = v.state;
  d["user_rate_bps"] = v.user_rate_bps;
  d["utility_bps"] = v.utility_bps;
  return d;
}

Environment make_env(const Topology& t, int subcarriers, int k, int f, double qos_bps, InterferenceMode mode) {
  EnvConfig c;
  c.num_subcarriers = subcarriers;
  c.k_max = k;
  c.f_max = f;
  c.qos_threshold_bps = qos_bps;
  c.radio.mode = mode;
  return Environment(t, c);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "UDN simulator core";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<SearchSpaceTooLarge>(m, "SearchSpaceTooLarge", PyExc_RuntimeError);

  py::enum_<InterferenceMode>(m, "InterferenceMode")
      .value("CO_SUBCARRIER", InterferenceMode::CoSubcarrier)
      .value("ALL_APS", InterferenceMode::AllAps);
  py::enum_<ActionOutcome>(m, "ActionOutcome")
      .value("APPLIED", ActionOutcome::Applied)
      .value("REJECTED_OUT_OF_RANGE", ActionOutcome::RejectedOutOfRange)
      .value("REJECTED_AP_FULL", ActionOutcome::RejectedApFull);

  py::class_<Topology>(m, "Topology")
      .def_property_readonly("num_users", &Topology::num_users)
      .def_property_readonly("num_aps", &Topology::num_aps)
      .def_property_readonly("area_side", &Topology::area_side)
      .def_property_readonly("coverage_radius", &Topology::coverage_radius)
      .def_property_readonly("ap_positions",
                             [](const Topology& t) {
                               std::vector<std::pair<double, double>> out;
                               for (const auto& p : t.ap_positions()) out.push_back({p.x, p.y});
                               return out;
                             })
      .def_property_readonly("user_positions",
                             [](const Topology& t) {
                               std::vector<std::pair<double, double>> out;
                               for (const auto& p : t.user_positions()) out.push_back({p.x, p.y});
                               return out;
                             })
      .def("gain", &Topology::gain, py::arg("user"), py::arg("ap"))
      .def_property_readonly("gains",
                             [](const Topology& t) {
                               std::vector<std::vector<double>> g(t.num_users());
                               for (int i = 0; i < t.num_users(); ++i)
                                 for (int j = 0; j < t.num_aps(); ++j) g[i].push_back(t.gain(i, j));
                               return g;
                             })
      .def("candidate_aps", &Topology::candidate_aps, py::arg("user"))
      .def("candidate_users", &Topology::candidate_users, py::arg("ap"));

  m.def(
      "generate_topology",
      [](int users, int aps, std::uint64_t seed, const py::dict& overrides) {
        const ExperimentConfig c = make_config(overrides);
        return generate_topology(c.drop_params(users, aps), c.channel_params(), seed);
      },
      py::arg("users"), py::arg("aps"), py::arg("seed"), py::arg("config") = py::dict(),
      "One random drop. Geometry and channel settings come from the config dict.");

  py::class_<AssociationState>(m, "AssociationState")
      .def(py::init<int, int, int, int, int>(), py::arg("users"), py::arg("aps"), py::arg("subcarriers"),
           py::arg("k"), py::arg("f"))
      .def_property_readonly("num_users", &AssociationState::num_users)
      .def_property_readonly("num_aps", &AssociationState::num_aps)
      .def_property_readonly("num_subcarriers", &AssociationState::num_subcarriers)
      .def("associated", &AssociationState::associated)
      .def("allocated", &AssociationState::allocated)
      .def("set_associated", &AssociationState::set_associated)
      .def("set_allocated", &AssociationState::set_allocated)
      .def("serving_aps", &AssociationState::serving_aps)
      .def("subcarrier_of", &AssociationState::subcarrier_of)
      .def("load", &AssociationState::load)
      .def("__eq__", [](const AssociationState& a, const AssociationState& b) { return a == b; });

  py::class_<Violation>(m, "Violation")
      .def_readonly("user", &Violation::user)
      .def_readonly("ap", &Violation::ap)
      .def_readonly("subcarrier", &Violation::subcarrier)
      .def("__str__", &Violation::describe)
      .def("__repr__", [](const Violation& v) { return "<Violation " + v.describe() + ">"; });

  m.def("validate", &validate, py::arg("state"), py::arg("topology"));
  m.def(
      "apply_action",
      [](AssociationState& s, int user, int ap, int subcarrier, const Topology& t) {
        return apply_action(s, user, UserAction{ap, subcarrier}, t);
      },
      py::arg("state"), py::arg("user"), py::arg("ap"), py::arg("subcarrier"), py::arg("topology"));
  m.def(
      "user_rates",
      [](const Topology& t, const AssociationState& s, InterferenceMode mode) {
        RadioParams r;
        r.mode = mode;
        return user_rates(t, s, r);
      },
      py::arg("topology"), py::arg("state"), py::arg("mode") = InterferenceMode::CoSubcarrier);

  py::class_<Environment>(m, "Environment")
      .def(py::init(&make_env), py::arg("topology"), py::arg("subcarriers") = 4, py::arg("k") = 4,
           py::arg("f") = 4, py::arg("qos_bps") = 2e6, py::arg("mode") = InterferenceMode::CoSubcarrier)
      .def_property_readonly("num_agents", &Environment::num_agents)
      .def_property_readonly("num_actions", &Environment::num_actions)
      .def("reset", [](const Environment& e) { return e.reset().association; })
      .def(
          "step",
          [](const Environment& e, const AssociationState& s, const std::vector<int>& flat_actions) {
            EnvState st = e.reset();
            st.association = s;
            std::vector<UserAction> joint;
            for (int a : flat_actions) joint.push_back(UserAction::from_flat(a, e.config().num_subcarriers));
            StepResult r = e.step(st, joint);
            py::dict d;
            d["state"] = r.next_state.association;
            d["qos_bits"] = std::vector<int>(r.next_state.qos_bits.begin(), r.next_state.qos_bits.end());
            d["reward"] = r.reward;
            d["user_rates"] = r.user_rates;
            d["outcomes"] = r.outcomes;
            return d;
          },
          py::arg("state"), py::arg("flat_actions"),
          "Applies one flat action (ap * L + subcarrier) per user in index order.");

  m.def(
      "discounted_return",
      [](const std::vector<double>& rewards, double gamma) { return discounted_return(rewards, gamma); },
      py::arg("rewards"), py::arg("gamma"));

  m.def(
      "max_rsrp_policy",
      [](const Environment& e, std::uint64_t seed) {
        std::mt19937_64 rng(seed);
        return verdict(max_rsrp_policy(e, rng));
      },
      py::arg("env"), py::arg("seed") = 1);
  m.def(
      "random_policy",
      [](const Environment& e, std::uint64_t seed) {
        std::mt19937_64 rng(seed);
        return verdict(random_policy(e, rng));
      },
      py::arg("env"), py::arg("seed") = 1);
  m.def(
      "brute_force_optimum",
      [](const Environment& e, double limit) { return verdict(brute_force_optimum(e, limit)); },
      py::arg("env"), py::arg("limit") = kDefaultSearchLimit);

  m.def("default_config", [] {
    py::dict d;
    const ExperimentConfig c;
    for (const auto& f : config_fields()) d[py::str(f.name)] = f.get(c);
    return d;
  });
  m.def("config_fields", [] {
    py::dict d;
    for (const auto& f : config_fields()) d[py::str(f.name)] = f.help;
    return d;
  });

  m.def(
      "run_drop",
      [](const py::dict& config, int drop, const std::string& method) {
        const ExperimentConfig c = make_config(config);
        DropOutcome o;
        {
          py::gil_scoped_release release;
          o = run_drop(c, single_scenario(c), drop, method_from_string(method));
        }
        py::dict d;
        d["total_bps"] = o.total_bps;
        d["user_rate_bps"] = o.user_rate_bps;
        d["episode_reward_bps"] = o.episode_reward_bps;
        return d;
      },
      py::arg("config") = py::dict(), py::arg("drop") = 0, py::arg("method") = "madqn",
      "One method on one drop of the single scenario (users, aps, k, f) in the config.");

  m.def(
      "run_experiment",
      [](const py::dict& config, bool sweep, const std::string& out_dir) {
        const ExperimentConfig c = make_config(config);
        const std::vector<Scenario> scs = sweep ? sweep_scenarios(c) : std::vector<Scenario>{single_scenario(c)};
        MetricsRecord rec;
        {
          py::gil_scoped_release release;
          rec = run_experiment(c, scs, c.methods, true);
          if (!out_dir.empty()) write_outputs(out_dir, rec);
        }
        py::list trace, rows, summary;
        for (const auto& r : rec.trace) trace.append(py::make_tuple(r.episode, r.reward_bps, r.normalized));
        for (const auto& r : rec.throughput) {
          py::dict d;
          d["drop"] = r.drop;
          d["method"] = to_string(r.method);
          d["users"] = r.scenario.users;
          d["aps"] = r.scenario.aps;
          d["k"] = r.scenario.k;
          d["f"] = r.scenario.f;
          d["total_bps"] = r.total_bps;
          d["avg_user_bps"] = r.avg_user_bps;
          rows.append(d);
        }
        for (const auto& r : rec.summary) {
          py::dict d;
          d["method"] = to_string(r.method);
          d["users"] = r.scenario.users;
          d["aps"] = r.scenario.aps;
          d["k"] = r.scenario.k;
          d["f"] = r.scenario.f;
          d["mean_total_bps"] = r.mean_total_bps;
          d["mean_avg_user_bps"] = r.mean_avg_user_bps;
          d["drops"] = r.drops;
          summary.append(d);
        }
        py::dict out;
        out["trace"] = trace;
        out["throughput"] = rows;
        out["summary"] = summary;
        return out;
      },
      py::arg("config") = py::dict(), py::arg("sweep") = false, py::arg("out_dir") = "",
      "Runs the configured methods over all drops and optionally writes the CSVs.");
}
