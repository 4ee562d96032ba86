#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "congestion/harness.hpp"
#include "congestion/road_network.hpp"
#include "congestion/scenario_file.hpp"
#include "congestion/utility.hpp"

namespace py = pybind11;
using namespace congestion;

namespace {

AbstractGrouping grouping_of(const std::vector<std::vector<std::size_t>>& groups, std::size_t universe) {
  return AbstractGrouping(Partition(groups, universe));
}

const StripScenario& strip_of(const ExperimentConfig& c) {
  if (const auto* s = std::get_if<StripScenario>(&c.scenario)) return *s;
  throw std::invalid_argument("experiment '" + c.name + "' is not a strip scenario");
}

const NetworkScenario& network_of(const ExperimentConfig& c) {
  if (const auto* s = std::get_if<NetworkScenario>(&c.scenario)) return *s;
  throw std::invalid_argument("experiment '" + c.name + "' is not a network scenario");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Core of the congestion package";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::enum_<UtilityKind>(m, "UtilityKind").value("BPD", UtilityKind::Bpd).value("TLD", UtilityKind::Tld);

  py::class_<Resource>(m, "Resource")
      .def(py::init([](std::string id, double weight, int capacity) { return Resource{std::move(id), weight, capacity}; }),
           py::arg("id"), py::arg("weight") = 1.0, py::arg("capacity") = 1)
      .def_readwrite("id", &Resource::id)
      .def_readwrite("weight", &Resource::weight)
      .def_readwrite("capacity", &Resource::capacity)
      .def("__repr__", [](const Resource& r) {
        return "Resource('" + r.id + "', weight=" + std::to_string(r.weight) + ", capacity=" + std::to_string(r.capacity) + ")";
      });

  m.def("local_utility", py::overload_cast<UtilityKind, double, int, int>(&local_utility), py::arg("kind"),
        py::arg("weight"), py::arg("capacity"), py::arg("x"));
  m.def(
      "global_utility",
      [](UtilityKind kind, const std::vector<Resource>& resources, std::vector<int> counts) {
        return global_utility(resources, ConsumptionVector(std::move(counts)), kind);
      },
      py::arg("kind"), py::arg("resources"), py::arg("counts"));
  m.def("difference_reward", &difference_reward_resource, py::arg("kind"), py::arg("resource"), py::arg("x"));
  m.def(
      "abstract_reward",
      [](UtilityKind kind, const std::vector<std::vector<std::size_t>>& groups, const std::vector<Resource>& resources,
         std::vector<int> counts, std::size_t resource) {
        return abstract_reward(kind, grouping_of(groups, resources.size()), resources,
                               ConsumptionVector(std::move(counts)), resource);
      },
      py::arg("kind"), py::arg("groups"), py::arg("resources"), py::arg("counts"), py::arg("resource"));
  m.def(
      "abstract_reward_curve",
      [](UtilityKind kind, const std::vector<std::vector<std::size_t>>& groups, const std::vector<Resource>& resources,
         std::size_t group, int max_agents) {
        std::vector<std::pair<int, double>> out;
        for (const auto& p : abstract_reward_curve(kind, grouping_of(groups, resources.size()), resources, group, max_agents))
          out.emplace_back(p.agents, p.reward);
        return out;
      },
      py::arg("kind"), py::arg("groups"), py::arg("resources"), py::arg("group"), py::arg("max_agents"),
      "List of (agent count, reward) pairs.");

  py::class_<RoadNetwork>(m, "RoadNetwork")
      .def_static("bridge", py::overload_cast<int, double>(&RoadNetwork::bridge), py::arg("capacity"),
                  py::arg("weight") = 1.0)
      .def_static(
          "bridge_from",
          [](const std::vector<Resource>& segments) { return RoadNetwork::bridge(segments); }, py::arg("segments"),
          "Bridge from segments in the order AB, AC, BC, BD, CD.")
      .def_property_readonly("path_ids",
                             [](const RoadNetwork& n) {
                               std::vector<std::string> ids;
                               for (const auto& p : n.paths()) ids.push_back(p.id);
                               return ids;
                             })
      .def("segment_loads",
           [](const RoadNetwork& n, std::vector<int> counts) { return segment_loads(n, PathCounts(std::move(counts))).counts; })
      .def("global_utility",
           [](const RoadNetwork& n, UtilityKind kind, std::vector<int> counts) {
             return network_global_utility(n, kind, PathCounts(std::move(counts)));
           })
      .def("path_local_reward",
           [](const RoadNetwork& n, UtilityKind kind, std::vector<int> counts, std::size_t path) {
             return path_local_reward(n, kind, PathCounts(std::move(counts)), path);
           })
      .def("path_difference_reward",
           [](const RoadNetwork& n, UtilityKind kind, std::vector<int> counts, std::size_t path) {
             return path_difference_reward(n, kind, PathCounts(std::move(counts)), path);
           })
      .def("abstract_reward_path",
           [](const RoadNetwork& n, UtilityKind kind, const std::vector<std::vector<std::size_t>>& groups,
              std::vector<int> counts, std::size_t path) {
             return abstract_reward_path(n, kind, PathGrouping(Partition(groups, n.paths().size())),
                                         PathCounts(std::move(counts)), path);
           });

  py::class_<ExperimentConfig>(m, "Experiment")
      .def_readwrite("name", &ExperimentConfig::name)
      .def_readwrite("episodes", &ExperimentConfig::episodes)
      .def_readwrite("trials", &ExperimentConfig::trials)
      .def_readwrite("seed", &ExperimentConfig::base_seed)
      .def_readwrite("report_interval", &ExperimentConfig::report_interval)
      .def_readwrite("threads", &ExperimentConfig::threads)
      .def_property_readonly("environment",
                             [](const ExperimentConfig& c) {
                               return std::holds_alternative<StripScenario>(c.scenario) ? "strip" : "network";
                             })
      .def("to_yaml", &serialize_scenario);

  m.def("load_config", &load_scenario_file, py::arg("path"));
  m.def("parse_config", &parse_scenario, py::arg("text"), py::arg("source") = "<string>");

  py::class_<MetricsSeries>(m, "Metrics")
      .def_readonly("episodes", &MetricsSeries::episodes)
      .def_readonly("trials", &MetricsSeries::trials)
      .def_readonly("mean_g", &MetricsSeries::mean_g)
      .def_readonly("std_g", &MetricsSeries::std_g)
      .def_readonly("trial_g", &MetricsSeries::trial_g)
      .def_readonly("final_occupancy", &MetricsSeries::final_occupancy);

  m.def(
      "run_experiment",
      [](const ExperimentConfig& c) {
        py::gil_scoped_release release;
        return run_experiment(c);
      },
      py::arg("experiment"));

  py::class_<FinalPerformance>(m, "FinalPerformance")
      .def_readonly("per_trial", &FinalPerformance::per_trial)
      .def_readonly("mean", &FinalPerformance::mean)
      .def_readonly("std_dev", &FinalPerformance::std_dev)
      .def_readonly("std_error", &FinalPerformance::std_error);
  m.def("final_performance", &final_performance, py::arg("metrics"), py::arg("window"));

  py::class_<StripOptimum>(m, "StripOptimum")
      .def_property_readonly("best", [](const StripOptimum& o) { return o.best.counts; })
      .def_readonly("global_utility", &StripOptimum::global_utility)
      .def_readonly("multiset", &StripOptimum::multiset)
      .def_readonly("evaluated", &StripOptimum::evaluated);
  py::class_<NetworkOptimum>(m, "NetworkOptimum")
      .def_property_readonly("best", [](const NetworkOptimum& o) { return o.best.counts; })
      .def_property_readonly("ties",
                             [](const NetworkOptimum& o) {
                               std::vector<std::vector<int>> out;
                               for (const auto& t : o.ties) out.push_back(t.counts);
                               return out;
                             })
      .def_readonly("global_utility", &NetworkOptimum::global_utility)
      .def_readonly("evaluated", &NetworkOptimum::evaluated);

  m.def(
      "oracle_strip_optimum", [](const ExperimentConfig& c) { return oracle_strip_optimum(strip_of(c)); },
      py::arg("experiment"));
  m.def(
      "oracle_network_optimum", [](const ExperimentConfig& c) { return oracle_network_optimum(network_of(c)); },
      py::arg("experiment"));
}
