#include "congestion/scenario_file.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace congestion {

ConfigError::ConfigError(std::string source, int line, std::string field, const std::string& message)
    : std::runtime_error(source + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " +
                         (field.empty() ? std::string() : "'" + field + "': ") + message),
      source_(std::move(source)), line_(line), field_(std::move(field)) {}

namespace {

using Groups = std::vector<std::vector<std::string>>;

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node& at, const std::string& field, const std::string& message) const {
    const int line = at.IsDefined() && at.Mark().line >= 0 ? at.Mark().line + 1 : 0;
    throw ConfigError(source_, line, field, message);
  }

  void expect_map(const YAML::Node& node, const std::string& field) const {
    if (!node.IsMap()) fail(node, field, "expected a mapping");
  }

  void only_keys(const YAML::Node& map, const std::string& prefix, std::initializer_list<std::string_view> keys) const {
    for (const auto& kv : map) {
      const auto key = kv.first.as<std::string>();
      bool known = false;
      for (auto k : keys) known = known || key == k;
      if (!known) fail(kv.first, join(prefix, key), "unknown field");
    }
  }

  YAML::Node require(const YAML::Node& map, const std::string& prefix, const std::string& key) const {
    auto node = map[key];
    if (!node) fail(map, join(prefix, key), "missing required field");
    return node;
  }

  std::string text(const YAML::Node& node, const std::string& field) const {
    if (!node.IsScalar()) fail(node, field, "expected a scalar");
    return node.Scalar();
  }

  long long integer(const YAML::Node& node, const std::string& field) const {
    const auto s = text(node, field);
    try {
      std::size_t used = 0;
      const long long v = std::stoll(s, &used);
      if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    fail(node, field, "expected an integer, got '" + s + "'");
  }

  int small_int(const YAML::Node& node, const std::string& field) const {
    const auto v = integer(node, field);
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) fail(node, field, "out of range");
    return static_cast<int>(v);
  }

  double real(const YAML::Node& node, const std::string& field) const {
    const auto s = text(node, field);
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    fail(node, field, "expected a number, got '" + s + "'");
  }

  std::vector<std::string> id_list(const YAML::Node& node, const std::string& field) const {
    if (!node.IsSequence()) fail(node, field, "expected a list of ids");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < node.size(); ++i) out.push_back(text(node[i], field + "[" + std::to_string(i) + "]"));
    return out;
  }

  Groups groups(const YAML::Node& node, const std::string& field) const {
    if (!node.IsSequence()) fail(node, field, "expected a list of lists of ids");
    Groups out;
    for (std::size_t i = 0; i < node.size(); ++i) out.push_back(id_list(node[i], field + "[" + std::to_string(i) + "]"));
    return out;
  }

  static std::string join(const std::string& prefix, const std::string& key) {
    return prefix.empty() ? key : prefix + "." + key;
  }

 private:
  std::string source_;
};

Resource read_resource(const Reader& r, const YAML::Node& node, const std::string& field,
                       std::initializer_list<std::string_view> extra_keys = {}) {
  r.expect_map(node, field);
  std::vector<std::string_view> keys{"id", "weight", "capacity"};
  keys.insert(keys.end(), extra_keys.begin(), extra_keys.end());
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    bool known = false;
    for (auto k : keys) known = known || key == k;
    if (!known) r.fail(kv.first, field + "." + key, "unknown field");
  }
  Resource res;
  res.id = r.text(r.require(node, field, "id"), field + ".id");
  res.weight = node["weight"] ? r.real(node["weight"], field + ".weight") : 1.0;
  res.capacity = r.small_int(r.require(node, field, "capacity"), field + ".capacity");
  if (!(res.weight >= 0.0)) r.fail(node["weight"], field + ".weight", "must be >= 0");
  if (res.capacity < 1) r.fail(node["capacity"], field + ".capacity", "must be >= 1");
  return res;
}

template <class Fn>
auto guarded(const Reader& r, const YAML::Node& at, const std::string& field, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    r.fail(at, field, e.what());
  }
}

StripScenario read_strip(const Reader& r, const YAML::Node& node, UtilityKind kind, int agents) {
  r.expect_map(node, "strip");
  r.only_keys(node, "strip", {"horizon", "initial_placement", "sections"});
  StripScenario s;
  s.kind = kind;
  s.agents = agents;
  s.horizon = node["horizon"] ? r.small_int(node["horizon"], "strip.horizon") : 5;
  if (auto p = node["initial_placement"]) {
    const auto tag = r.text(p, "strip.initial_placement");
    if (tag == "uniform") {
      s.placement = InitialPlacement::Uniform;
    } else if (tag == "first_section") {
      s.placement = InitialPlacement::FirstSection;
    } else {
      r.fail(p, "strip.initial_placement", "expected 'uniform' or 'first_section'");
    }
  }
  const auto sections = r.require(node, "strip", "sections");
  if (!sections.IsSequence()) r.fail(sections, "strip.sections", "expected a list");
  for (std::size_t i = 0; i < sections.size(); ++i) {
    s.sections.push_back(read_resource(r, sections[i], "strip.sections[" + std::to_string(i) + "]"));
  }
  guarded(r, node, "strip", [&] {
    s.validate();
    return 0;
  });
  return s;
}

NetworkScenario read_network(const Reader& r, const YAML::Node& node, UtilityKind kind, int agents) {
  r.expect_map(node, "network");
  r.only_keys(node, "network", {"nodes", "source", "sink", "segments", "paths"});
  auto nodes = r.id_list(r.require(node, "network", "nodes"), "network.nodes");
  auto source = r.text(r.require(node, "network", "source"), "network.source");
  auto sink = r.text(r.require(node, "network", "sink"), "network.sink");

  const auto seg_node = r.require(node, "network", "segments");
  if (!seg_node.IsSequence()) r.fail(seg_node, "network.segments", "expected a list");
  std::vector<Segment> segments;
  for (std::size_t i = 0; i < seg_node.size(); ++i) {
    const auto field = "network.segments[" + std::to_string(i) + "]";
    Segment seg;
    seg.resource = read_resource(r, seg_node[i], field, {"from", "to"});
    seg.from = r.text(r.require(seg_node[i], field, "from"), field + ".from");
    seg.to = r.text(r.require(seg_node[i], field, "to"), field + ".to");
    segments.push_back(std::move(seg));
  }

  const auto path_node = r.require(node, "network", "paths");
  if (!path_node.IsSequence()) r.fail(path_node, "network.paths", "expected a list");
  std::vector<PathSpec> paths;
  for (std::size_t i = 0; i < path_node.size(); ++i) {
    const auto field = "network.paths[" + std::to_string(i) + "]";
    r.expect_map(path_node[i], field);
    r.only_keys(path_node[i], field, {"id", "segments"});
    paths.push_back({r.text(r.require(path_node[i], field, "id"), field + ".id"),
                     r.id_list(r.require(path_node[i], field, "segments"), field + ".segments")});
  }

  return guarded(r, node, "network", [&] {
    NetworkScenario s{RoadNetwork(std::move(nodes), std::move(segments), std::move(source), std::move(sink), paths),
                      agents, kind};
    s.validate();
    return s;
  });
}

RewardScheme read_reward(const Reader& r, const YAML::Node& node, const Scenario& scenario) {
  r.expect_map(node, "reward");
  r.only_keys(node, "reward", {"scheme", "groups"});
  const auto scheme_node = r.require(node, "reward", "scheme");
  const auto tag = r.text(scheme_node, "reward.scheme");
  const bool is_ra = tag == "ra_resources" || tag == "ra_paths";
  if (node["groups"] && !is_ra) r.fail(node["groups"], "reward.groups", "groups are only used by ra_resources / ra_paths");

  if (tag == "local") return scheme::Local{};
  if (tag == "global") return scheme::Global{};
  if (tag == "difference") return scheme::Difference{};
  if (!is_ra) {
    r.fail(scheme_node, "reward.scheme", "expected local, global, difference, ra_resources or ra_paths, got '" + tag + "'");
  }

  const auto groups_node = r.require(node, "reward", "groups");
  const auto groups = r.groups(groups_node, "reward.groups");
  return guarded(r, groups_node, "reward.groups", [&]() -> RewardScheme {
    if (tag == "ra_resources") {
      if (const auto* strip = std::get_if<StripScenario>(&scenario)) {
        return scheme::ResourceAbstraction{AbstractGrouping::from_ids(groups, strip->sections)};
      }
      return scheme::ResourceAbstraction{
          AbstractGrouping::from_ids(groups, std::get<NetworkScenario>(scenario).network.segments())};
    }
    const auto* net = std::get_if<NetworkScenario>(&scenario);
    if (net == nullptr) throw std::invalid_argument("ra_paths needs a network environment");
    return scheme::PathAbstraction{PathGrouping::from_ids(groups, net->network)};
  });
}

LearnerConfig read_learner(const Reader& r, const YAML::Node& node) {
  LearnerConfig c;
  if (!node) return c;
  r.expect_map(node, "learner");
  r.only_keys(node, "learner", {"alpha", "alpha_decay", "gamma", "epsilon", "epsilon_decay"});
  if (node["alpha"]) c.alpha = r.real(node["alpha"], "learner.alpha");
  if (node["alpha_decay"]) c.alpha_decay = r.real(node["alpha_decay"], "learner.alpha_decay");
  if (node["gamma"]) c.gamma = r.real(node["gamma"], "learner.gamma");
  if (node["epsilon"]) c.epsilon = r.real(node["epsilon"], "learner.epsilon");
  if (node["epsilon_decay"]) c.epsilon_decay = r.real(node["epsilon_decay"], "learner.epsilon_decay");
  guarded(r, node, "learner", [&] {
    c.validate();
    return 0;
  });
  return c;
}

}  // namespace

ExperimentConfig parse_scenario(std::string_view text, const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    throw ConfigError(source, e.mark.line >= 0 ? e.mark.line + 1 : 0, "", e.msg);
  }
  const Reader r(source);
  if (!root.IsMap()) throw ConfigError(source, 0, "", "scenario file must be a mapping");
  r.only_keys(root, "", {"schema_version", "name", "environment", "utility", "agents", "strip", "network", "reward",
                         "learner", "experiment"});

  const auto version_node = r.require(root, "", "schema_version");
  if (r.integer(version_node, "schema_version") != kScenarioSchemaVersion) {
    r.fail(version_node, "schema_version", "unsupported schema version (expected " +
                                               std::to_string(kScenarioSchemaVersion) + ")");
  }

  ExperimentConfig config;
  config.name = root["name"] ? r.text(root["name"], "name") : "experiment";
  const auto kind_node = r.require(root, "", "utility");
  const auto kind = guarded(r, kind_node, "utility", [&] { return parse_utility_kind(r.text(kind_node, "utility")); });
  const auto agents_node = r.require(root, "", "agents");
  const int agents = r.small_int(agents_node, "agents");
  if (agents < 0) r.fail(agents_node, "agents", "must be >= 0");

  const auto env_node = r.require(root, "", "environment");
  const auto env = r.text(env_node, "environment");
  if (env == "strip") {
    if (root["network"]) r.fail(root["network"], "network", "not allowed for a strip environment");
    config.scenario = read_strip(r, r.require(root, "", "strip"), kind, agents);
  } else if (env == "network") {
    if (root["strip"]) r.fail(root["strip"], "strip", "not allowed for a network environment");
    config.scenario = read_network(r, r.require(root, "", "network"), kind, agents);
  } else {
    r.fail(env_node, "environment", "expected 'strip' or 'network', got '" + env + "'");
  }

  config.scheme = read_reward(r, r.require(root, "", "reward"), config.scenario);
  config.learner = read_learner(r, root["learner"]);

  if (const auto exp = root["experiment"]) {
    r.expect_map(exp, "experiment");
    r.only_keys(exp, "experiment", {"episodes", "trials", "seed", "report_interval", "smoothing_window", "threads"});
    if (exp["episodes"]) config.episodes = r.small_int(exp["episodes"], "experiment.episodes");
    if (exp["trials"]) config.trials = r.small_int(exp["trials"], "experiment.trials");
    if (exp["seed"]) {
      const auto seed = r.integer(exp["seed"], "experiment.seed");
      if (seed < 0) r.fail(exp["seed"], "experiment.seed", "must be >= 0");
      config.base_seed = static_cast<std::uint64_t>(seed);
    }
    if (exp["report_interval"]) config.report_interval = r.small_int(exp["report_interval"], "experiment.report_interval");
    if (exp["smoothing_window"]) {
      config.smoothing_window = r.small_int(exp["smoothing_window"], "experiment.smoothing_window");
    }
    if (exp["threads"]) {
      const auto t = r.small_int(exp["threads"], "experiment.threads");
      if (t < 0) r.fail(exp["threads"], "experiment.threads", "must be >= 0");
      config.threads = static_cast<unsigned>(t);
    }
    guarded(r, exp, "experiment", [&] {
      config.validate();
      return 0;
    });
  } else {
    guarded(r, root, "", [&] {
      config.validate();
      return 0;
    });
  }
  return config;
}

ExperimentConfig load_scenario_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError(file.string(), 0, "", "cannot open scenario file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), file.string());
}

std::string serialize_scenario(const ExperimentConfig& config) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "schema_version" << YAML::Value << kScenarioSchemaVersion;
  out << YAML::Key << "name" << YAML::Value << config.name;

  auto write_resource_fields = [&](const Resource& r) {
    out << YAML::Key << "id" << YAML::Value << r.id;
    out << YAML::Key << "weight" << YAML::Value << r.weight;
    out << YAML::Key << "capacity" << YAML::Value << r.capacity;
  };

  std::vector<std::string> member_ids;
  if (const auto* strip = std::get_if<StripScenario>(&config.scenario)) {
    member_ids = resource_ids(strip->sections);
    out << YAML::Key << "environment" << YAML::Value << "strip";
    out << YAML::Key << "utility" << YAML::Value << std::string(to_string(strip->kind));
    out << YAML::Key << "agents" << YAML::Value << strip->agents;
    out << YAML::Key << "strip" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "horizon" << YAML::Value << strip->horizon;
    out << YAML::Key << "initial_placement" << YAML::Value
        << (strip->placement == InitialPlacement::Uniform ? "uniform" : "first_section");
    out << YAML::Key << "sections" << YAML::Value << YAML::BeginSeq;
    for (const auto& s : strip->sections) {
      out << YAML::Flow << YAML::BeginMap;
      write_resource_fields(s);
      out << YAML::EndMap;
    }
    out << YAML::EndSeq << YAML::EndMap;
  } else {
    const auto& ns = std::get<NetworkScenario>(config.scenario);
    const auto& net = ns.network;
    out << YAML::Key << "environment" << YAML::Value << "network";
    out << YAML::Key << "utility" << YAML::Value << std::string(to_string(ns.kind));
    out << YAML::Key << "agents" << YAML::Value << ns.agents;
    out << YAML::Key << "network" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "nodes" << YAML::Value << YAML::Flow << net.nodes();
    out << YAML::Key << "source" << YAML::Value << net.source();
    out << YAML::Key << "sink" << YAML::Value << net.sink();
    out << YAML::Key << "segments" << YAML::Value << YAML::BeginSeq;
    for (std::size_t i = 0; i < net.segments().size(); ++i) {
      const auto& seg = net.segment(i);
      out << YAML::Flow << YAML::BeginMap;
      write_resource_fields(seg.resource);
      out << YAML::Key << "from" << YAML::Value << seg.from;
      out << YAML::Key << "to" << YAML::Value << seg.to;
      out << YAML::EndMap;
    }
    out << YAML::EndSeq;
    out << YAML::Key << "paths" << YAML::Value << YAML::BeginSeq;
    for (const auto& p : net.path_specs()) {
      out << YAML::Flow << YAML::BeginMap << YAML::Key << "id" << YAML::Value << p.id << YAML::Key << "segments"
          << YAML::Value << YAML::Flow << p.segments << YAML::EndMap;
    }
    out << YAML::EndSeq << YAML::EndMap;
    member_ids = std::holds_alternative<scheme::PathAbstraction>(config.scheme) ? net.path_ids()
                                                                                : resource_ids(net.segments());
  }

  out << YAML::Key << "reward" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "scheme" << YAML::Value << scheme_tag(config.scheme);
  const Partition* grouping = nullptr;
  if (const auto* ra = std::get_if<scheme::ResourceAbstraction>(&config.scheme)) grouping = &ra->grouping;
  if (const auto* ra = std::get_if<scheme::PathAbstraction>(&config.scheme)) grouping = &ra->grouping;
  if (grouping != nullptr) {
    out << YAML::Key << "groups" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (const auto& g : grouping->groups()) {
      std::vector<std::string> ids;
      for (auto m : g) ids.push_back(member_ids.at(m));
      out << YAML::Flow << ids;
    }
    out << YAML::EndSeq;
  }
  out << YAML::EndMap;

  const auto& l = config.learner;
  out << YAML::Key << "learner" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "alpha" << YAML::Value << l.alpha;
  out << YAML::Key << "alpha_decay" << YAML::Value << l.alpha_decay;
  out << YAML::Key << "gamma" << YAML::Value << l.gamma;
  out << YAML::Key << "epsilon" << YAML::Value << l.epsilon;
  out << YAML::Key << "epsilon_decay" << YAML::Value << l.epsilon_decay;
  out << YAML::EndMap;

  out << YAML::Key << "experiment" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "episodes" << YAML::Value << config.episodes;
  out << YAML::Key << "trials" << YAML::Value << config.trials;
  out << YAML::Key << "seed" << YAML::Value << config.base_seed;
  out << YAML::Key << "report_interval" << YAML::Value << config.report_interval;
  out << YAML::Key << "smoothing_window" << YAML::Value << config.smoothing_window;
  out << YAML::Key << "threads" << YAML::Value << config.threads;
  out << YAML::EndMap;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace congestion
