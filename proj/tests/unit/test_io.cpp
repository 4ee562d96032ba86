#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "congestion/metrics_io.hpp"
#include "congestion/scenario_file.hpp"
#include "congestion/utility.hpp"

using namespace congestion;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("congestion_io_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kStrip = R"(schema_version: 1
name: tiny
environment: strip
utility: bpd
agents: 10
strip:
  horizon: 3
  sections:
    - {id: s1, weight: 1, capacity: 3}
    - {id: s2, weight: 1, capacity: 3}
    - {id: s3, weight: 1, capacity: 3}
reward:
  scheme: ra_resources
  groups: [[s1, s2], [s3]]
learner:
  alpha: 0.2
  alpha_decay: 0.999
  gamma: 1.0
  epsilon: 0.1
  epsilon_decay: 0.99
experiment:
  episodes: 40
  trials: 3
  seed: 9
  report_interval: 10
)";

ConfigError parse_error(const std::string& text) {
  try {
    parse_scenario(text, "t.cfg");
  } catch (const ConfigError& e) {
    return e;
  }
  FAIL("no error raised");
  return ConfigError("", 0, "", "");
}

std::string replace(std::string text, const std::string& from, const std::string& to) {
  const auto at = text.find(from);
  REQUIRE(at != std::string::npos);
  return text.replace(at, from.size(), to);
}

}  // namespace

TEST_CASE("number formatting") {
  CHECK(format_number(11.036983480880457) == "11.036983");
  CHECK(format_number(-0.0) == "0.000000");
  CHECK(format_number(-1e-9) == "0.000000");
  CHECK(format_number(2.0) == "2.000000");
}

TEST_CASE("parse a strip scenario") {
  const auto c = parse_scenario(kStrip);
  CHECK(c.name == "tiny");
  const auto& s = std::get<StripScenario>(c.scenario);
  CHECK(s.sections.size() == 3);
  CHECK(s.horizon == 3);
  CHECK(s.placement == InitialPlacement::Uniform);
  const auto& ra = std::get<scheme::ResourceAbstraction>(c.scheme);
  CHECK(ra.grouping.group_count() == 2);
  CHECK(c.learner.alpha == 0.2);
  CHECK(c.base_seed == 9);
  CHECK(c.report_interval == 10);
}

TEST_CASE("scenario errors name the field and line") {
  SUBCASE("overlapping groups") {
    const auto e = parse_error(replace(kStrip, "[[s1, s2], [s3]]", "[[s1, s2], [s2, s3]]"));
    CHECK(e.field() == "reward.groups");
    CHECK(e.line() == 14);
    CHECK(std::string(e.what()).find("'s2'") != std::string::npos);
  }
  SUBCASE("unknown key") {
    const auto e = parse_error(replace(kStrip, "  horizon: 3", "  horizon: 3\n  wraparound: true"));
    CHECK(e.field() == "strip.wraparound");
    CHECK(e.line() == 8);
  }
  SUBCASE("fractional agents") {
    const auto e = parse_error(replace(kStrip, "agents: 10", "agents: 10.5"));
    CHECK(e.field() == "agents");
    CHECK(e.line() == 5);
  }
  SUBCASE("schema version") {
    CHECK(parse_error(replace(kStrip, "schema_version: 1", "schema_version: 2")).field() == "schema_version");
  }
  SUBCASE("missing field") {
    CHECK(parse_error(replace(kStrip, "utility: bpd\n", "")).field() == "utility");
  }
  SUBCASE("bad capacity") {
    CHECK(parse_error(replace(kStrip, "{id: s3, weight: 1, capacity: 3}", "{id: s3, weight: 1, capacity: 0}")).field() ==
          "strip.sections[2].capacity");
  }
  SUBCASE("learner range") {
    CHECK(parse_error(replace(kStrip, "alpha: 0.2", "alpha: 1.2")).field() == "learner");
  }
  SUBCASE("groups without abstraction") {
    CHECK(parse_error(replace(kStrip, "scheme: ra_resources", "scheme: difference")).field() == "reward.groups");
  }
  SUBCASE("malformed yaml") {
    CHECK(parse_error("name: [unclosed").line() >= 1);
  }
  CHECK_THROWS_AS(load_scenario_file("/nonexistent/x.cfg"), ConfigError);
}

TEST_CASE("every bundled config parses and survives a round trip") {
  int seen = 0;
  for (const auto& entry : fs::directory_iterator(CONGESTION_CONFIG_DIR)) {
    if (entry.path().extension() != ".cfg") continue;
    ++seen;
    CAPTURE(entry.path().string());
    const auto once = load_scenario_file(entry.path());
    const auto text = serialize_scenario(once);
    const auto twice = parse_scenario(text, "serialized");
    CHECK(twice == once);
    CHECK(serialize_scenario(twice) == text);
    CHECK(entry.path().stem().string() == once.name);
  }
  CHECK(seen >= 30);
}

TEST_CASE("learning curve csv round trip") {
  const auto dir = scratch("curve");
  auto c = parse_scenario(kStrip);
  const auto series = run_experiment(c);
  const auto file = dir / "tiny_curve.csv";
  write_learning_curve_csv(series, file);
  CHECK(slurp(file).rfind("episode,mean_G,std_G\n", 0) == 0);
  const auto rows = read_learning_curve_csv(file);
  REQUIRE(rows.size() == 40);
  int checkpoints = 0;
  for (std::size_t e = 0; e < rows.size(); ++e) {
    CHECK(rows[e].episode == static_cast<int>(e) + 1);
    CHECK(std::abs(rows[e].mean_g - series.mean_g[e]) <= 5e-7);
    CHECK(rows[e].std_g.has_value() == series.std_g[e].has_value());
    if (rows[e].std_g) {
      ++checkpoints;
      CHECK(std::abs(*rows[e].std_g - *series.std_g[e]) <= 5e-7);
    }
  }
  CHECK(checkpoints == 4);
}

TEST_CASE("minimal series writes a header and one row") {
  const auto dir = scratch("minimal");
  MetricsSeries s;
  s.episodes = 1;
  s.trials = 1;
  s.mean_g = {0.5};
  s.std_g = {0.0};
  write_learning_curve_csv(s, dir / "m.csv");
  CHECK(slurp(dir / "m.csv") == "episode,mean_G,std_G\n1,0.500000,0.000000\n");
}

TEST_CASE("smoothing only touches the written copy") {
  const auto dir = scratch("smooth");
  MetricsSeries s;
  s.episodes = 4;
  s.trials = 1;
  s.report_interval = 2;
  s.mean_g = {0, 2, 4, 6};
  s.std_g = {std::nullopt, 0.0, std::nullopt, 0.0};
  write_learning_curve_csv(s, dir / "s.csv", 2);
  const auto rows = read_learning_curve_csv(dir / "s.csv");
  CHECK(rows[3].mean_g == 5.0);
  CHECK(s.mean_g[3] == 6.0);
}

TEST_CASE("histogram, oracle and curve files") {
  const auto dir = scratch("files");
  const std::vector<HistogramBin> bins{{"s1", 6.0, 0.5}, {"s2", 70.25, 1.0}};
  write_histogram_csv(bins, dir / "h.csv");
  CHECK(slurp(dir / "h.csv") == "resource_id,mean_count,std_count\ns1,6.000000,0.500000\ns2,70.250000,1.000000\n");

  const std::vector<std::string> ids{"ABD", "ACD", "ABCD"};
  const std::vector<int> counts{4, 42, 4};
  write_oracle_csv(ids, counts, 5.223896097, dir / "o.csv");
  const auto rec = read_oracle_csv(dir / "o.csv");
  CHECK(rec.ids == ids);
  CHECK(rec.counts == counts);
  CHECK(rec.max_g == 5.223896);

  const std::vector<CurvePoint> curve{{1, 0.5}, {2, -2.25}};
  write_abstract_curve_csv(curve, dir / "c.csv");
  CHECK(slurp(dir / "c.csv") == "agents,reward\n1,0.500000\n2,-2.250000\n");
}

TEST_CASE("write_metrics emits the expected files") {
  const auto dir = scratch("metrics") / "nested";
  const auto series = run_experiment(parse_scenario(kStrip));
  const auto files = write_metrics(series, dir, "tiny_s9", 0, true);
  CHECK(files.curve == dir / "tiny_s9_curve.csv");
  CHECK(files.histogram == dir / "tiny_s9_hist.csv");
  REQUIRE(files.plot.has_value());
  CHECK(fs::exists(*files.plot));
  CHECK(slurp(*files.plot).find("<svg") != std::string::npos);
}

TEST_CASE("I/O failures carry the path") {
  const auto dir = scratch("fail");
  const auto blocker = dir / "file";
  std::ofstream(blocker) << "x";
  try {
    write_histogram_csv({}, blocker / "h.csv");
    FAIL("no error");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find(blocker.string()) != std::string::npos);
  }
  CHECK_THROWS_AS(read_learning_curve_csv(dir / "absent.csv"), IoError);
  std::ofstream(dir / "bad.csv") << "episode,mean_G,std_G\n1,abc,\n";
  CHECK_THROWS_AS(read_learning_curve_csv(dir / "bad.csv"), IoError);
}
