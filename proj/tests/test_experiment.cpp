#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "bbgky/experiment.hpp"
#include "bbgky/hierarchy.hpp"
#include "test_support.hpp"

using namespace bbgky;

namespace {

const std::string kMinimal = R"({
  "d": 2, "n_max": 2, "hbar": 1.0,
  "kinetic": [[0.5, 0.0], [0.0, -0.5]],
  "potential": [[0.3, 0, 0, 0], [0, -0.1, 0, 0], [0, 0, -0.1, 0], [0, 0, 0, 0.3]],
  "times": [0.5], "seed": 42, "scenario": "verify"
})";

nlohmann::json minimal_doc() { return nlohmann::json::parse(kMinimal); }

std::string config_error(const nlohmann::json& doc) {
  try {
    parse_config(doc.dump());
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("bbgky_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("minimal config is accepted") {
  const SystemConfig c = parse_config(kMinimal);
  CHECK(c.d == 2);
  CHECK(c.n_max == 2);
  CHECK(c.scenario == Scenario::Verify);
  CHECK(c.seed == 42);
  CHECK(c.scaling_epsilons().size() == 4);
  CHECK(c.tolerances.roundtrip == 1e-12);
}

TEST_CASE("shipped configs load") {
  for (const char* name :
       {"minimal.json", "verify_n3.json", "evolve_n3.json", "meanfield.json", "observables_n2.json"})
    CHECK_NOTHROW(load_config(std::string(BBGKY_SOURCE_DIR) + "/configs/" + name));
}

TEST_CASE("invalid configs name the failing field") {
  nlohmann::json doc = minimal_doc();
  doc["kinetic"] = {{0.5, 1.0}, {0.0, -0.5}};
  CHECK(config_error(doc).find("kinetic") != std::string::npos);

  doc = minimal_doc();
  doc["potential"][0][1] = 0.2;
  doc["potential"][1][0] = 0.2;
  const std::string sym = config_error(doc);
  CHECK(sym.find("potential") != std::string::npos);
  CHECK(sym.find("symmetric") != std::string::npos);

  doc = minimal_doc();
  doc["n_max"] = 13;
  CHECK(config_error(doc).find("n_max") != std::string::npos);

  doc = minimal_doc();
  doc["d"] = 8;
  doc["n_max"] = 5;
  doc["kinetic"] = nlohmann::json::array();
  for (int r = 0; r < 8; ++r) doc["kinetic"].push_back(std::vector<double>(8, 0.0));
  doc["potential"] = nlohmann::json::array();
  for (int r = 0; r < 64; ++r) doc["potential"].push_back(std::vector<double>(64, 0.0));
  CHECK(config_error(doc).find("memory guard") != std::string::npos);

  doc = minimal_doc();
  doc["hbar"] = 0.0;
  CHECK(config_error(doc).find("hbar") != std::string::npos);

  doc = minimal_doc();
  doc["epsilons"] = {0.5, 1.0};
  CHECK(config_error(doc).find("epsilons") != std::string::npos);

  doc = minimal_doc();
  doc["seed"] = -1;
  CHECK(config_error(doc).find("seed") != std::string::npos);

  doc = minimal_doc();
  doc["colour"] = 1;
  CHECK(config_error(doc).find("colour") != std::string::npos);

  doc = minimal_doc();
  doc["tolerances"] = {{"nonsense", 1.0}};
  CHECK(config_error(doc).find("tolerances.nonsense") != std::string::npos);

  doc = minimal_doc();
  doc["scenario"] = "simulate";
  CHECK(config_error(doc).find("scenario") != std::string::npos);

  CHECK_THROWS_AS(parse_config("{\"d\": 2,"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("tolerances can be overridden") {
  nlohmann::json doc = minimal_doc();
  doc["tolerances"] = {{"roundtrip", 1e-9}};
  const SystemConfig c = parse_config(doc.dump());
  CHECK(c.tolerances.roundtrip == 1e-9);
  CHECK(config_hash(c) != config_hash(parse_config(kMinimal)));
}

TEST_CASE("config hash is stable and canonical") {
  const SystemConfig a = parse_config(kMinimal);
  nlohmann::json reordered = minimal_doc();
  reordered["kinetic"] = {{{0.5, 0.0}, 0.0}, {0.0, -0.5}};
  const SystemConfig b = parse_config(reordered.dump(4));
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_to_json(a) == config_to_json(b));
}

TEST_CASE("seeded sequences") {
  const SystemConfig c = parse_config(kMinimal);
  for (SequenceKind kind : {SequenceKind::Correlation, SequenceKind::State, SequenceKind::Bounded}) {
    const OperatorSequence a = random_sequence(c, kind);
    const OperatorSequence b = random_sequence(c, kind);
    for (int s = 1; s <= c.n_max; ++s) CHECK(a[s].matrix() == b[s].matrix());
  }
  const OperatorSequence states = random_sequence(c, SequenceKind::State);
  const OperatorSequence corr = random_sequence(c, SequenceKind::Correlation);
  for (int s = 1; s <= c.n_max; ++s) {
    CHECK(min_eigenvalue(states[s]) >= -1e-14);
    CHECK(std::abs(states[s].trace() - 1.0) < 1e-13);
    CHECK(trace_norm(corr[s]) < 1.0 / (2.0 * std::exp(3.0)));
  }
  SystemConfig other = c;
  other.seed = 43;
  CHECK(random_sequence(other, SequenceKind::State)[1].matrix() != states[1].matrix());
}

TEST_CASE("verify scenario writes a deterministic report") {
  const SystemConfig c = parse_config(kMinimal);
  const auto dir1 = scratch("verify1");
  const auto dir2 = scratch("verify2");
  const RunRecord r1 = run_scenario(c, dir1.string());
  const RunRecord r2 = run_scenario(c, dir2.string());
  CHECK(r1.passed());
  CHECK(r1.failures().empty());
  CHECK(r1.rows.size() > 30);
  CHECK(slurp(dir1 / "results.csv") == slurp(dir2 / "results.csv"));
  CHECK(slurp(dir1 / "report.json") == slurp(dir2 / "report.json"));

  const std::string csv = slurp(dir1 / "results.csv");
  CHECK(csv.rfind("name,tag,value,bound,pass\n", 0) == 0);
  const auto report = nlohmann::json::parse(slurp(dir1 / "report.json"));
  CHECK(report["scenario"] == "verify");
  CHECK(report["prng"] == Xoshiro256StarStar::algorithm);
  CHECK(report["passed"] == true);
  CHECK(report["rows"].size() == r1.rows.size());
  CHECK(report["config_hash"].get<std::string>().rfind("fnv1a64:", 0) == 0);
  CHECK_FALSE(report.contains("wall_seconds"));
  std::filesystem::remove_all(dir1);
  std::filesystem::remove_all(dir2);
}

TEST_CASE("other scenarios write their tables") {
  SystemConfig c = parse_config(kMinimal);
  const std::pair<Scenario, const char*> cases[] = {
      {Scenario::Evolve, "t,s,trace_norm_G,trace_norm_F\n"},
      {Scenario::Meanfield, "epsilon,t,s,scaled_norm,vlasov_gap\n"},
      {Scenario::Observables, "t,mean,mean_oracle,dispersion,dispersion_oracle\n"}};
  for (const auto& [scenario, header] : cases) {
    c.scenario = scenario;
    const auto dir = scratch(scenario_name(scenario));
    const RunRecord r = run_scenario(c, dir.string());
    CHECK(r.passed());
    CHECK(r.scenario == scenario_name(scenario));
    const std::string csv = slurp(dir / "results.csv");
    CHECK(csv.rfind(header, 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') > 1);
    std::filesystem::remove_all(dir);
  }
}

TEST_CASE("single-particle config degrades gracefully") {
  nlohmann::json doc = minimal_doc();
  doc["n_max"] = 1;
  const SystemConfig c = parse_config(doc.dump());
  const RunRecord r = verify_suite(c);
  CHECK(r.passed());
  CHECK_FALSE(r.rows.empty());
}

TEST_CASE("free config passes") {
  nlohmann::json doc = minimal_doc();
  for (auto& row : doc["potential"])
    for (auto& x : row) x = 0.0;
  const RunRecord r = verify_suite(parse_config(doc.dump()));
  for (const auto& row : r.rows) CHECK_MESSAGE(row.pass, row.name);
}

TEST_CASE("random configs") {
  const SystemConfig c = make_random_config(3, 9, 0.5);
  CHECK(c.n_max == 3);
  CHECK(c.potential.norm() == doctest::Approx(0.5));
  CHECK(config_hash(c) == config_hash(make_random_config(3, 9, 0.5)));
  const ParticleOperator rho = random_symmetric_state(2, 3, 4);
  const OperatorSequence f = marginal_sequence(rho);
  CHECK(std::abs(f[1].trace() - 3.0) < 1e-12);
  CHECK(std::abs(f[2].trace() - 6.0) < 1e-12);
  CHECK(std::abs(f[3].trace() - 6.0) < 1e-12);
}
