#include "bbgky/config.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

#include <nlohmann/json.hpp>

namespace bbgky {

namespace {

using nlohmann::json;

constexpr std::array<std::pair<const char*, double Tolerances::*>, 17> kToleranceFields{{
    {"roundtrip", &Tolerances::roundtrip},
    {"dual_route", &Tolerances::dual_route},
    {"chaos", &Tolerances::chaos},
    {"free_vanishing", &Tolerances::free_vanishing},
    {"generator", &Tolerances::generator},
    {"group", &Tolerances::group},
    {"cumulant_initial", &Tolerances::cumulant_initial},
    {"traced_generator", &Tolerances::traced_generator},
    {"third_term", &Tolerances::third_term},
    {"triangle", &Tolerances::triangle},
    {"positivity", &Tolerances::positivity},
    {"hermiticity", &Tolerances::hermiticity},
    {"identity", &Tolerances::identity},
    {"vlasov_series", &Tolerances::vlasov_series},
    {"hartree", &Tolerances::hartree},
    {"product_rule", &Tolerances::product_rule},
    {"dispersion", &Tolerances::dispersion},
}};

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ConfigError(field + ": " + what);
}

const json& require(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) fail(key, "missing required field");
  return *it;
}

double read_real(const json& v, const std::string& field) {
  if (!v.is_number()) fail(field, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(field, "must be finite");
  return x;
}

int read_int(const json& v, const std::string& field) {
  if (!v.is_number_integer()) fail(field, "expected an integer");
  return v.get<int>();
}

Complex read_complex(const json& v, const std::string& field) {
  if (v.is_number()) return {read_real(v, field), 0.0};
  if (v.is_array() && v.size() == 2)
    return {read_real(v[0], field + "[re]"), read_real(v[1], field + "[im]")};
  fail(field, "expected a number or a [re, im] pair");
}

Matrix read_matrix(const json& v, const std::string& field, Eigen::Index dim) {
  if (!v.is_array() || static_cast<Eigen::Index>(v.size()) != dim)
    fail(field, "expected " + std::to_string(dim) + " rows");
  Matrix m(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    const json& row = v[static_cast<std::size_t>(r)];
    const std::string rf = field + "[" + std::to_string(r) + "]";
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != dim)
      fail(rf, "expected " + std::to_string(dim) + " entries");
    for (Eigen::Index c = 0; c < dim; ++c)
      m(r, c) = read_complex(row[static_cast<std::size_t>(c)], rf + "[" + std::to_string(c) + "]");
  }
  return m;
}

std::vector<double> read_reals(const json& v, const std::string& field) {
  if (!v.is_array()) fail(field, "expected a list of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(read_real(v[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::string scenario_name(Scenario s) {
  switch (s) {
    case Scenario::Evolve: return "evolve";
    case Scenario::Verify: return "verify";
    case Scenario::Meanfield: return "meanfield";
    case Scenario::Observables: return "observables";
  }
  return "verify";
}

Scenario parse_scenario(const std::string& name) {
  for (Scenario s : {Scenario::Evolve, Scenario::Verify, Scenario::Meanfield,
                     Scenario::Observables})
    if (scenario_name(s) == name) return s;
  fail("scenario", "unknown scenario '" + name + "' (evolve, verify, meanfield, observables)");
}

void SystemConfig::validate() const {
  if (d < 2) fail("d", "must be at least 2");
  if (n_max < 1 || n_max > 6) fail("n_max", "must lie in 1..6");
  if (ipow(static_cast<std::size_t>(d), 2 * static_cast<std::size_t>(n_max)) > kMaxConfigEntries)
    fail("n_max", "d^(2 n_max) exceeds the memory guard of 2^24 entries");
  if (!(hbar > 0.0) || !std::isfinite(hbar)) fail("hbar", "must be a positive finite number");
  for (std::size_t i = 0; i < times.size(); ++i)
    if (!std::isfinite(times[i])) fail("times[" + std::to_string(i) + "]", "must be finite");
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    if (!(epsilons[i] > 0.0) || !std::isfinite(epsilons[i]))
      fail("epsilons[" + std::to_string(i) + "]", "must be positive");
    if (i > 0 && !(epsilons[i] < epsilons[i - 1]))
      fail("epsilons", "must be strictly decreasing");
  }
  for (const auto& [key, member] : kToleranceFields)
    if (!(tolerances.*member > 0.0) || !std::isfinite(tolerances.*member))
      fail(std::string("tolerances.") + key, "must be positive");
  try {
    hamiltonian().validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
}

HamiltonianSpec SystemConfig::hamiltonian() const {
  HamiltonianSpec spec;
  spec.d = d;
  spec.K = kinetic;
  spec.Phi = potential;
  spec.hbar = hbar;
  return spec;
}

std::vector<double> SystemConfig::scaling_epsilons() const {
  if (!epsilons.empty()) return epsilons;
  return {1.0, 0.5, 0.25, 0.125};
}

SystemConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("parse error: ") + e.what());
  }
  if (!doc.is_object()) fail("<root>", "expected a JSON object");

  static const std::array<const char*, 10> known{"d",     "n_max", "hbar",     "kinetic",
                                                 "potential", "times", "epsilons", "seed",
                                                 "scenario",  "tolerances"};
  for (const auto& item : doc.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || item.key() == k;
    if (!ok) fail(item.key(), "unknown field");
  }

  SystemConfig c;
  c.d = read_int(require(doc, "d"), "d");
  if (c.d < 2) fail("d", "must be at least 2");
  c.n_max = read_int(require(doc, "n_max"), "n_max");
  c.hbar = read_real(require(doc, "hbar"), "hbar");
  c.kinetic = read_matrix(require(doc, "kinetic"), "kinetic", c.d);
  c.potential = read_matrix(require(doc, "potential"), "potential", c.d * c.d);
  c.times = read_reals(require(doc, "times"), "times");
  if (doc.contains("epsilons")) c.epsilons = read_reals(doc["epsilons"], "epsilons");

  const json& seed = require(doc, "seed");
  if (seed.is_number_unsigned()) {
    c.seed = seed.get<std::uint64_t>();
  } else if (seed.is_number_integer()) {
    fail("seed", "must be a nonnegative 64-bit integer");
  } else {
    fail("seed", "expected an integer");
  }

  if (doc.contains("scenario")) {
    if (!doc["scenario"].is_string()) fail("scenario", "expected a string");
    c.scenario = parse_scenario(doc["scenario"].get<std::string>());
  }

  if (doc.contains("tolerances")) {
    const json& tol = doc["tolerances"];
    if (!tol.is_object()) fail("tolerances", "expected an object");
    for (const auto& item : tol.items()) {
      bool found = false;
      for (const auto& [key, member] : kToleranceFields)
        if (item.key() == key) {
          c.tolerances.*member = read_real(item.value(), "tolerances." + item.key());
          found = true;
        }
      if (!found) fail("tolerances." + item.key(), "unknown tolerance");
    }
  }

  c.validate();
  return c;
}

SystemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string config_to_json(const SystemConfig& c) {
  json doc;
  doc["d"] = c.d;
  doc["n_max"] = c.n_max;
  doc["hbar"] = c.hbar;
  doc["kinetic"] = matrix_json(c.kinetic);
  doc["potential"] = matrix_json(c.potential);
  doc["times"] = c.times;
  doc["epsilons"] = c.epsilons;
  doc["seed"] = c.seed;
  doc["scenario"] = scenario_name(c.scenario);
  json tol = json::object();
  for (const auto& [key, member] : kToleranceFields) tol[key] = c.tolerances.*member;
  doc["tolerances"] = tol;
  return doc.dump();
}

std::uint64_t config_hash(const SystemConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : config_to_json(config)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

OperatorSequence random_sequence(const SystemConfig& config, SequenceKind kind) {
  return random_sequence(config.d, config.n_max, config.seed, kind);
}

}  // namespace bbgky
