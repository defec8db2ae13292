#include "bbgky/experiment.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <utility>

#include <nlohmann/json.hpp>

#include "bbgky/hierarchy.hpp"

namespace bbgky {

namespace {

using Clock = std::chrono::steady_clock;

std::string csv_field(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string hex64(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
}

using CheckGroup = std::function<std::vector<CheckRow>()>;

void run_group(RunRecord& record, const std::string& group, const CheckGroup& fn) {
  try {
    auto rows = fn();
    for (auto& r : rows) record.rows.push_back(std::move(r));
  } catch (const std::exception& e) {
    record.rows.push_back({group + " checks raised an error", e.what(),
                           std::numeric_limits<double>::quiet_NaN(), 0.0, false});
  }
}

std::string rows_csv(const std::vector<CheckRow>& rows) {
  std::ostringstream out;
  out << "name,tag,value,bound,pass\n";
  for (const auto& r : rows)
    out << csv_field(r.name) << ',' << csv_field(r.tag) << ',' << format_real(r.value) << ','
        << format_real(r.bound) << ',' << (r.pass ? "true" : "false") << '\n';
  return out.str();
}

// Correlation-kind initial data whose one-particle part is a state.
OperatorSequence evolve_initial_data(const SystemConfig& c) {
  OperatorSequence g0 = random_sequence(c, SequenceKind::Correlation);
  Xoshiro256StarStar rng(c.seed ^ 0x5bd1e995ULL);
  g0[1] = random_state(rng, c.d, {1});
  return g0;
}

std::string evolve_scenario(const SystemConfig& c, RunRecord& record) {
  const Dynamics dyn(c.hamiltonian());
  const OperatorSequence g0 = evolve_initial_data(c);
  const OperatorSequence big0 = marginal_correlations(dyn, g0, 0.0);
  OperatorSequence f0(c.d, c.n_max);
  f0.set_scalar(1.0);
  for (int s = 1; s <= c.n_max; ++s) f0[s] = marginal_density_from_clusters(dyn, g0, s, 0.0);

  std::ostringstream csv;
  csv << "t,s,trace_norm_G,trace_norm_F\n";
  double dual = 0.0, cluster = 0.0;
  for (double t : c.times) {
    const OperatorSequence big = solve_nonlinear_sequence(dyn, big0, t);
    const OperatorSequence dens = solve_bbgky_sequence(dyn, f0, t);
    for (int s = 1; s <= c.n_max; ++s) {
      csv << format_real(t) << ',' << s << ',' << format_real(trace_norm(big[s])) << ','
          << format_real(trace_norm(dens[s])) << '\n';
      dual = std::max(dual, trace_norm(big[s] - marginal_correlation(dyn, g0, s, t)));
      cluster = std::max(cluster, trace_norm(dens[s] - marginal_density_from_clusters(dyn, g0, s, t)));
    }
  }
  const auto check = [](std::string name, std::string tag, double v, double b) {
    return CheckRow{std::move(name), std::move(tag), v, b, v <= b};
  };
  record.rows.push_back(check("nonlinear hierarchy against evolved correlations",
                              "G_s(t) = sum_n 1/n! Tr g_{s+n}(t)", dual, c.tolerances.dual_route));
  record.rows.push_back(check("BBGKY solution against cluster correlations",
                              "F_s(t) from cluster correlations = BBGKY solution", cluster,
                              c.tolerances.triangle));
  return csv.str();
}

std::string meanfield_scenario(const SystemConfig& c, RunRecord& record) {
  ScalingReport scaling;
  run_group(record, "mean-field", [&] { return meanfield_checks(c, &scaling); });
  std::ostringstream csv;
  csv << "epsilon,t,s,scaled_norm,vlasov_gap\n";
  for (const auto& cell : scaling.cells)
    for (std::size_t k = 0; k < cell.scaled_norms.size(); ++k)
      csv << format_real(cell.epsilon) << ',' << format_real(cell.t) << ',' << k + 2 << ','
          << format_real(cell.scaled_norms[k]) << ',' << format_real(cell.vlasov_gap) << '\n';
  return csv.str();
}

std::string observables_scenario(const SystemConfig& c, RunRecord& record) {
  std::vector<std::vector<double>> table;
  run_group(record, "observable", [&] { return observable_checks(c, &table); });
  std::ostringstream csv;
  csv << "t,mean,mean_oracle,dispersion,dispersion_oracle\n";
  for (const auto& r : table) {
    for (std::size_t k = 0; k < r.size(); ++k) csv << (k ? "," : "") << format_real(r[k]);
    csv << '\n';
  }
  return csv.str();
}

}  // namespace

bool RunRecord::passed() const {
  for (const auto& r : rows)
    if (!r.pass) return false;
  return true;
}

std::vector<std::string> RunRecord::failures() const {
  std::vector<std::string> out;
  for (const auto& r : rows)
    if (!r.pass) out.push_back(r.name);
  return out;
}

SystemConfig make_random_config(int n_max, std::uint64_t seed, double potential_norm, int d) {
  Xoshiro256StarStar rng(seed);
  SystemConfig c;
  c.d = d;
  c.n_max = n_max;
  c.seed = seed;
  const Matrix k = random_gaussian(rng, d, d);
  c.kinetic = 0.5 * (k + k.adjoint());
  const Matrix a = random_gaussian(rng, d * d, d * d);
  const Matrix swap = permutation_matrix(d, {1, 0});
  Matrix phi = 0.5 * (a + a.adjoint());
  phi = 0.5 * (phi + swap * phi * swap.adjoint());
  c.potential = potential_norm * phi / phi.norm();
  c.times = {0.1, 0.5, 1.0};
  c.validate();
  return c;
}

ParticleOperator random_symmetric_state(int d, int n, std::uint64_t seed) {
  Xoshiro256StarStar rng(seed);
  return random_state(rng, d, label_range(1, n));
}

OperatorSequence marginal_sequence(const ParticleOperator& rho) {
  const int n = static_cast<int>(rho.particles());
  OperatorSequence f(rho.d(), n);
  f.set_scalar(1.0);
  double falling = 1.0;
  for (int s = 1; s <= n; ++s) {
    falling *= n - s + 1;
    ParticleOperator part = partial_trace(rho, label_range(1, s));
    f[s] = falling * part;
  }
  return f;
}

RunRecord verify_suite(const SystemConfig& c) {
  const auto start = Clock::now();
  RunRecord record;
  record.scenario = "verify";
  record.config_hash = config_hash(c);
  run_group(record, "tensor", [&] { return tensor_checks(c); });
  run_group(record, "partition", [&] { return partition_checks(c); });
  run_group(record, "dynamics", [&] { return dynamics_checks(c); });
  run_group(record, "cumulant", [&] { return cumulant_checks(c); });
  run_group(record, "hierarchy", [&] { return hierarchy_checks(c); });
  run_group(record, "estimate", [&] { return estimate_checks(c); });
  run_group(record, "mean-field", [&] { return meanfield_checks(c); });
  run_group(record, "observable", [&] { return observable_checks(c); });
  record.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return record;
}

RunRecord run_scenario(const SystemConfig& c, const std::string& out_dir) {
  const auto start = Clock::now();
  RunRecord record;
  std::string csv;
  switch (c.scenario) {
    case Scenario::Verify:
      record = verify_suite(c);
      csv = rows_csv(record.rows);
      break;
    case Scenario::Evolve:
      csv = evolve_scenario(c, record);
      break;
    case Scenario::Meanfield:
      csv = meanfield_scenario(c, record);
      break;
    case Scenario::Observables:
      csv = observables_scenario(c, record);
      break;
  }
  record.scenario = scenario_name(c.scenario);
  record.config_hash = config_hash(c);
  record.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();

  const std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);
  write_file(dir / "results.csv", csv);
  write_file(dir / "report.json", report_json(record));
  return record;
}

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

std::string report_json(const RunRecord& record) {
  nlohmann::ordered_json doc;
  doc["scenario"] = record.scenario;
  doc["config_hash"] = "fnv1a64:" + hex64(record.config_hash);
  doc["prng"] = record.prng;
  doc["passed"] = record.passed();
  auto rows = nlohmann::ordered_json::array();
  for (const auto& r : record.rows) {
    nlohmann::ordered_json j;
    j["name"] = r.name;
    j["tag"] = r.tag;
    j["value"] = format_real(r.value);
    j["bound"] = format_real(r.bound);
    j["pass"] = r.pass;
    rows.push_back(std::move(j));
  }
  doc["rows"] = std::move(rows);
  doc["failures"] = record.failures();
  return doc.dump(2) + "\n";
}

}  // namespace bbgky
