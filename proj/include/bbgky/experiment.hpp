#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bbgky/config.hpp"
#include "bbgky/meanfield.hpp"
#include "bbgky/report.hpp"

namespace bbgky {

struct RunRecord {
  std::string scenario;
  std::vector<CheckRow> rows;
  std::uint64_t config_hash = 0;
  std::string prng = Xoshiro256StarStar::algorithm;
  double wall_seconds = 0.0;  // reported on the console only

  bool passed() const;
  std::vector<std::string> failures() const;
};

// Seeded Hermitian kinetic term and swap-symmetric potential (potential
// scaled to the given Frobenius norm), d = 2 by default.
SystemConfig make_random_config(int n_max, std::uint64_t seed, double potential_norm = 1.0,
                                int d = 2);

// Positive, trace-one, permutation-symmetric state on labels 1..n.
ParticleOperator random_symmetric_state(int d, int n, std::uint64_t seed);

// F_s = n!/(n-s)! Tr_{s+1..n} rho for s = 1..n; scalar slot 1.
OperatorSequence marginal_sequence(const ParticleOperator& rho);

// Check groups of the verification suite; each returns tagged rows.
std::vector<CheckRow> tensor_checks(const SystemConfig& config);
std::vector<CheckRow> partition_checks(const SystemConfig& config);
std::vector<CheckRow> dynamics_checks(const SystemConfig& config);
std::vector<CheckRow> cumulant_checks(const SystemConfig& config);
std::vector<CheckRow> hierarchy_checks(const SystemConfig& config);
std::vector<CheckRow> estimate_checks(const SystemConfig& config);
// The optional outputs receive the scaling ladder and the per-time table
// (t, mean, mean oracle, dispersion, dispersion oracle).
std::vector<CheckRow> meanfield_checks(const SystemConfig& config,
                                       ScalingReport* scaling = nullptr);
std::vector<CheckRow> observable_checks(const SystemConfig& config,
                                        std::vector<std::vector<double>>* table = nullptr);

// All groups; failures are recorded, never thrown.
RunRecord verify_suite(const SystemConfig& config);

// Runs config.scenario and writes <out_dir>/results.csv and
// <out_dir>/report.json. Both files depend only on the config.
RunRecord run_scenario(const SystemConfig& config, const std::string& out_dir);

// Scientific notation with 17 significant digits.
std::string format_real(double x);

std::string report_json(const RunRecord& record);

}  // namespace bbgky
