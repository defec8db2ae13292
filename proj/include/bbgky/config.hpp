#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "bbgky/dynamics.hpp"
#include "bbgky/random.hpp"

namespace bbgky {

// Invalid or unreadable configuration; the message names the failing field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Scenario { Evolve, Verify, Meanfield, Observables };

std::string scenario_name(Scenario s);
Scenario parse_scenario(const std::string& name);

// Pass thresholds of the check rows; each can be overridden by name under
// "tolerances" in the config document.
struct Tolerances {
  double roundtrip = 1e-12;
  double dual_route = 1e-10;
  double chaos = 1e-10;
  double free_vanishing = 1e-12;
  double generator = 1e-5;
  double group = 1e-9;
  double cumulant_initial = 1e-12;
  double traced_generator = 1e-8;
  double third_term = 1e-10;
  double triangle = 1e-10;
  double positivity = 1e-10;
  double hermiticity = 1e-10;
  double identity = 1e-12;
  double vlasov_series = 1e-6;
  double hartree = 1e-8;
  double product_rule = 1e-10;
  double dispersion = 1e-10;
};

struct SystemConfig {
  int d = 2;
  int n_max = 2;
  double hbar = 1.0;
  Matrix kinetic;    // d x d
  Matrix potential;  // d^2 x d^2
  std::vector<double> times;
  std::vector<double> epsilons;  // empty: {1, 1/2, 1/4, 1/8}
  std::uint64_t seed = 0;
  Scenario scenario = Scenario::Verify;
  Tolerances tolerances;

  // Throws ConfigError naming the failing field.
  void validate() const;
  HamiltonianSpec hamiltonian() const;
  std::vector<double> scaling_epsilons() const;
};

// Largest accepted d^(2 n_max).
constexpr std::size_t kMaxConfigEntries = std::size_t{1} << 24;

SystemConfig parse_config(const std::string& json_text);
SystemConfig load_config(const std::string& path);

// Canonical JSON form (complex entries as [re, im], compact, sorted keys).
std::string config_to_json(const SystemConfig& config);
// 64-bit FNV-1a of the canonical JSON form.
std::uint64_t config_hash(const SystemConfig& config);

OperatorSequence random_sequence(const SystemConfig& config, SequenceKind kind);

}  // namespace bbgky
