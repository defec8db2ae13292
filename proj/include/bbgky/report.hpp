#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace bbgky {

// Outcome of a sampled inequality check.
struct VerificationReport {
  std::string name;
  std::size_t samples = 0;
  double max_observed = 0.0;  // worst sampled value of the bounded quantity
  double bound = 0.0;
  double constant = 0.0;   // data constant entering the bound, if any
  bool pass = true;
};

// One line of a run record.
struct CheckRow {
  std::string name;
  std::string tag;  // identity or relation being exercised
  double value = 0.0;
  double bound = 0.0;
  bool pass = true;
};

}  // namespace bbgky
