#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lgrowth {

// One measured quantity against its bound. relation is "<" (measured must
// stay below the tolerance) or ">=" (a minimum, e.g. a convergence ratio).
struct VerifyCheck {
  std::string label;
  double measured;
  double tolerance;
  std::string relation;
  bool passed;
};

struct CriterionResult {
  int id = 0;
  std::string key;    // selector name
  std::string title;
  std::vector<VerifyCheck> checks;
  std::string error;  // exception text when the criterion could not run
  double seconds = 0.0;
  bool passed = false;
};

struct VerifyOptions {
  std::uint64_t seed = 20240611;  // random initial map of the moment check
  unsigned threads = 0;
};

struct VerifyReport {
  std::string selector;
  std::vector<CriterionResult> criteria;

  bool passed() const;
  std::string to_json() const;
};

// Criterion keys in numeric order, followed by the group selectors
// "area-law" and "all".
const std::vector<std::string>& verify_selectors();

// Runs the selected criteria. Unknown selectors throw invalid_input with the
// list of valid ones. Criterion failures never throw; they are report content.
VerifyReport run_verification(const std::string& selector, const VerifyOptions& options = {});

}  // namespace lgrowth
