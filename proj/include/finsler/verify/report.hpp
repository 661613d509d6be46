#pragma once

#include <string>
#include <vector>

namespace finsler {

// One verified fact: the residual actually measured, the absolute tolerance it was held
// to, and how many samples contributed. Skipped samples (excluded cone, excluded ray) are
// counted separately and never folded into passes.
struct CheckRecord {
  std::string name;
  std::string anchor; // stable identifier of the fact being checked
  size_t samples = 0;
  size_t skipped = 0;
  double max_residual = 0;
  double tolerance = 0;
  std::string status; // "pass" | "fail" | "hypothesis-not-established"
};

struct CheckReport {
  int version = 1;
  std::string suite;
  std::string spec_digest;
  uint64_t seed = 0;
  std::vector<CheckRecord> checks;
  bool overall_pass = false;     // true iff every check passed
  std::string status;            // "pass" | "fail" | "hypothesis-not-established"
  double wall_time_ms = 0;

  void finalize(); // derives overall_pass and status from the records
  std::string to_json(bool include_wall_time = true) const;
  std::string to_table() const;
};

} // namespace finsler
