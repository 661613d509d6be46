#include "finsler/verify/report.hpp"

#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace finsler {

void CheckReport::finalize() {
  overall_pass = true;
  bool any_fail = false, any_hypothesis = false;
  for (const CheckRecord& c : checks) {
    if (c.status != "pass") overall_pass = false;
    if (c.status == "fail") any_fail = true;
    if (c.status == "hypothesis-not-established") any_hypothesis = true;
  }
  status = any_fail ? "fail" : (any_hypothesis ? "hypothesis-not-established" : "pass");
}

std::string CheckReport::to_json(bool include_wall_time) const {
  nlohmann::json j;
  j["version"] = version;
  j["suite"] = suite;
  j["spec_digest"] = spec_digest;
  j["seed"] = seed;
  nlohmann::json arr = nlohmann::json::array();
  for (const CheckRecord& c : checks) {
    nlohmann::json cj;
    cj["name"] = c.name;
    cj["anchor"] = c.anchor;
    cj["samples"] = c.samples;
    cj["skipped"] = c.skipped;
    cj["max_residual"] = c.max_residual;
    cj["tolerance"] = c.tolerance;
    cj["status"] = c.status;
    arr.push_back(cj);
  }
  j["checks"] = arr;
  j["overall_pass"] = overall_pass;
  j["status"] = status;
  if (include_wall_time) j["wall_time_ms"] = wall_time_ms;
  return j.dump(2);
}

std::string CheckReport::to_table() const {
  std::ostringstream os;
  os << "suite: " << suite << "  spec: " << spec_digest << "  seed: " << seed << "\n";
  char line[256];
  std::snprintf(line, sizeof line, "%-38s %8s %7s %12s %12s  %s\n", "check", "samples", "skipped",
                "residual", "tolerance", "status");
  os << line;
  for (const CheckRecord& c : checks) {
    std::snprintf(line, sizeof line, "%-38s %8zu %7zu %12.3e %12.3e  %s\n", c.name.c_str(),
                  c.samples, c.skipped, c.max_residual, c.tolerance, c.status.c_str());
    os << line;
  }
  os << "overall: " << status << "\n";
  return os.str();
}

} // namespace finsler
