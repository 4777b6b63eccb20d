// betaflow: structured pass/fail reporting for experiment checks.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace betaflow {

struct CheckResult {
  std::string check_id;
  std::string paper_anchor;
  double statistic = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::uint64_t seed = 0;
  double runtime_s = 0.0;
  std::string detail;  // optional free-text context; omitted from JSON when empty
};

struct ExperimentReport {
  std::string experiment;
  std::uint64_t seed = 0;
  int threads = 1;
  std::vector<CheckResult> checks;

  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return !checks.empty();
  }
};

// Serialized report with stable key order. Two runs with the same seed agree
// byte-for-byte except for the runtime_s values.
std::string report_to_json(const ExperimentReport& report);

void write_text_file(const std::string& path, const std::string& content);

// Reads a file fully; throws std::runtime_error when it cannot be opened.
std::string read_text_file(const std::string& path);

// Equality ignoring runtime_s, for rerun determinism checks.
bool reports_equal_modulo_runtime(const std::string& json_a, const std::string& json_b);

}  // namespace betaflow
