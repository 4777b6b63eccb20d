#include "betaflow/report.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace betaflow {

using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json check_to_json(const CheckResult& c) {
  ordered_json j;
  j["check_id"] = c.check_id;
  j["paper_anchor"] = c.paper_anchor;
  j["statistic"] = c.statistic;
  j["threshold"] = c.threshold;
  j["pass"] = c.pass;
  j["seed"] = c.seed;
  j["runtime_s"] = c.runtime_s;
  if (!c.detail.empty()) j["detail"] = c.detail;
  return j;
}

}  // namespace

std::string report_to_json(const ExperimentReport& report) {
  ordered_json j;
  j["experiment"] = report.experiment;
  j["seed"] = report.seed;
  j["threads"] = report.threads;
  j["all_pass"] = report.all_pass();
  j["checks"] = ordered_json::array();
  for (const auto& c : report.checks) j["checks"].push_back(check_to_json(c));
  return j.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::ios_base::failure("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::ios_base::failure("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool reports_equal_modulo_runtime(const std::string& json_a, const std::string& json_b) {
  nlohmann::json a = nlohmann::json::parse(json_a);
  nlohmann::json b = nlohmann::json::parse(json_b);
  auto scrub = [](nlohmann::json& j) {
    if (j.contains("checks"))
      for (auto& c : j["checks"]) c.erase("runtime_s");
  };
  scrub(a);
  scrub(b);
  return a == b;
}

}  // namespace betaflow
