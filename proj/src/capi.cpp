// betaflow: implementation of the C API. Exceptions from the C++ core are
// converted to status codes at this boundary; nothing throws across it.
#include "betaflow/betaflow_c.h"

#include "betaflow/config.hpp"
#include "betaflow/experiments.hpp"
#include "betaflow/report.hpp"

#include <cstdio>
#include <cstring>
#include <exception>
#include <filesystem>
#include <ios>
#include <new>
#include <stdexcept>
#include <string>

struct bf_config {
  betaflow::ExperimentConfig cfg;
};

struct bf_report {
  betaflow::ExperimentReport report;
  std::string json;
};

namespace {

void fill_err(char* errbuf, size_t errbuf_len, const char* msg) {
  if (!errbuf || errbuf_len == 0) return;
  std::snprintf(errbuf, errbuf_len, "%s", msg);
}

// Classifies the in-flight exception; call from a catch block.
bf_status classify(char* errbuf, size_t errbuf_len) {
  try {
    throw;
  } catch (const betaflow::ConfigParseError& e) {
    fill_err(errbuf, errbuf_len, e.what());
    return BF_ERR_PARSE;
  } catch (const betaflow::ConfigError& e) {
    fill_err(errbuf, errbuf_len, e.what());
    return BF_ERR_INVALID_ARGUMENT;
  } catch (const std::ios_base::failure& e) {
    fill_err(errbuf, errbuf_len, e.what());
    return BF_ERR_IO;
  } catch (const std::filesystem::filesystem_error& e) {
    fill_err(errbuf, errbuf_len, e.what());
    return BF_ERR_IO;
  } catch (const std::invalid_argument& e) {
    fill_err(errbuf, errbuf_len, e.what());
    return BF_ERR_INVALID_ARGUMENT;
  } catch (const std::bad_alloc&) {
    fill_err(errbuf, errbuf_len, "out of memory");
    return BF_ERR_INTERNAL;
  } catch (const std::exception& e) {
    fill_err(errbuf, errbuf_len, e.what());
    return BF_ERR_NUMERIC;
  } catch (...) {
    fill_err(errbuf, errbuf_len, "unknown error");
    return BF_ERR_INTERNAL;
  }
}

}  // namespace

extern "C" {

const char* bf_version(void) { return "betaflow 1.0.0"; }

size_t bf_experiment_count(void) { return betaflow::experiment_names().size(); }

const char* bf_experiment_name(size_t index) {
  const auto& names = betaflow::experiment_names();
  if (index >= names.size()) return nullptr;
  return names[index].c_str();
}

int bf_is_experiment(const char* name) {
  return name && betaflow::is_experiment(name) ? 1 : 0;
}

bf_config* bf_config_new(void) { return new (std::nothrow) bf_config(); }

bf_config* bf_config_parse(const char* text, char* errbuf, size_t errbuf_len) {
  try {
    auto* handle = new bf_config();
    try {
      handle->cfg = betaflow::parse_config(text ? text : "");
    } catch (...) {
      delete handle;
      throw;
    }
    return handle;
  } catch (...) {
    classify(errbuf, errbuf_len);
    return nullptr;
  }
}

bf_config* bf_config_load(const char* path, char* errbuf, size_t errbuf_len) {
  if (!path) {
    fill_err(errbuf, errbuf_len, "path is NULL");
    return nullptr;
  }
  try {
    auto* handle = new bf_config();
    try {
      handle->cfg = betaflow::load_config_file(path);
    } catch (...) {
      delete handle;
      throw;
    }
    return handle;
  } catch (...) {
    classify(errbuf, errbuf_len);
    return nullptr;
  }
}

void bf_config_free(bf_config* cfg) { delete cfg; }

bf_status bf_config_set(bf_config* cfg, const char* key, const char* value, char* errbuf,
                        size_t errbuf_len) {
  if (!cfg || !key || !value) {
    fill_err(errbuf, errbuf_len, "NULL argument");
    return BF_ERR_INVALID_ARGUMENT;
  }
  // Apply to a copy so a failed assignment leaves the handle untouched.
  betaflow::ExperimentConfig scratch = cfg->cfg;
  try {
    betaflow::set_config_field(scratch, key, value);
  } catch (...) {
    return classify(errbuf, errbuf_len);
  }
  cfg->cfg = std::move(scratch);
  return BF_OK;
}

size_t bf_config_render(const bf_config* cfg, char* buf, size_t len) {
  if (!cfg) {
    if (buf && len) buf[0] = '\0';
    return 0;
  }
  std::string text = betaflow::render_config(cfg->cfg);
  if (buf && len) {
    size_t copy = text.size() < len - 1 ? text.size() : len - 1;
    std::memcpy(buf, text.data(), copy);
    buf[copy] = '\0';
  }
  return text.size();
}

bf_status bf_run_experiment(const char* name, const bf_config* cfg, bf_report** out_report,
                            char* errbuf, size_t errbuf_len) {
  if (out_report) *out_report = nullptr;
  if (!name || !cfg) {
    fill_err(errbuf, errbuf_len, "NULL argument");
    return BF_ERR_INVALID_ARGUMENT;
  }
  if (!betaflow::is_experiment(name)) {
    fill_err(errbuf, errbuf_len, (std::string("unknown experiment: ") + name).c_str());
    return BF_ERR_UNKNOWN_EXPERIMENT;
  }
  try {
    betaflow::ExperimentReport report = betaflow::run_experiment(name, cfg->cfg);
    if (out_report) {
      auto* handle = new bf_report();
      handle->json = betaflow::report_to_json(report);
      handle->report = std::move(report);
      *out_report = handle;
    }
    return BF_OK;
  } catch (...) {
    return classify(errbuf, errbuf_len);
  }
}

void bf_report_free(bf_report* report) { delete report; }

int bf_report_all_pass(const bf_report* report) {
  return report && report->report.all_pass() ? 1 : 0;
}

size_t bf_report_check_count(const bf_report* report) {
  return report ? report->report.checks.size() : 0;
}

const char* bf_report_check_id(const bf_report* report, size_t index) {
  if (!report || index >= report->report.checks.size()) return nullptr;
  return report->report.checks[index].check_id.c_str();
}

int bf_report_check_pass(const bf_report* report, size_t index) {
  if (!report || index >= report->report.checks.size()) return 0;
  return report->report.checks[index].pass ? 1 : 0;
}

double bf_report_check_statistic(const bf_report* report, size_t index) {
  if (!report || index >= report->report.checks.size()) return 0.0;
  return report->report.checks[index].statistic;
}

double bf_report_check_threshold(const bf_report* report, size_t index) {
  if (!report || index >= report->report.checks.size()) return 0.0;
  return report->report.checks[index].threshold;
}

const char* bf_report_check_detail(const bf_report* report, size_t index) {
  if (!report || index >= report->report.checks.size()) return nullptr;
  return report->report.checks[index].detail.c_str();
}

const char* bf_report_json(const bf_report* report) {
  return report ? report->json.c_str() : nullptr;
}

}  // extern "C"
