#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "betaflow/betaflow_c.h"

#include <cstring>
#include <filesystem>
#include <string>

namespace fs = std::filesystem;

TEST_CASE("version and registry") {
  const char* v = bf_version();
  REQUIRE(v != nullptr);
  CHECK(std::string(v).find("betaflow") != std::string::npos);

  REQUIRE(bf_experiment_count() == 10);
  const char* expected[] = {
      "stationary-law", "coupling-convergence", "delta-scheme",   "no-collision",
      "collision-times", "s-drift",             "frame-convergence", "collision-frame",
      "invariance",      "bessel-law",
  };
  for (size_t i = 0; i < 10; ++i) {
    const char* name = bf_experiment_name(i);
    REQUIRE(name != nullptr);
    CHECK(std::string(name) == expected[i]);
    CHECK(bf_is_experiment(name) == 1);
  }
  CHECK(bf_experiment_name(10) == nullptr);
  CHECK(bf_experiment_name(static_cast<size_t>(-1)) == nullptr);
  CHECK(bf_is_experiment("nope") == 0);
  CHECK(bf_is_experiment(nullptr) == 0);
}

TEST_CASE("config lifecycle") {
  SUBCASE("new holds defaults") {
    bf_config* cfg = bf_config_new();
    REQUIRE(cfg != nullptr);
    char buf[1024];
    size_t need = bf_config_render(cfg, buf, sizeof buf);
    REQUIRE(need > 0);
    REQUIRE(need < sizeof buf);
    std::string text(buf);
    CHECK(text.find("d = 2\n") != std::string::npos);
    CHECK(text.find("seed = 1729\n") != std::string::npos);
    bf_config_free(cfg);
  }

  SUBCASE("parse accepts text and NULL means empty") {
    char err[256] = {0};
    bf_config* cfg = bf_config_parse("d = 3\np = 0.25\n", err, sizeof err);
    REQUIRE(cfg != nullptr);
    char buf[1024];
    bf_config_render(cfg, buf, sizeof buf);
    CHECK(std::string(buf).find("d = 3\n") != std::string::npos);
    bf_config_free(cfg);

    bf_config* dflt = bf_config_parse(nullptr, err, sizeof err);
    REQUIRE(dflt != nullptr);
    bf_config_free(dflt);
  }

  SUBCASE("parse failure returns NULL and an error message") {
    char err[256] = {0};
    bf_config* cfg = bf_config_parse("dt = abc\n", err, sizeof err);
    CHECK(cfg == nullptr);
    CHECK(std::string(err).find("dt") != std::string::npos);
  }

  SUBCASE("load missing file") {
    char err[256] = {0};
    CHECK(bf_config_load("definitely/not/here.cfg", err, sizeof err) == nullptr);
    CHECK(err[0] != '\0');
    CHECK(bf_config_load(nullptr, err, sizeof err) == nullptr);
  }

  SUBCASE("set distinguishes parse failures from range failures") {
    bf_config* cfg = bf_config_new();
    REQUIRE(cfg != nullptr);
    char err[256] = {0};

    CHECK(bf_config_set(cfg, "d", "4", err, sizeof err) == BF_OK);
    CHECK(bf_config_set(cfg, "p", "1.5", err, sizeof err) == BF_ERR_INVALID_ARGUMENT);
    CHECK(bf_config_set(cfg, "dt", "abc", err, sizeof err) == BF_ERR_PARSE);
    CHECK(bf_config_set(cfg, "bogus", "1", err, sizeof err) == BF_ERR_INVALID_ARGUMENT);
    CHECK(bf_config_set(nullptr, "d", "2", err, sizeof err) == BF_ERR_INVALID_ARGUMENT);
    CHECK(bf_config_set(cfg, nullptr, "2", err, sizeof err) == BF_ERR_INVALID_ARGUMENT);
    CHECK(bf_config_set(cfg, "d", nullptr, err, sizeof err) == BF_ERR_INVALID_ARGUMENT);

    // Failed assignments left the handle untouched.
    char buf[1024];
    bf_config_render(cfg, buf, sizeof buf);
    std::string text(buf);
    CHECK(text.find("d = 4\n") != std::string::npos);
    CHECK(text.find("p = 0.5\n") != std::string::npos);
    CHECK(text.find("dt = 0.001\n") != std::string::npos);
    bf_config_free(cfg);
  }

  SUBCASE("render reports the needed length and truncates cleanly") {
    bf_config* cfg = bf_config_new();
    REQUIRE(cfg != nullptr);
    size_t need = bf_config_render(cfg, nullptr, 0);
    CHECK(need > 0);

    std::string full(need + 1, '\0');
    CHECK(bf_config_render(cfg, full.data(), full.size()) == need);
    CHECK(std::strlen(full.c_str()) == need);

    char tiny[10];
    CHECK(bf_config_render(cfg, tiny, sizeof tiny) == need);
    CHECK(std::strlen(tiny) == sizeof(tiny) - 1);

    char scratch[4] = {'x', 'x', 'x', 'x'};
    CHECK(bf_config_render(nullptr, scratch, sizeof scratch) == 0);
    CHECK(scratch[0] == '\0');
    bf_config_free(cfg);
  }

  bf_config_free(nullptr);  // must be a no-op
}

TEST_CASE("running an experiment through the C boundary") {
  bf_config* cfg = bf_config_new();
  REQUIRE(cfg != nullptr);
  char err[512] = {0};

  SUBCASE("unknown names are rejected before any work") {
    bf_report* rep = reinterpret_cast<bf_report*>(0x1);
    CHECK(bf_run_experiment("not-an-experiment", cfg, &rep, err, sizeof err) ==
          BF_ERR_UNKNOWN_EXPERIMENT);
    CHECK(rep == nullptr);
    CHECK(std::string(err).find("unknown experiment") != std::string::npos);
    CHECK(bf_run_experiment(nullptr, cfg, nullptr, err, sizeof err) == BF_ERR_INVALID_ARGUMENT);
    CHECK(bf_run_experiment("s-drift", nullptr, nullptr, err, sizeof err) ==
          BF_ERR_INVALID_ARGUMENT);
  }

  SUBCASE("a small run produces a usable report and files on disk") {
    fs::path out = fs::temp_directory_path() / "bf_capi_run";
    fs::remove_all(out);
    REQUIRE(bf_config_set(cfg, "out", out.string().c_str(), err, sizeof err) == BF_OK);
    REQUIRE(bf_config_set(cfg, "paths", "20", err, sizeof err) == BF_OK);
    REQUIRE(bf_config_set(cfg, "T", "0.05", err, sizeof err) == BF_OK);
    REQUIRE(bf_config_set(cfg, "dt", "0.001", err, sizeof err) == BF_OK);

    bf_report* rep = nullptr;
    bf_status st = bf_run_experiment("no-collision", cfg, &rep, err, sizeof err);
    REQUIRE_MESSAGE(st == BF_OK, err);
    REQUIRE(rep != nullptr);

    size_t checks = bf_report_check_count(rep);
    REQUIRE(checks >= 1);
    for (size_t i = 0; i < checks; ++i) {
      const char* id = bf_report_check_id(rep, i);
      REQUIRE(id != nullptr);
      CHECK(std::strlen(id) > 0);
      int pass = bf_report_check_pass(rep, i);
      CHECK((pass == 0 || pass == 1));
      const char* detail = bf_report_check_detail(rep, i);
      CHECK(detail != nullptr);
    }
    CHECK(bf_report_check_id(rep, checks) == nullptr);
    CHECK(bf_report_check_statistic(rep, checks) == 0.0);

    const char* json = bf_report_json(rep);
    REQUIRE(json != nullptr);
    std::string j(json);
    CHECK(j.find("\"checks\"") != std::string::npos);
    CHECK(j.find(bf_report_check_id(rep, 0)) != std::string::npos);

    CHECK(fs::exists(out / "report.json"));
    CHECK(fs::exists(out / "config.resolved"));

    bf_report_free(rep);
    fs::remove_all(out);
  }

  SUBCASE("report accessors shrug off NULL") {
    CHECK(bf_report_all_pass(nullptr) == 0);
    CHECK(bf_report_check_count(nullptr) == 0);
    CHECK(bf_report_check_id(nullptr, 0) == nullptr);
    CHECK(bf_report_check_pass(nullptr, 0) == 0);
    CHECK(bf_report_check_statistic(nullptr, 0) == 0.0);
    CHECK(bf_report_check_threshold(nullptr, 0) == 0.0);
    CHECK(bf_report_check_detail(nullptr, 0) == nullptr);
    CHECK(bf_report_json(nullptr) == nullptr);
    bf_report_free(nullptr);
  }

  bf_config_free(cfg);
}
