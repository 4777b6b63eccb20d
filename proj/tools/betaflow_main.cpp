// betaflow command-line front end. Talks to the library exclusively through
// the C API. Exit code 0 when every check of the experiment passed, 1 when
// the experiment ran but a check failed, 2 for usage, config, or I/O errors.
#include <betaflow/betaflow_c.h>

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

namespace {

std::string registry_line() {
  std::string s;
  for (size_t i = 0; i < bf_experiment_count(); ++i) {
    if (i) s += ", ";
    s += bf_experiment_name(i);
  }
  return s;
}

// Applies one override through the C API, reporting failures to stderr.
bool set_or_complain(bf_config* cfg, const char* key, const std::string& value) {
  char err[512];
  if (bf_config_set(cfg, key, value.c_str(), err, sizeof err) != BF_OK) {
    std::fprintf(stderr, "error: %s\n", err);
    return false;
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"betaflow: a diffusive matrix model of beta-ensembles and its "
               "verification experiments.\nExperiments: " +
               registry_line()};
  app.require_subcommand(0, 1);

  std::string config_path, seed_text, threads_text, out_dir;
  std::vector<CLI::App*> subs;
  for (size_t i = 0; i < bf_experiment_count(); ++i) {
    CLI::App* sub = app.add_subcommand(bf_experiment_name(i),
                                       std::string("run the ") + bf_experiment_name(i) +
                                           " experiment");
    sub->add_option("--config", config_path, "config file (key = value lines)");
    sub->add_option("--seed", seed_text, "master seed override");
    sub->add_option("--threads", threads_text, "worker thread count (0: one per core)");
    sub->add_option("--out", out_dir, "output directory");
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    if (code != 0)
      std::fprintf(stderr, "valid experiments: %s\n", registry_line().c_str());
    return code == 0 ? 0 : 2;
  }

  CLI::App* chosen = nullptr;
  for (CLI::App* sub : subs)
    if (sub->parsed()) chosen = sub;
  if (!chosen) {
    std::printf("%s\n", app.help().c_str());
    return 2;
  }
  const std::string name = chosen->get_name();

  char err[512];
  bf_config* cfg = nullptr;
  if (chosen->count("--config")) {
    cfg = bf_config_load(config_path.c_str(), err, sizeof err);
    if (!cfg) {
      std::fprintf(stderr, "error: %s\n", err);
      return 2;
    }
  } else {
    cfg = bf_config_new();
    if (!cfg) {
      std::fprintf(stderr, "error: out of memory\n");
      return 2;
    }
  }

  // Seed precedence: --seed beats BETAFLOW_SEED beats the config file beats
  // the built-in default.
  bool ok = true;
  if (chosen->count("--seed")) {
    ok = set_or_complain(cfg, "seed", seed_text);
  } else if (const char* env = std::getenv("BETAFLOW_SEED")) {
    ok = set_or_complain(cfg, "seed", env);
  }
  if (ok && chosen->count("--threads")) ok = set_or_complain(cfg, "threads", threads_text);
  if (ok && chosen->count("--out")) ok = set_or_complain(cfg, "out", out_dir);
  if (!ok) {
    bf_config_free(cfg);
    return 2;
  }

  bf_report* report = nullptr;
  bf_status status = bf_run_experiment(name.c_str(), cfg, &report, err, sizeof err);
  bf_config_free(cfg);
  if (status != BF_OK) {
    std::fprintf(stderr, "error: %s\n", err);
    if (status == BF_ERR_UNKNOWN_EXPERIMENT)
      std::fprintf(stderr, "valid experiments: %s\n", registry_line().c_str());
    bf_report_free(report);
    return 2;
  }

  size_t checks = bf_report_check_count(report);
  for (size_t i = 0; i < checks; ++i) {
    std::printf("[%s] %-34s statistic=%.6g threshold=%.6g\n",
                bf_report_check_pass(report, i) ? "PASS" : "FAIL",
                bf_report_check_id(report, i), bf_report_check_statistic(report, i),
                bf_report_check_threshold(report, i));
    const char* detail = bf_report_check_detail(report, i);
    if (detail && detail[0]) std::printf("       %s\n", detail);
  }
  int all_pass = bf_report_all_pass(report);
  std::printf("%s: %zu check%s, %s\n", name.c_str(), checks, checks == 1 ? "" : "s",
              all_pass ? "all passed" : "FAILURES");
  bf_report_free(report);
  return all_pass ? 0 : 1;
}
