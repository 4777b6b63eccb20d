// betaflow: the experiment registry. Each named experiment runs one of the
// verification studies end to end and writes its outputs (CSV tables, the
// resolved configuration, report.json) into the configured output directory.
#pragma once

#include "betaflow/config.hpp"
#include "betaflow/report.hpp"

#include <string>
#include <vector>

namespace betaflow {

// Registry order is stable and part of the CLI surface.
const std::vector<std::string>& experiment_names();

bool is_experiment(const std::string& name);

// Runs the named experiment. Keys the config text set explicitly win; keys it
// left unset get that experiment's documented defaults. Creates cfg.out_dir,
// writes config.resolved, one or more CSV files, and report.json (always, even
// when checks fail), and returns the report. Throws on unknown names, invalid
// parameters, and I/O failures.
ExperimentReport run_experiment(const std::string& name, const ExperimentConfig& cfg);

}  // namespace betaflow
