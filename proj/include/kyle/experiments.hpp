#pragma once

#include <string>
#include <utility>
#include <vector>

#include "kyle/config.hpp"
#include "kyle/stats.hpp"

namespace kyle {

struct ExperimentInfo {
    std::string name;
    std::string description;
};

// All experiments in canonical order (same order as experiment_names()).
const std::vector<ExperimentInfo>& list_experiments();

// In-memory result of one experiment: a CSV table (cells already rendered),
// the check lines that decide the exit code, and any auxiliary files.
struct ExperimentResult {
    std::vector<std::string> csv_header;
    std::vector<std::vector<std::string>> csv_rows;
    std::vector<CheckLine> checks;
    std::vector<std::pair<std::string, std::string>> extra_files;

    bool pass() const;
};

// Runs the computation only; no filesystem access. cfg must be validated.
ExperimentResult run_experiment_checks(const ExperimentConfig& cfg);

// Deterministic human-readable report: config echo, one line per check, and
// a final verdict. Contains no timestamps.
std::string summary_text(const ExperimentConfig& cfg, const ExperimentResult& result);

// Validates cfg, runs the experiment, writes <out_dir>/<experiment>.csv,
// <out_dir>/summary.txt, and any extra files. Returns 0 when every check
// passes and 2 when at least one statistical check fails.
int run_experiment(const ExperimentConfig& cfg);

}  // namespace kyle
