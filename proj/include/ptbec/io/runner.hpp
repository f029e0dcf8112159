#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ptbec/io/config.hpp"

namespace ptbec::io {

struct TaskFailure {
  std::string task;
  std::string error;
};

struct RunSummary {
  std::vector<std::filesystem::path> files;
  std::vector<TaskFailure> failures;
  double wall_seconds = 0.0;
};

/// Executes the configured mode, writes its outputs and manifest.json into
/// cfg.output_dir and returns what was produced. Failures of individual
/// tasks are collected instead of aborting the run.
RunSummary run(const RunConfig& cfg);

}  // namespace ptbec::io
