#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "spkl/config.hpp"

namespace spkl {

inline const std::vector<std::string> kPipelineStages{"ingest", "preprocess", "train", "analyze", "project", "plot"};

/// Runs one stage ("synth", "ingest", "preprocess", "train", "analyze",
/// "project", "plot") reading and writing artifacts in config.output_dir and
/// recording a manifest line. Progress goes to `log`.
void run_stage(const std::string& stage, const RunConfig& config, std::ostream& log);

/// All of kPipelineStages in order.
void run_pipeline(const RunConfig& config, std::ostream& log);

}  // namespace spkl
