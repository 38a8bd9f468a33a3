#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ontic/run_config.hpp"

namespace ontic {

/// Output file could not be written.
class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentResult {
  Json results;
  std::vector<std::string> outputs;  // file names relative to the output directory
};

/// Runs one validated experiment, writing its CSV/JSON files into out_dir.
/// threads is a hint; outputs do not depend on it.
ExperimentResult run_experiment(const RunConfig& config, const std::filesystem::path& out_dir,
                                std::uint64_t seed, unsigned threads);

}  // namespace ontic
