#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ontic/common.hpp"

namespace ontic {

using Json = nlohmann::json;

enum class Experiment { identities, spectrum, kernel, decay, front, evolve, interact, vacuum };

std::string to_string(Experiment);

struct Violation {
  std::string key;
  std::string message;
};

/// Config file could not be read or is not JSON.
class ConfigIoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Config parsed but breaks the schema.
class SchemaError : public std::runtime_error {
 public:
  explicit SchemaError(std::vector<Violation> v);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

struct RunConfig {
  Experiment experiment = Experiment::identities;
  Json params;  // the whole validated object, keys as written
  std::optional<std::string> output_dir;
  std::optional<std::uint64_t> seed;
};

Json load_config_file(const std::filesystem::path& path);

/// Every violation in the document; empty means the file is runnable.
/// Physics keys (masses, couplings, cutoffs, sizes, steps) have no defaults.
std::vector<Violation> validate_config(const Json& doc);

/// validate_config, then typed access; throws SchemaError.
RunConfig parse_config(const Json& doc);

/// Keys accepted for an experiment, required first.
std::vector<std::string> known_keys(Experiment e);

}  // namespace ontic
