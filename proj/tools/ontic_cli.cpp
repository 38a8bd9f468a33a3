#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "ontic/experiments.hpp"
#include "ontic/run_config.hpp"

namespace {

namespace fs = std::filesystem;
using ontic::Json;

enum Exit { ok = 0, schema = 2, numerical = 3, io = 4 };

Json violations_json(const std::vector<ontic::Violation>& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back({{"key", x.key}, {"message", x.message}});
  return a;
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Error record on stderr and, when a directory is known, as error.json.
int fail(int code, const std::string& kind, const std::string& message, const std::optional<fs::path>& dir,
         Json extra = Json::object()) {
  Json rec = {{"status", "error"}, {"exit_code", code}, {"kind", kind}, {"message", message}};
  rec.update(extra);
  std::cerr << rec.dump() << '\n';
  if (dir) {
    std::error_code ec;
    fs::create_directories(*dir, ec);
    std::ofstream out(*dir / "error.json");
    if (out) out << rec.dump(2) << '\n';
  }
  return code;
}

int cmd_validate(const std::string& path) {
  Json doc;
  try {
    doc = ontic::load_config_file(path);
  } catch (const ontic::ConfigIoError& e) {
    return fail(io, "io", e.what(), std::nullopt);
  }
  const auto v = ontic::validate_config(doc);
  Json report = {{"config", path}, {"valid", v.empty()}, {"violations", violations_json(v)}};
  std::cout << report.dump(2) << '\n';
  return v.empty() ? ok : schema;
}

int cmd_run(const std::string& path, const std::optional<std::string>& out_flag,
            const std::optional<std::uint64_t>& seed_flag, unsigned threads) {
  const auto start = std::chrono::steady_clock::now();
  const std::string started = utc_now();
  std::optional<fs::path> dir;
  if (out_flag) dir = *out_flag;
  else if (const char* env = std::getenv("ONTIC_OUTPUT_DIR"); env && *env) dir = env;

  ontic::RunConfig cfg;
  try {
    cfg = ontic::parse_config(ontic::load_config_file(path));
  } catch (const ontic::ConfigIoError& e) {
    return fail(io, "io", e.what(), dir);
  } catch (const ontic::SchemaError& e) {
    return fail(schema, "schema", e.what(), dir, {{"violations", violations_json(e.violations())}});
  }
  if (!dir) dir = cfg.output_dir.value_or("ontic_out");
  const std::uint64_t seed = seed_flag ? *seed_flag : cfg.seed.value_or(0);

  std::error_code ec;
  fs::create_directories(*dir, ec);
  if (ec) return fail(io, "io", "cannot create output directory " + dir->string() + ": " + ec.message(), std::nullopt);

  ontic::ExperimentResult result;
  try {
    result = ontic::run_experiment(cfg, *dir, seed, threads);
  } catch (const ontic::DomainError& e) {
    return fail(schema, "domain", e.what(), dir);
  } catch (const ontic::NumericalError& e) {
    return fail(numerical, "numerical", e.what(), dir);
  } catch (const ontic::OutputError& e) {
    return fail(io, "io", e.what(), dir);
  } catch (const std::ios_base::failure& e) {
    return fail(io, "io", e.what(), dir);
  } catch (const fs::filesystem_error& e) {
    return fail(io, "io", e.what(), dir);
  } catch (const std::exception& e) {
    return fail(numerical, "numerical", e.what(), dir);
  }

  Json resolved = cfg.params;
  resolved["seed"] = seed;
  resolved["output_dir"] = dir->string();
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  Json manifest = {{"experiment", ontic::to_string(cfg.experiment)},
                   {"library_version", ontic::kVersion},
                   {"config_file", path},
                   {"config", resolved},
                   {"seed", seed},
                   {"threads_hint", threads},
                   {"results", result.results},
                   {"outputs", result.outputs},
                   {"timing", {{"started_utc", started}, {"wall_seconds", wall}}}};
  std::ofstream out(*dir / "manifest.json");
  if (!out) return fail(io, "io", "cannot write manifest.json", dir);
  out << manifest.dump(2) << '\n';
  if (!out) return fail(io, "io", "write to manifest.json failed", dir);
  std::cout << (*dir / "manifest.json").string() << '\n';
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic cellular-automaton models of free boson fields"};
  app.set_version_flag("--version", std::string(ontic::kVersion));
  app.require_subcommand(1);

  std::string config;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;

  auto* run = app.add_subcommand("run", "run the experiment described by a config file");
  run->add_option("config", config, "config file (JSON)")->required();
  run->add_option("--output-dir", out_dir, "output directory (overrides ONTIC_OUTPUT_DIR and the config)");
  run->add_option("--seed", seed, "RNG seed (overrides the config)");
  run->add_option("--threads", threads, "worker threads; results do not depend on it")->check(CLI::PositiveNumber);

  auto* val = app.add_subcommand("validate", "check a config file against the schema without running it");
  val->add_option("config", config, "config file (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : schema;
  }
  if (*run) return cmd_run(config, out_dir, seed, threads);
  return cmd_validate(config);
}
