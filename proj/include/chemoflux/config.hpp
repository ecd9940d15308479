#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "chemoflux/model.hpp"
#include "chemoflux/oracle.hpp"
#include "chemoflux/solver.hpp"

namespace chemoflux {

struct GaussianBump {
  std::array<double, 3> center{0.0, 0.0, 0.0};
  double sigma = 0.5;
  double mass = 1.0;
};

/// Initial profile for n or c.
///   constant       : value everywhere
///   gaussian_bumps : background + sum of bumps, each renormalized to its mass
///   snapshot       : field read from `path`
/// `perturbation` multiplies the profile by (1 + perturbation * U(-1, 1)) with
/// the configured seed.
struct ScalarInit {
  std::string type = "constant";
  double value = 0.0;
  double background = 0.0;
  std::vector<GaussianBump> bumps;
  double perturbation = 0.0;
  std::filesystem::path path;
};

/// Initial velocity: zero, vortex (Taylor-Green cell in periodic mode, a
/// wall-compatible stream-function cell in neumann mode) or per-component
/// snapshots.
struct VelocityInit {
  std::string type = "zero";
  double amplitude = 1.0;
  std::vector<std::filesystem::path> paths;
};

struct InitialSpec {
  ScalarInit n;
  ScalarInit c;
  VelocityInit u;
  std::uint64_t seed = 0;
};

struct OutputSpec {
  std::filesystem::path diagnostics_csv;  // empty: no CSV
  int sample_count = 100;
  std::vector<double> sample_times;       // overrides sample_count when non-empty
  std::vector<double> snapshot_times;
  std::filesystem::path snapshot_dir;
  double ceiling = std::numeric_limits<double>::infinity();
};

struct RunConfig {
  SimParams params;
  ChiKappaModel model;
  InitialSpec initial;
  OutputSpec output;
  std::filesystem::path source;  // the file the config was read from
};

/// Reads and validates a JSON configuration. Relative paths inside it are
/// resolved against the file's directory. Throws ConfigError listing every
/// problem found.
RunConfig parse_config(const std::filesystem::path& path);
RunConfig parse_config_text(const std::string& text, const std::filesystem::path& base_dir = {});

/// Raw (unmollified) initial fields described by the config.
FieldState build_initial_state(const RunConfig& config);

RunSchedule make_schedule(const RunConfig& config);

/// Study settings read from the optional "study" object of a config file,
/// keyed by study name; missing keys keep the defaults.
oracle::UniformStudySettings parse_uniform_study(const std::filesystem::path& path);
oracle::BarenblattStudySettings parse_barenblatt_study(const std::filesystem::path& path);
oracle::ManufacturedStudySettings parse_manufactured_study(const std::filesystem::path& path);

}  // namespace chemoflux
