#pragma once

#include "lobeq/equilibrium.hpp"
#include "lobeq/signature.hpp"
#include "lobeq/simulator.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lobeq::cli {

using nlohmann::json;

/// Invalid configuration; `path` points at the offending key ("model.r").
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& what);
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

JumpLaw parse_jump(const json& j, const std::string& path);
VolumeLaw parse_volume(const json& j, const std::string& path);
ModelParams parse_model(const json& j, const std::string& path);
MultiSourceParams parse_multi(const json& j, const std::string& path);

json to_json(const JumpLaw& law);
json to_json(const VolumeLaw& law);
json to_json(const ModelParams& p);
json to_json(const MultiSourceParams& mp);

enum class ShapeVariant { Continuous, Toxic, Tick, Multi };

struct ShapeConfig {
  ShapeVariant variant = ShapeVariant::Continuous;
  std::vector<double> grid;  ///< continuous, toxic and multi variants
  int n_levels = 10;         ///< tick variant
};

struct SignatureConfig {
  std::string input;
  std::optional<double> tick;
  std::vector<std::int64_t> horizons_ns;
  std::vector<Reference> references{Reference::Micro, Reference::Mid};
  std::vector<ClusterSpec> clusters;
  bool by_label = true;
  BootstrapOptions bootstrap{200, 0};
};

struct SweepConfig {
  /// Axis values; an empty axis keeps the base model value.
  std::vector<double> r, f, theta, rho, offset_d;
  std::vector<double> probes;
  int threads = 0;  ///< 0 = hardware concurrency
};

/// Fully resolved run configuration. Only the blocks the command needs are
/// required.
struct RunConfig {
  std::uint64_t seed = 0;
  std::optional<ModelParams> model;
  std::optional<MultiSourceParams> multi;
  ShapeConfig shape;
  std::optional<SimConfig> simulate;  ///< params copied from `model`
  std::optional<SignatureConfig> signature;
  std::optional<SweepConfig> sweep;
};

/// Validates the whole document for `command`. Unknown keys are errors.
RunConfig parse_config(const json& doc, const std::string& command);

/// Resolved configuration in the same schema, defaults filled in; feeding
/// it back through parse_config reproduces the run.
json to_json(const RunConfig& cfg, const std::string& command);

/// Evenly spaced grid description {"from": a, "to": b, "n": k} or a list.
std::vector<double> parse_grid(const json& j, const std::string& path);

}  // namespace lobeq::cli
