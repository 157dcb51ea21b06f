#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "satmodel/criterion.hpp"
#include "satmodel/model.hpp"
#include "satmodel/raster.hpp"
#include "satmodel/rotation.hpp"

namespace satmodel {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr const char* kReportSchema = "satmodel-report/1";
inline constexpr const char* kEnvPrefix = "SATMODEL_";

/// A fully resolved job. See README for the configuration grammar.
struct JobConfig {
  std::string command;

  std::string C = "2";
  std::vector<std::pair<std::uint64_t, std::uint64_t>> fractions;
  std::optional<GeneratorRule> generator;

  /// Explicit bits; empty with auto_precision selects bits from the sequence.
  Precision precision = kDefaultPrecision;
  bool auto_precision = false;
  std::size_t horizon = 0;

  Window window{-0.2, 1.05, -0.65, 0.65, 512, 512};
  std::optional<Palette> palette;
  Backend backend = Backend::kAuto;

  std::string candidate_kind = "theorem";
  std::string candidate_x = "0.5";
  double candidate_delta = 0.5;
  double alpha = 0.5;
  double beta = 1.5;

  std::size_t levin_first = 0;
  std::optional<std::size_t> levin_last;
  double levin_delta = 1e-3;

  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  std::uint64_t arg_q = 16;
  std::optional<std::string> c_prime;

  std::string point_re = "1";
  std::string point_im = "0";

  std::string out_dir = ".";
  unsigned threads = 0;

  RotationSequence rotations() const;
  /// Levels the command needs: horizon + 1, or horizon for `address`.
  std::size_t levels_needed() const;
  nlohmann::ordered_json to_json() const;
};

/// Parses a JSON document into a JobConfig. Unknown keys and every violated
/// constraint are reported together in one ValidationError.
JobConfig parse_config(const std::string& text);

/// Overrides shared by the environment and the command line.
struct Overrides {
  std::optional<std::string> precision;
  std::optional<std::size_t> horizon;
  std::optional<std::string> out_dir;
  std::optional<unsigned> threads;
};

/// Reads SATMODEL_PRECISION, SATMODEL_HORIZON, SATMODEL_OUT, SATMODEL_THREADS
/// from `env` (name -> value).
Overrides overrides_from_env(const std::map<std::string, std::string>& env);
/// Applies `o` on top of `config`.
void apply_overrides(JobConfig& config, const Overrides& o);

/// Precision for the auto mode at depth n: 64 + sum over k < n of log2 q_k,
/// clamped to [64, 8192].
Precision auto_precision(const RotationSequence& rotations, std::size_t depth);

/// Final validation before any computation; builds the model parameters.
ModelParams validate(JobConfig& config);

}  // namespace satmodel
