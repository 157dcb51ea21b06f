#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "satmodel/config.hpp"

namespace satmodel {

enum ExitStatus : int { kExitOk = 0, kExitValidation = 1, kExitNumerical = 2 };

/// Record emitters. Every record is one JSON object on its own line.
class ReportWriter {
 public:
  explicit ReportWriter(std::ostream& out) : out_(out) {}
  void write(const nlohmann::ordered_json& record);

 private:
  std::ostream& out_;
};

/// The header record: schema, versions, resolved config, precision and tolerance.
nlohmann::ordered_json report_header(const JobConfig& config, const ModelParams& params);

/// Runs an already validated job and streams its records. Writes the image
/// for `render` into config.out_dir. Throws NumericalError or ValidationError
/// from the underlying modules; the caller turns them into exit statuses.
void run_job(const JobConfig& config, const ModelParams& params, ReportWriter& report);

struct RunResult {
  int status = kExitOk;
  /// Files written, relative to the output directory.
  std::vector<std::string> artifacts;
  std::vector<std::string> errors;
};

/// Validates, then runs and writes <out>/<command>.jsonl. An invalid config
/// writes nothing.
RunResult run(JobConfig config);

}  // namespace satmodel
