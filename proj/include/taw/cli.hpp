#pragma once

#include <string>

#include <json.hpp>

#include "taw/common.hpp"

namespace taw::cli {

/// Flag overrides collected from the command line; negative/empty means
/// "keep the config value".
struct Overrides {
  int truncation = -1;
  int series_order = -1;
  double tolerance = -1;
  std::int64_t size_cap = -1;
  double R = -1;
  double C_R = -1;
  bool force = false;
};

struct Outcome {
  nlohmann::json report;
  int exit_code = 0;  // 0 ok, 1 hard error, 2 validation failure
  std::string human;  // text summary
};

/// Dispatch one command against a parsed config. Never throws: hard errors
/// come back as exit_code 1 with the error embedded in the report.
Outcome run(const std::string& command, const nlohmann::json& config,
            const Overrides& overrides = {});

const std::vector<std::string>& command_names();

}  // namespace taw::cli
