#pragma once

#include <stdexcept>
#include <string>

namespace cfplan {

// Error taxonomy mirrored by the CLI exit codes: data 3, model 4, planning 5.
// Range/usage problems surface as std::invalid_argument / std::out_of_range.

struct DataError : std::runtime_error {
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ModelError : std::runtime_error {
  explicit ModelError(const std::string& msg) : std::runtime_error(msg) {}
};

struct PlanningError : std::runtime_error {
  explicit PlanningError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace cfplan
