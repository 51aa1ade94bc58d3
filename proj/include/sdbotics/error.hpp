#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include <nlohmann/json.hpp>

namespace sdbotics {

/// Domain error carrying a machine-readable code from the fixed vocabulary
/// (UNKNOWN_ROBOT, DUPLICATE_ID, ...) and an optional structured detail.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message, nlohmann::json detail = nullptr)
      : std::runtime_error(message), code_(std::move(code)), detail_(std::move(detail)) {}

  const std::string& code() const noexcept { return code_; }
  const nlohmann::json& detail() const noexcept { return detail_; }

 private:
  std::string code_;
  nlohmann::json detail_;
};

}  // namespace sdbotics
