#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "json.hpp"

namespace quasirand {

enum class ErrorKind {
  kInvalidArgument,
  kUnsupported,
  kParse,
  kWorkCap,
  kPrecondition,
  kReservoirShortfall,
  kConvergenceFailure,
  kRetriesExhausted,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library. `diagnostics` carries whatever state
// the caller needs to understand or replay the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        nlohmann::json diagnostics = nlohmann::json::object())
      : std::runtime_error(message),
        kind_(kind),
        diagnostics_(std::move(diagnostics)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const nlohmann::json& diagnostics() const noexcept { return diagnostics_; }

 private:
  ErrorKind kind_;
  nlohmann::json diagnostics_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t offset)
      : Error(ErrorKind::kParse,
              message + " (at byte " + std::to_string(offset) + ")",
              nlohmann::json{{"offset", offset}}),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace quasirand
