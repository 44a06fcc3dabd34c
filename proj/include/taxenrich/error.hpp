#pragma once

#include <stdexcept>
#include <string>

namespace taxenrich {

/// Malformed or inconsistent input data. `stage()` names the pipeline step
/// that rejected it, e.g. "taxonomy.load" or "concept_kb.load".
class DataError : public std::runtime_error {
 public:
  DataError(std::string stage, const std::string& message)
      : std::runtime_error(stage + ": " + message), stage_(std::move(stage)), message_(message) {}

  const std::string& stage() const noexcept { return stage_; }
  /// The description without the stage prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  std::string stage_;
  std::string message_;
};

}  // namespace taxenrich
