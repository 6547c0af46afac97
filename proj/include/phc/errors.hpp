#pragma once

#include <stdexcept>
#include <string>

namespace phc {

/// Malformed user input (profiles, configs). Carries a 1-based line number
/// when the input came from a text file; 0 means "not line-anchored".
class ValidationError : public std::runtime_error {
  public:
    explicit ValidationError(const std::string& msg, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
          line_(line) {}

    int line() const noexcept { return line_; }

  private:
    int line_;
};

}  // namespace phc
