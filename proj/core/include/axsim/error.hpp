#pragma once

#include <stdexcept>
#include <string>

namespace axsim {

/// Malformed or out-of-range configuration. `field()` is the dotted path of
/// the offending key ("noise.p_spike"), or a comma-separated pair when two
/// fields are mutually inconsistent.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field.empty() ? message : field + ": " + message),
        field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace axsim
