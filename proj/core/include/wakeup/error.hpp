#pragma once

#include <stdexcept>
#include <string>

namespace wakeup {

/// Raised when a user-supplied parameter violates a precondition. `field()`
/// names the offending parameter so front ends can point at the right flag.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string field, const std::string& message)
        : std::invalid_argument(message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

}  // namespace wakeup
