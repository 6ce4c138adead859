#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace first {

/// Base of every typed domain error raised by the library. `reason()` is the
/// stable, machine-readable name (e.g. "EvenVerifierCount") that the CLI
/// prints and tests match on.
class Error : public std::runtime_error {
public:
    Error(std::string_view reason, const std::string& detail)
        : std::runtime_error(std::string(reason) + ": " + detail), reason_(reason) {}

    std::string_view reason() const noexcept { return reason_; }

private:
    std::string reason_;
};

}  // namespace first
