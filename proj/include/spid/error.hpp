#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace spid {

// All numerical and format errors carry a stable short name so callers
// (and the CLI) can report which condition fired without parsing text.
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& message)
        : std::runtime_error(name + ": " + message), name_(std::move(name)) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

[[noreturn]] inline void raise(const std::string& name, const std::string& message) {
    throw Error(name, message);
}

} // namespace spid
