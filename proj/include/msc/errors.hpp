#pragma once

#include <stdexcept>
#include <string>

namespace msc {

// Every failure mode in the library carries a stable symbolic name
// (e.g. "AxisMismatch") that the CLI prints on stderr and scripts can
// match on. The name set is part of the external contract.
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& detail)
        : std::runtime_error(name + ": " + detail), name_(std::move(name)) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

[[noreturn]] inline void fail(const std::string& name, const std::string& detail) {
    throw Error(name, detail);
}

} // namespace msc
