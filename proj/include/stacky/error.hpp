#pragma once

#include <stdexcept>
#include <string>

namespace stacky {

// Every failure raised by the library carries the module it came from and a
// stable error name, so callers (notably the CLI) can report both.
class Error : public std::runtime_error {
public:
    Error(std::string module, std::string name, const std::string& detail)
        : std::runtime_error(name + ": " + detail),
          module_(std::move(module)), name_(std::move(name)) {}

    const std::string& module() const noexcept { return module_; }
    const std::string& name() const noexcept { return name_; }

private:
    std::string module_;
    std::string name_;
};

}  // namespace stacky
