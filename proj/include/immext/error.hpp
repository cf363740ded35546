#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace immext {

// Domain error with a stable machine-readable code ("InvalidDiagram",
// "NotNullHomologous", ...) plus a human message.  The CLI maps codes to
// exit statuses.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

    const std::string& code() const { return code_; }

private:
    std::string code_;
};

[[noreturn]] inline void fail(const std::string& code, const std::string& message) {
    throw Error(code, message);
}

inline void require(bool cond, const std::string& code, const std::string& message) {
    if (!cond) fail(code, message);
}

} // namespace immext
