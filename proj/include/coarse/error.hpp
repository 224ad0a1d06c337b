#pragma once

#include <stdexcept>
#include <string>

namespace coarse {

// Every named error condition from the operation contracts is thrown as an
// Error carrying the condition name plus a human-readable detail.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& detail)
        : std::runtime_error(code + ": " + detail), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

[[noreturn]] inline void fail(const std::string& code, const std::string& detail) {
    throw Error(code, detail);
}

inline void require(bool cond, const std::string& code, const std::string& detail) {
    if (!cond) fail(code, detail);
}

} // namespace coarse
