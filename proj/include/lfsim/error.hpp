#pragma once

#include <stdexcept>
#include <string>

namespace lfsim {

/// Failure category. The values line up with the C API status codes and the
/// CLI exit codes (config = 2, data = 3, invariant = 4).
enum class ErrorKind {
    InvalidArgument = 1,
    Config = 2,
    Data = 3,
    Invariant = 4,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, const std::string& what) {
    if (!cond) fail(ErrorKind::InvalidArgument, what);
}

}  // namespace lfsim
