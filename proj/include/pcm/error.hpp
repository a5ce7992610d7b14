#pragma once

#include <stdexcept>
#include <string>

namespace pcm {

enum class ErrorKind {
    Parse,
    DanglingReference,
    Duplicate,
    Dimension,
    InvalidArgument,
    NotFound,
    Numeric,
    Io,
};

// Thrown by every fallible operation in the library. The kind lets callers
// (the CLI and the HTTP layer) map failures onto exit codes and statuses.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string &what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string &what) { throw Error(kind, what); }

}  // namespace pcm
