#pragma once

#include <stdexcept>
#include <string>

namespace avdm {

enum class ErrorCode {
    invalid_argument = 1,
    dimension_mismatch = 2,
    decode_unavailable = 3,
    degenerate_data = 4,
    preset_failure = 5,
    io = 6,
    unknown_name = 7,
    below_terrain = 8,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

} // namespace avdm
