#pragma once

#include <stdexcept>
#include <string>

namespace specmark {

// Process exit codes reused as error categories across the library.
enum class ErrorCode : int {
    config = 2,
    io = 3,
    capacity = 4,
    divergence = 5,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
    ErrorCode code() const { return code_; }
    int exit_code() const { return static_cast<int>(code_); }

private:
    ErrorCode code_;
};

inline Error config_error(const std::string& msg) { return Error(ErrorCode::config, msg); }
inline Error io_error(const std::string& msg) { return Error(ErrorCode::io, msg); }
inline Error capacity_error(const std::string& msg) { return Error(ErrorCode::capacity, msg); }
inline Error divergence_error(const std::string& msg) { return Error(ErrorCode::divergence, msg); }

}  // namespace specmark
