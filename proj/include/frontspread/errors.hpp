#pragma once

#include <stdexcept>
#include <string>

namespace frontspread {

/// Exit-code categories used by the CLI (see README).
enum class ErrorCode {
    Config = 2,       // bad configuration or invalid input data
    NumericAbort = 3, // a simulation aborted (stalled iteration, ambient margin, ...)
    Undetermined = 4, // a sweep or classification could not be resolved
    Unsupported = 5,  // operation not defined for this model/regime
};

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string &what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] inline void fail_config(const std::string &msg) {
    throw Error(ErrorCode::Config, msg);
}

[[noreturn]] inline void fail_unsupported(const std::string &msg) {
    throw Error(ErrorCode::Unsupported, msg);
}

} // namespace frontspread
