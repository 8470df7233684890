#ifndef MNH_ERRORS_HPP
#define MNH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mnh {

enum class ErrorCode {
    invalid_argument = 1,
    grid_mismatch,
    normalization,
    degenerate_field,
    tensor_grid_mismatch,
    unsupported_mode,
    integrator_blowup,
    config,
    io,
};

// All library failures are reported through this exception. The C API layer
// maps `code` onto its status enum.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) { throw Error(code, msg); }

inline void require(bool cond, ErrorCode code, const std::string& msg) {
    if (!cond) fail(code, msg);
}

}  // namespace mnh

#endif
