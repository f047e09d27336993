#pragma once

#include <stdexcept>
#include <string>

namespace tcvrp {

enum class ErrorCode {
  kInput,       // malformed or invalid input data
  kInfeasible,  // the instance or request admits no feasible answer
  kIo,          // filesystem failure
  kInternal,
};

// All library failures surface as tcvrp::Error; the C API maps the code onto
// its status enum.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace tcvrp
