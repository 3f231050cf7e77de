#pragma once

#include <stdexcept>
#include <string>

namespace slitwave {

/// Failure categories. The CLI maps each category onto its exit code.
enum class ErrorKind {
  validation,        // bad input, violated precondition
  numerical_budget,  // quadrature or spectrum resolution insufficient
  comparison,        // a comparison exceeded its threshold
  io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail_validation(const std::string& what) {
  throw Error(ErrorKind::validation, what);
}

[[noreturn]] inline void fail_budget(const std::string& what) {
  throw Error(ErrorKind::numerical_budget, what);
}

}  // namespace slitwave
