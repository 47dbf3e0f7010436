#pragma once

#include <stdexcept>
#include <string>

namespace bfseg {

enum class ErrorKind {
  invalid_argument,
  format,
  io,
  kind_violation,
  dims_mismatch,
  degenerate,
  no_background,
  empty_input,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace bfseg
