#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ng {

enum class Errc {
  io = 1,
  parse = 2,
  invalid_argument = 3,
  numeric = 4,
  state = 5,
};

// The one exception type the engine throws. The C API layer maps Errc onto
// its status codes; internal callers mostly let it propagate.
class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace ng
