// Shared error type and small helpers.
#pragma once

#include <stdexcept>
#include <string>

namespace sunet {

// Thrown for rejected inputs and malformed files; the message names the
// offending field or path.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

[[noreturn]] inline void fail(const std::string& msg) { throw Error(msg); }

inline void require(bool cond, const std::string& msg) {
  if (!cond) fail(msg);
}

}  // namespace sunet
