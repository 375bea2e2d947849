#pragma once

#include <stdexcept>
#include <string>

namespace xmrs {

// Malformed input: bad ids, shape mismatches, out-of-range values.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NotFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operation not allowed in the current state (e.g. mutating a finalized session).
class Conflict : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace xmrs
