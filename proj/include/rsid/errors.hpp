#pragma once

#include <stdexcept>

namespace rsid {

// Malformed files or requests that cannot be satisfied by the given data.
class DataError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A violated internal invariant; indicates a bug rather than bad input.
class InternalError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

} // namespace rsid
