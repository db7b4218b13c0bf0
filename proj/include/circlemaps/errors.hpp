#pragma once

#include <stdexcept>

namespace circlemaps {

// A circle family or map violates the diffeomorphism or t-regularity invariant.
class DegenerateFamily : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A skew-product fiber map along a periodic orbit is not a diffeomorphism.
class DegenerateFiber : public DegenerateFamily {
 public:
  using DegenerateFamily::DegenerateFamily;
};

class NoLockInBracket : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InsufficientData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptyBin : public std::runtime_error {
 public:
  EmptyBin(const std::string& what, int bin) : std::runtime_error(what), bin_(bin) {}
  int bin() const noexcept { return bin_; }

 private:
  int bin_;
};

class HypothesisViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed definition files or configuration.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace circlemaps
