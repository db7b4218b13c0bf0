#pragma once

#include <cstdint>
#include <vector>

namespace circlemaps {

struct Fraction {
  std::int64_t p = 0;
  std::int64_t q = 1;

  double value() const noexcept { return static_cast<double>(p) / static_cast<double>(q); }
  friend bool operator==(const Fraction&, const Fraction&) = default;
};

std::int64_t gcd(std::int64_t a, std::int64_t b);

// All reduced p/q with 1 <= q <= q_max and lo <= p/q <= hi, in increasing
// order. p may be any integer; each unit interval is searched by descending
// the Stern-Brocot tree and pruning subtrees that miss [lo, hi].
std::vector<Fraction> rationals_between(double lo, double hi, int q_max);

// Farey sequence of order q_max restricted to [0, 1).
std::vector<Fraction> farey_sequence(int q_max);

}  // namespace circlemaps
