#include "circlemaps/farey.hpp"

#include <cmath>
#include <stdexcept>

namespace circlemaps {

std::int64_t gcd(std::int64_t a, std::int64_t b) {
  a = a < 0 ? -a : a;
  b = b < 0 ? -b : b;
  while (b != 0) {
    const std::int64_t r = a % b;
    a = b;
    b = r;
  }
  return a;
}

namespace {

// In-order walk of the Stern-Brocot subtree strictly between l and r.
void descend(const Fraction& l, const Fraction& r, double lo, double hi, int q_max,
             std::vector<Fraction>& out) {
  const Fraction m{l.p + r.p, l.q + r.q};
  if (m.q > q_max) return;
  if (r.value() < lo || l.value() > hi) return;
  descend(l, m, lo, hi, q_max, out);
  if (m.value() >= lo && m.value() <= hi) out.push_back(m);
  descend(m, r, lo, hi, q_max, out);
}

}  // namespace

std::vector<Fraction> rationals_between(double lo, double hi, int q_max) {
  if (q_max < 1) throw std::invalid_argument("rationals_between: q_max must be >= 1");
  std::vector<Fraction> out;
  if (!(hi >= lo)) return out;
  const auto first = static_cast<std::int64_t>(std::floor(lo));
  const auto last = static_cast<std::int64_t>(std::floor(hi));
  for (std::int64_t base = first; base <= last; ++base) {
    const double ulo = lo - static_cast<double>(base);
    const double uhi = hi - static_cast<double>(base);
    std::vector<Fraction> unit;
    if (ulo <= 0.0 && uhi >= 0.0) unit.push_back({0, 1});
    descend({0, 1}, {1, 1}, ulo, uhi, q_max, unit);
    for (auto f : unit) out.push_back({f.p + base * f.q, f.q});
  }
  return out;
}

std::vector<Fraction> farey_sequence(int q_max) {
  auto all = rationals_between(0.0, 1.0, q_max);
  if (!all.empty() && all.back().p == all.back().q) all.pop_back();
  return all;
}

}  // namespace circlemaps
