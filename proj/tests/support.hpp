#pragma once

// Hand-rolled generators and independent oracles shared by the test suites.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "circlemaps/circle_map.hpp"
#include "circlemaps/trig_poly.hpp"

namespace support {

using circlemaps::CircleMap;
using circlemaps::Harmonic;
using circlemaps::Stage;
using circlemaps::TrigPoly;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : eng_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }

  // Random trigonometric polynomial with harmonics 1..max_j whose first
  // derivative coefficient bound equals slope (< 1 keeps y + p(y) a diffeo).
  TrigPoly trig_poly(int max_j, double slope) {
    std::vector<Harmonic> hs;
    double bound = 0.0;
    for (int j = 1; j <= max_j; ++j) {
      const double a = uniform(-1.0, 1.0), b = uniform(-1.0, 1.0);
      hs.push_back({j, a, b});
      bound += 2.0 * M_PI * j * (std::abs(a) + std::abs(b));
    }
    for (auto& h : hs) {
      h.a *= slope / bound;
      h.b *= slope / bound;
    }
    return TrigPoly(uniform(-0.2, 0.2), hs);
  }

  CircleMap composed(int max_stages, int max_j, double slope) {
    std::vector<Stage> stages(static_cast<std::size_t>(integer(1, max_stages)));
    for (auto& s : stages) {
      s.shift = uniform(-1.0, 1.0);
      s.periodic = trig_poly(integer(1, max_j), uniform(0.0, slope));
    }
    return CircleMap(std::move(stages));
  }

  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

template <class Fn>
void for_all(int cases, std::uint64_t seed, Fn&& fn) {
  Gen g(seed);
  for (int i = 0; i < cases; ++i) fn(g);
}

inline long double frac(long double v) { return v - std::floor(v); }

// Composed lift evaluated directly from the stage coefficients in extended
// precision, without going through TrigPoly.
inline long double lift_ld(const CircleMap& map, long double y) {
  constexpr long double two_pi = 6.283185307179586476925286766559L;
  for (const auto& s : map.stages()) {
    long double p = s.periodic.const_term();
    for (const auto& h : s.periodic.harmonics()) {
      const long double arg = two_pi * h.j * y;
      p += h.a * std::cos(arg) + h.b * std::sin(arg);
    }
    y = y + s.shift + p;
  }
  return y;
}

// Central-difference derivative of order 1..3 with two Richardson steps.
template <class Fn>
long double fd_derivative(Fn&& f, long double x, int order, long double h) {
  const auto stencil = [&](long double s) -> long double {
    switch (order) {
      case 1:
        return (f(x + s) - f(x - s)) / (2 * s);
      case 2:
        return (f(x + s) - 2 * f(x) + f(x - s)) / (s * s);
      default:
        return (f(x + 2 * s) - 2 * f(x + s) + 2 * f(x - s) - f(x - 2 * s)) / (2 * s * s * s);
    }
  };
  const long double d0 = stencil(h), d1 = stencil(h / 2), d2 = stencil(h / 4);
  const long double r0 = (4 * d1 - d0) / 3, r1 = (4 * d2 - d1) / 3;
  return (16 * r1 - r0) / 15;
}

inline double circular_distance(double a, double b) {
  const double d = std::abs(a - b);
  const double r = d - std::floor(d);
  return std::min(r, 1.0 - r);
}

}  // namespace support
