#include "circlemaps/circle_map.hpp"

#include <cmath>
#include <stdexcept>

namespace circlemaps {

CircleMap::CircleMap(std::vector<Stage> stages) : stages_(std::move(stages)) {}

CircleMap CircleMap::rotation(double alpha) {
  Stage s;
  s.shift = alpha;
  return CircleMap({s});
}

double CircleMap::lift(double y) const {
  for (const auto& s : stages_) y = y + s.shift + s.periodic(y);
  return y;
}

Derivs CircleMap::lift_derivs(double y) const {
  Derivs u{y, 1.0, 0.0, 0.0, 0.0};
  for (const auto& s : stages_) {
    Derivs f = s.periodic.derivs(u[0]);
    f[0] += u[0] + s.shift;
    f[1] += 1.0;
    const double u1 = u[1], u2 = u[2], u3 = u[3], u4 = u[4];
    const double u1sq = u1 * u1;
    Derivs h;
    h[0] = f[0];
    h[1] = f[1] * u1;
    h[2] = f[2] * u1sq + f[1] * u2;
    h[3] = f[3] * u1sq * u1 + 3.0 * f[2] * u1 * u2 + f[1] * u3;
    h[4] = f[4] * u1sq * u1sq + 6.0 * f[3] * u1sq * u2 + f[2] * (3.0 * u2 * u2 + 4.0 * u1 * u3) +
           f[1] * u4;
    u = h;
  }
  return u;
}

std::pair<double, double> CircleMap::lift_with_rate(double y) const {
  double rate = 0.0;
  for (const auto& s : stages_) {
    const double slope = 1.0 + s.periodic.derivative(y, 1);
    rate = slope * rate + s.shift_rate + s.periodic_rate(y);
    y = y + s.shift + s.periodic(y);
  }
  return {y, rate};
}

double CircleMap::iterate(double y, long n) const {
  if (n < 0) throw std::invalid_argument("CircleMap::iterate: n must be non-negative");
  for (long i = 0; i < n; ++i) y = lift(y);
  return y;
}

std::pair<double, double> CircleMap::slope_bounds() const {
  double lo = 1.0, hi = 1.0;
  for (const auto& s : stages_) {
    const double c = s.periodic.coefficient_bound(1);
    lo *= std::max(0.0, 1.0 - c);
    hi *= 1.0 + c;
  }
  return {lo, hi};
}

double CircleMap::displacement_bound() const {
  double b = 0.0;
  for (const auto& s : stages_) b += s.periodic.coefficient_bound(0);
  return b;
}

double iterate_lift(const CircleMap& map, double theta, long n) {
  if (n < 1) throw std::invalid_argument("iterate_lift: n must be >= 1");
  return map.iterate(theta, n);
}

}  // namespace circlemaps
