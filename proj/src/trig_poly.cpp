#include "circlemaps/trig_poly.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace circlemaps {

namespace {

double fractional(double x) { return x - std::floor(x); }

}  // namespace

TrigPoly::TrigPoly(double const_term, std::vector<Harmonic> harmonics) : const_term_(const_term) {
  std::map<int, Harmonic> merged;
  for (const auto& h : harmonics) {
    if (h.j <= 0) throw std::invalid_argument("TrigPoly: harmonic index must be positive");
    auto& slot = merged[h.j];
    slot.j = h.j;
    slot.a += h.a;
    slot.b += h.b;
  }
  harmonics_.reserve(merged.size());
  for (const auto& [j, h] : merged) {
    if (h.a != 0.0 || h.b != 0.0) harmonics_.push_back(h);
  }
}

bool TrigPoly::is_zero() const noexcept { return const_term_ == 0.0 && harmonics_.empty(); }

int TrigPoly::degree() const noexcept { return harmonics_.empty() ? 0 : harmonics_.back().j; }

double TrigPoly::operator()(double x) const {
  const double u = fractional(x);
  double v = const_term_;
  for (const auto& h : harmonics_) {
    const double arg = kTwoPi * h.j * u;
    v += h.a * std::cos(arg) + h.b * std::sin(arg);
  }
  return v;
}

Derivs TrigPoly::derivs(double x) const {
  const double u = fractional(x);
  Derivs d{const_term_, 0.0, 0.0, 0.0, 0.0};
  for (const auto& h : harmonics_) {
    const double w = kTwoPi * h.j;
    const double c = std::cos(w * u);
    const double s = std::sin(w * u);
    const double even = h.a * c + h.b * s;   // orders 0, 2, 4 up to sign
    const double odd = -h.a * s + h.b * c;   // orders 1, 3 up to sign
    const double w2 = w * w;
    d[0] += even;
    d[1] += w * odd;
    d[2] -= w2 * even;
    d[3] -= w2 * w * odd;
    d[4] += w2 * w2 * even;
  }
  return d;
}

double TrigPoly::derivative(double x, int order) const {
  if (order < 0 || order > 4) throw std::out_of_range("TrigPoly::derivative: order must be in 0..4");
  return derivs(x)[static_cast<std::size_t>(order)];
}

double TrigPoly::coefficient_bound(int order) const {
  double bound = order == 0 ? std::abs(const_term_) : 0.0;
  for (const auto& h : harmonics_) {
    bound += std::pow(kTwoPi * h.j, order) * (std::abs(h.a) + std::abs(h.b));
  }
  return bound;
}

TrigPoly TrigPoly::scaled(double factor) const {
  std::vector<Harmonic> hs = harmonics_;
  for (auto& h : hs) {
    h.a *= factor;
    h.b *= factor;
  }
  return TrigPoly(const_term_ * factor, std::move(hs));
}

TrigPoly operator+(const TrigPoly& lhs, const TrigPoly& rhs) {
  std::vector<Harmonic> hs = lhs.harmonics_;
  hs.insert(hs.end(), rhs.harmonics_.begin(), rhs.harmonics_.end());
  return TrigPoly(lhs.const_term_ + rhs.const_term_, std::move(hs));
}

double sup_norm(const TrigPoly& p, int order, int grid) {
  if (order < 0 || order > 3) throw std::out_of_range("sup_norm: order must be in 0..3");
  if (grid < std::max(2, 2 * p.degree())) {
    throw std::invalid_argument("sup_norm: grid must have at least two points per oscillation");
  }
  const double h = 1.0 / grid;
  double grid_max = 0.0;
  for (int i = 0; i < grid; ++i) {
    grid_max = std::max(grid_max, std::abs(p.derivs(i * h)[static_cast<std::size_t>(order)]));
  }
  const double lipschitz = p.coefficient_bound(order + 1);
  return std::min(p.coefficient_bound(order), grid_max + 0.5 * h * lipschitz);
}

double c3_norm(const TrigPoly& p, int grid) {
  double norm = 0.0;
  for (int k = 0; k <= 3; ++k) norm = std::max(norm, sup_norm(p, k, grid));
  return norm;
}

}  // namespace circlemaps
