#pragma once

#include <array>
#include <vector>

namespace circlemaps {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// Default number of sample points used for sup norms over one period.
inline constexpr int kDefaultNormGrid = 4096;

// a cos(2 pi j x) + b sin(2 pi j x)
struct Harmonic {
  int j = 1;
  double a = 0.0;
  double b = 0.0;
};

// Value and derivatives of a scalar function at a point, orders 0..4.
using Derivs = std::array<double, 5>;

// Finite real trigonometric polynomial with period 1:
//   p(x) = c0 + sum_j a_j cos(2 pi j x) + b_j sin(2 pi j x).
// Harmonics with equal j are merged on construction; j must be positive.
class TrigPoly {
 public:
  TrigPoly() = default;
  TrigPoly(double const_term, std::vector<Harmonic> harmonics);

  double const_term() const noexcept { return const_term_; }
  const std::vector<Harmonic>& harmonics() const noexcept { return harmonics_; }
  bool is_zero() const noexcept;
  int degree() const noexcept;

  double operator()(double x) const;
  double derivative(double x, int order) const;
  Derivs derivs(double x) const;

  // sum_j (2 pi j)^k (|a_j| + |b_j|), plus |c0| when k == 0. Dominates sup|p^(k)|.
  double coefficient_bound(int order) const;

  TrigPoly scaled(double factor) const;
  friend TrigPoly operator+(const TrigPoly& lhs, const TrigPoly& rhs);

 private:
  double const_term_ = 0.0;
  std::vector<Harmonic> harmonics_;
};

// Certified upper bound on sup |p^(order)| over one period: the maximum over
// a uniform grid plus half a grid spacing times the next-order coefficient
// bound, capped by the coefficient bound of the requested order.
double sup_norm(const TrigPoly& p, int order, int grid = kDefaultNormGrid);

// max over orders 0..3 of sup |p^(k)|.
double c3_norm(const TrigPoly& p, int grid = kDefaultNormGrid);

}  // namespace circlemaps
