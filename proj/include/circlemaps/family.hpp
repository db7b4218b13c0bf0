#pragma once

#include <string>
#include <vector>

#include "circlemaps/circle_map.hpp"
#include "circlemaps/trig_poly.hpp"

namespace circlemaps {

// Polynomial in the family parameter t, coefficients in ascending powers.
using TPoly = std::vector<double>;

double eval_tpoly(const TPoly& poly, double t);
TPoly derivative(const TPoly& poly);
// Coefficients of s -> poly(a + b s).
TPoly affine_substitute(const TPoly& poly, double a, double b);
// Bound on sup_{t in [0,1]} |poly(t)|.
double tpoly_bound(const TPoly& poly);

struct FamilyHarmonic {
  int j = 1;
  TPoly a;  // cosine coefficient as a polynomial in t
  TPoly b;  // sine coefficient as a polynomial in t
};

// f_t(theta) = theta + N t + g_t(theta) where g_t is a trigonometric
// polynomial in theta whose coefficients are polynomials in t.
class CircleFamily final : public ParamFamily {
 public:
  CircleFamily(int winding, TPoly const_term, std::vector<FamilyHarmonic> harmonics,
               std::string label = {});

  // theta + t + amplitude sin(2 pi theta)
  static CircleFamily arnold(double amplitude, std::string label = {});
  static CircleFamily rigid(int winding = 1);

  const TPoly& const_term() const noexcept { return const_term_; }
  const std::vector<FamilyHarmonic>& harmonics() const noexcept { return harmonics_; }

  TrigPoly g(double t) const;
  TrigPoly g_rate(double t) const;

  // Same winding, periodic part multiplied by factor.
  CircleFamily scaled(double factor, std::string label = {}) const;

  CircleMap at(double t) const override;
  int winding() const override { return winding_; }
  bool t_periodic() const override;
  std::string label() const override { return label_; }
  double displacement_bound() const override;
  FamilyNorm norm(const NormGrid& grid) const override;

 private:
  int winding_;
  TPoly const_term_;
  std::vector<FamilyHarmonic> harmonics_;
  std::string label_;
};

double eval_lift(const CircleFamily& f, double t, double theta);

// Throws DegenerateFamily unless 1 + d/dtheta g_t > 0 (certified on the grid
// with a Lipschitz margin) and sup |d/dt g_t| < N at every sampled t.
void validate(const CircleFamily& f, const NormGrid& grid = {});

// Validates, then returns the family norm max(sup_t ||g_t||_C3, sup |d/dt g_t|).
FamilyNorm family_norm(const CircleFamily& f, const NormGrid& grid = {});

// The family restricted to t in [a, b] and rescaled to s in [0, 1]:
//   theta + N (a + (b - a) s) + g_{a + (b - a) s}(theta).
// The integer part k = round(N (b - a)) (at least 1) becomes the new winding;
// the remaining affine drift moves into the constant term.
CircleFamily renormalize(const CircleFamily& f, double a, double b);

}  // namespace circlemaps
