#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "circlemaps/circle_map.hpp"
#include "circlemaps/family.hpp"
#include "circlemaps/rotation.hpp"

namespace circlemaps {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// a(t) cos(2 pi (jx x + jy y)) + b(t) sin(2 pi (jx x + jy y))
struct SkewMode {
  int jx = 0;
  int jy = 1;
  TPoly a;
  TPoly b;
};

// Torus map (x, y) -> (m x, y + t + g_t(x, y)) mod 1 with g_t a sum of modes.
class SkewMap {
 public:
  SkewMap(int m, std::vector<SkewMode> modes, std::string label = {});

  // g_t(x, y) = amplitude sin(2 pi y), independent of x.
  static SkewMap arnold_fiber(int m, double amplitude, std::string label = {});

  int m() const noexcept { return m_; }
  const std::vector<SkewMode>& modes() const noexcept { return modes_; }
  const std::string& label() const noexcept { return label_; }
  bool t_periodic() const;

  double g(double t, double x, double y) const;

 private:
  int m_;
  std::vector<SkewMode> modes_;
  std::string label_;
};

struct TorusPoint {
  Rational x;
  double y = 0.0;
};

// One step of the torus map; the x-coordinate stays exact.
TorusPoint skew_apply(const SkewMap& f, double t, const TorusPoint& p);
std::pair<double, double> skew_apply(const SkewMap& f, double t, double x, double y);

// Vertical circle over x0 = k / (m^n - 1), invariant under the n-th iterate.
// n is the minimal period and k is taken relative to that n.
struct PeriodicCircle {
  BigInt k;
  int n = 1;
  Rational x0;

  std::string name() const;
};

// The x-orbit x0, m x0, ..., m^(n-1) x0 mod 1, exact.
std::vector<Rational> circle_orbit(int m, const PeriodicCircle& c);

// Every periodic circle with minimal period n <= n_max, each rational stored
// once, sorted by (n, k). Throws std::invalid_argument when m^n_max exceeds
// 2^24, the enumeration being exhaustive.
std::vector<PeriodicCircle> periodic_circles(int m, int n_max);

// First circle of each exact period 1..n_max in (n, k) order.
std::vector<PeriodicCircle> first_circle_per_period(int m, int n_max);

// The n-th iterate restricted to a periodic circle, as a family in t:
//   theta -> theta + n t + G_t(theta),
// composed from the n fiber maps along the exact x-orbit.
class RestrictedFamily final : public ParamFamily {
 public:
  // Throws DegenerateFiber when some fiber map is not a diffeomorphism at
  // one of the t_checks sampled parameters.
  RestrictedFamily(const SkewMap& f, PeriodicCircle circle, int t_checks = 65);

  const PeriodicCircle& circle() const noexcept { return circle_; }

  CircleMap at(double t) const override;
  int winding() const override { return circle_.n; }
  bool t_periodic() const override { return t_periodic_; }
  std::string label() const override { return label_; }
  double displacement_bound() const override { return displacement_bound_; }
  FamilyNorm norm(const NormGrid& grid) const override;

 private:
  // Mode evaluated on the fiber over a fixed x: the phase 2 pi jx x is folded
  // into cos/sin weights.
  struct FiberMode {
    int jy;
    double cos_phase;
    double sin_phase;
    TPoly a, b, da, db;
  };
  struct Fiber {
    std::vector<FiberMode> modes;
  };

  Stage stage(const Fiber& fiber, double t) const;

  PeriodicCircle circle_;
  std::vector<Fiber> fibers_;
  bool t_periodic_ = true;
  double displacement_bound_ = 0.0;
  std::string label_;
};

struct A3Result {
  double sup_c3 = 0.0;  // max over the (t, y) grid of |G^(k)|, k = 0..3
  double bound = 0.0;   // sup_c3 widened by half a y-spacing times the next derivative
  bool passes = false;  // bound < R
};

// C^3 distance in y of the restricted map from theta + n t, maximized over
// t = i / (t_grid - 1) and y = j / y_grid using exact chain-rule jets.
A3Result a3_check(const RestrictedFamily& rf, double R, int t_grid = 65, int y_grid = kDefaultNormGrid);

struct QuasiHit {
  PeriodicCircle circle;
  RotationResult rotation;
};

struct QuasiSearchOptions {
  int n_max = 6;
  int q_max = 30;
  // Keep only circles passing a3_check with this R; empty keeps all.
  std::optional<double> R;
  long n_iter = 2000;
  int grid = 0;
  int a3_t_grid = 17;
  int a3_y_grid = 1024;
};

// Precomputes the circles and restricted families of a skew map so that many
// parameters can be searched. Immutable after construction.
class QuasiSearcher {
 public:
  QuasiSearcher(const SkewMap& f, const QuasiSearchOptions& options);

  // First circle, in (n, k) order, whose restricted map at t classifies as
  // IrrationalCandidate.
  std::optional<QuasiHit> search(double t) const;

  const std::vector<RestrictedFamily>& families() const noexcept { return families_; }
  const std::vector<A3Result>& a3() const noexcept { return a3_; }
  // Indices into families() that take part in the search.
  const std::vector<std::size_t>& admitted() const noexcept { return admitted_; }

 private:
  QuasiSearchOptions options_;
  std::vector<RestrictedFamily> families_;
  std::vector<A3Result> a3_;
  std::vector<std::size_t> admitted_;
};

std::optional<QuasiHit> quasi_search(const SkewMap& f, double t, const QuasiSearchOptions& options);

}  // namespace circlemaps
