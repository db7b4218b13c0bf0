#pragma once

#include <string>
#include <utility>
#include <vector>

#include "circlemaps/trig_poly.hpp"

namespace circlemaps {

// One orientation-preserving step y -> y + shift + periodic(y).
// The *_rate members hold the parameter derivatives d/dt of shift and of the
// periodic part, so that d/dt of a composed lift can be propagated exactly.
struct Stage {
  double shift = 0.0;
  TrigPoly periodic;
  double shift_rate = 0.0;
  TrigPoly periodic_rate;
};

// Lift of a circle map written as a composition of stages, applied in order.
// A single stage covers theta + N t + g_t(theta); several stages cover the
// return maps of skew products on periodic circles.
class CircleMap {
 public:
  CircleMap() = default;
  explicit CircleMap(std::vector<Stage> stages);

  static CircleMap rotation(double alpha);

  const std::vector<Stage>& stages() const noexcept { return stages_; }

  double lift(double y) const;

  // Lift value and y-derivatives up to order 4 (Faa di Bruno through stages).
  Derivs lift_derivs(double y) const;

  // Lift value and its derivative with respect to the family parameter.
  std::pair<double, double> lift_with_rate(double y) const;

  double iterate(double y, long n) const;

  // Bounds lo <= Lift'(y) <= hi valid for every y, from per-stage
  // coefficient bounds. lo may be <= 0 when no certificate is available.
  std::pair<double, double> slope_bounds() const;

  // sup |sum of periodic parts| bound, i.e. |Lift(y) - y - sum shifts|.
  double displacement_bound() const;

 private:
  std::vector<Stage> stages_;
};

double iterate_lift(const CircleMap& map, double theta, long n);

struct FamilyNorm {
  double c3_g = 0.0;   // sup over t of the C^3 norm of g_t in theta
  double c0_dt = 0.0;  // sup over t, theta of |d/dt g_t(theta)|
  double value = 0.0;  // max(c3_g, c0_dt)
};

struct NormGrid {
  int theta = kDefaultNormGrid;
  int t = 65;
};

// A one-parameter family t -> f_t of circle maps whose lifts have the form
// theta + N t + G_t(theta) with G_t 1-periodic. Implementations are immutable
// and safe to share between threads.
class ParamFamily {
 public:
  virtual ~ParamFamily() = default;

  virtual CircleMap at(double t) const = 0;
  virtual int winding() const = 0;
  // True when f_{t+1} = f_t + N for all real t, so parameter windows can be
  // reported modulo 1 on the whole line.
  virtual bool t_periodic() const = 0;
  virtual std::string label() const = 0;
  // Upper bound on sup_{t in [0,1], theta} |G_t(theta)|.
  virtual double displacement_bound() const = 0;
  virtual FamilyNorm norm(const NormGrid& grid) const = 0;
};

}  // namespace circlemaps
