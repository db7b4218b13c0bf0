#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "circlemaps/circle_map.hpp"

namespace circlemaps {

enum class Classification { Locked, IrrationalCandidate, Unresolved };

std::string to_string(Classification c);

struct RotationResult {
  double estimate = 0.0;       // rotation number reduced to [0, 1)
  double lift_estimate = 0.0;  // unreduced (Lift^n(theta0) - theta0) / n
  double error_bound = 1.0;    // |estimate - rho| <= error_bound
  long n_iter = 0;
  Classification classification = Classification::Unresolved;
  // Valid when Locked: reduced p/q with 0 <= p < q, and the lift-level
  // numerator p_lift with p_lift / q equal to the unreduced rotation number.
  std::int64_t p = 0;
  std::int64_t q = 0;
  std::int64_t p_lift = 0;
  std::optional<double> witness;  // theta* with Lift^q(theta*) - theta* - p_lift ~ 0
};

// Rotation number from one orbit. The displacement inequality
// |Lift^n(theta) - theta - n rho| < 1 gives error_bound = 1/n.
RotationResult rho_estimate(const CircleMap& map, double theta0, long n_iter);

enum class LockStatus { Locked, NotLocked, Unresolved };

std::string to_string(LockStatus s);

struct LockTest {
  LockStatus status = LockStatus::Unresolved;
  // Extremes of D(theta) = Lift^q(theta) - theta - p_lift over the grid points
  // visited (all of them unless the scan stopped early on a certified lock).
  double d_min = 0.0;
  double d_max = 0.0;
  double margin = 0.0;  // bound on |D(theta) - D(nearest grid point)|
  std::optional<double> witness;
  double residual = 0.0;  // |D(witness)|
  int grid = 0;
};

// Grid resolution used for a period-q lock test when none is given:
// 4096 for q <= 20, doubled for every further 10 in q.
int default_lock_grid(int q);

inline constexpr double kWitnessTolerance = 1e-9;

// Certifies whether the map has a periodic point of lift type p_lift/q.
// Locked when D changes sign on the grid or vanishes to rounding level;
// NotLocked when the grid extremes keep a margin from zero that exceeds the
// worst-case variation of D between grid points. p_lift is the lift-level
// numerator (it may exceed q for maps with large displacement).
LockTest is_locked(const CircleMap& map, std::int64_t p_lift, int q, int grid = 0);

struct ClassifyOptions {
  int q_max = 30;
  long n_iter = 2000;
  double theta0 = 0.0;
  int grid = 0;  // 0 selects default_lock_grid(q) per candidate
};

// Locked on the first certified lock among candidate rationals p/q with
// q <= q_max inside the error bar of the estimate (smallest q first),
// IrrationalCandidate when every candidate certifies NotLocked, and
// Unresolved otherwise.
RotationResult classify(const CircleMap& map, const ClassifyOptions& options = {});

// Star discrepancy of the orbit histogram against the uniform distribution.
// Throws EmptyBin when some bin is never visited.
double equidistribution_test(const CircleMap& map, double theta0, long n_iter, int bins);

}  // namespace circlemaps
