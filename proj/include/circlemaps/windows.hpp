#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "circlemaps/circle_map.hpp"
#include "circlemaps/family.hpp"
#include "circlemaps/rotation.hpp"

namespace circlemaps {

// Mode-locking window of a family for the rotation number p/q.
struct Window {
  std::int64_t p = 0;       // reduced, 0 <= p < q
  std::int64_t q = 1;
  std::int64_t p_lift = 0;  // lift-level numerator: rho_lift = p_lift / q on the window
  double t_lo = 0.0;
  double t_hi = 0.0;
  double bracket_radius = 0.0;  // each endpoint is within this distance of the true boundary
  bool point = false;           // narrower than the tolerance; width reported as 0
  bool clipped_lo = false;      // window continues below the parameter domain
  bool clipped_hi = false;

  double width() const noexcept { return point ? 0.0 : t_hi - t_lo; }
  double value() const noexcept { return static_cast<double>(p_lift) / static_cast<double>(q); }
};

struct WindowOptions {
  long n_iter = 2000;       // orbit length for the quick rotation-number side test
  int grid = 0;             // lock-test grid, 0 = default_lock_grid(q)
  int max_bisections = 64;
  unsigned workers = 1;
};

// Locates the connected window of lift type p_lift/q inside [t_lo, t_hi].
// The lower edge solves max_theta D_t = 0 and the upper edge
// min_theta D_t = 0, with D_t(theta) = Lift_t^q(theta) - theta - p_lift; both
// are monotone in t, so plain bisection brackets them to within tol / 4.
// Returns a point window when the rotation number crosses p/q without a
// lock wider than tol. Throws NoLockInBracket when p/q is not attained.
Window window_boundaries(const ParamFamily& f, std::int64_t p_lift, int q, double t_lo, double t_hi,
                         double tol, const WindowOptions& options = {});

// One window per reduced rational with q <= q_max in the rotation range of
// the family, in Farey order. For t-periodic families the range is [0, N)
// and windows may straddle t = 0; otherwise t is confined to [0, 1].
std::vector<Window> enumerate_windows(const ParamFamily& f, int q_max, double tol,
                                      const WindowOptions& options = {});

struct LockedFraction {
  long samples = 0;
  long locked = 0;
  long unresolved = 0;

  double fraction() const noexcept { return samples ? static_cast<double>(locked) / samples : 0.0; }
  double unresolved_fraction() const noexcept {
    return samples ? static_cast<double>(unresolved) / samples : 0.0;
  }
  double stderr_() const noexcept;
};

// Monte Carlo fraction of uniformly drawn t in [0, 1) whose map is Locked.
LockedFraction mc_locked_fraction(const ParamFamily& f, long samples, std::uint64_t seed,
                                  const ClassifyOptions& classify_options, unsigned workers = 1);

struct LockedMeasure {
  double lower = 0.0;            // sum of certified window widths
  double mc = 0.0;               // Monte Carlo locked fraction
  double unresolved_frac = 0.0;
  double mc_stderr = 0.0;
  long samples = 0;
  int q_max = 0;
  std::uint64_t seed = 0;
};

LockedMeasure locked_measure(const ParamFamily& f, int q_max, long mc_samples, double tol, std::uint64_t seed,
                             const WindowOptions& options = {});

struct TongueRow {
  double delta = 0.0;
  std::vector<Window> windows;
};

struct TongueDiagram {
  std::string label;
  int q_max = 0;
  double tol = 0.0;
  std::vector<TongueRow> rows;
};

// Windows of shape.scaled(delta) for every delta; throws DegenerateFamily when
// a scaled family stops being a diffeomorphism.
TongueDiagram tongue_diagram(const CircleFamily& shape, std::span<const double> deltas, int q_max, double tol,
                             const WindowOptions& options = {});

struct ScalingFit {
  double exponent = 0.0;
  double r_squared = 0.0;
  std::size_t points = 0;
};

// Least-squares slope of log(width) against log(q) over windows with
// positive width. Throws InsufficientData with fewer than three such windows
// or a single distinct q.
ScalingFit scaling_fit(std::span<const Window> windows);

}  // namespace circlemaps
