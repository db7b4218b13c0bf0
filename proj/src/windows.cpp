#include "circlemaps/windows.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "circlemaps/errors.hpp"
#include "circlemaps/farey.hpp"
#include "circlemaps/parallel.hpp"
#include "circlemaps/rng.hpp"

namespace circlemaps {

namespace {

enum class Side { Below, Inside, Above };

Side side_at(const ParamFamily& f, double t, std::int64_t p_lift, int q, const WindowOptions& opt) {
  const CircleMap map = f.at(t);
  const double target = static_cast<double>(p_lift) / q;
  const RotationResult r = rho_estimate(map, 0.0, opt.n_iter);
  if (r.lift_estimate - r.error_bound > target) return Side::Above;
  if (r.lift_estimate + r.error_bound < target) return Side::Below;
  const LockTest lt = is_locked(map, p_lift, q, opt.grid);
  if (lt.status == LockStatus::Locked) return Side::Inside;
  return lt.d_min > 0.0 ? Side::Above : Side::Below;
}

// max_theta (or min_theta) of D(theta) = Lift^q(theta) - theta - p_lift:
// grid scan followed by golden-section refinement around the best cell.
double extreme_of_displacement(const CircleMap& map, std::int64_t p_lift, int q, int grid, bool maximize) {
  const int n = grid > 0 ? grid : default_lock_grid(q);
  const double h = 1.0 / n;
  const double p = static_cast<double>(p_lift);
  const double sign = maximize ? 1.0 : -1.0;
  const auto score = [&](double theta) { return sign * (map.iterate(theta, q) - theta - p); };
  int best_i = 0;
  double best = score(0.0);
  for (int i = 1; i < n; ++i) {
    const double s = score(i * h);
    if (s > best) {
      best = s;
      best_i = i;
    }
  }
  constexpr double kInvPhi = 0.6180339887498949;
  double a = (best_i - 1) * h, b = (best_i + 1) * h;
  double c = b - kInvPhi * (b - a), d = a + kInvPhi * (b - a);
  double sc = score(c), sd = score(d);
  for (int it = 0; it < 80 && b - a > 1e-15; ++it) {
    if (sc > sd) {
      b = d;
      d = c;
      sd = sc;
      c = b - kInvPhi * (b - a);
      sc = score(c);
    } else {
      a = c;
      c = d;
      sc = sd;
      d = a + kInvPhi * (b - a);
      sd = score(d);
    }
  }
  best = std::max({best, sc, sd});
  return sign * best;
}

// Smallest t in (lo, hi] with pred(t) true, given pred(lo) false and pred(hi)
// true; returns the bracket midpoint and radius.
template <class Pred>
std::pair<double, double> bisect(double lo, double hi, double tol, int max_iter, Pred&& pred) {
  for (int it = 0; it < max_iter && 0.5 * (hi - lo) > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (pred(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return {0.5 * (lo + hi), 0.5 * (hi - lo)};
}

}  // namespace

double LockedFraction::stderr_() const noexcept {
  if (samples == 0) return 0.0;
  const double p = fraction();
  return std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
}

Window window_boundaries(const ParamFamily& f, std::int64_t p_lift, int q, double t_lo, double t_hi, double tol,
                         const WindowOptions& opt) {
  if (q < 1 || gcd(p_lift, q) != 1) throw std::invalid_argument("window_boundaries: need reduced p/q");
  if (!(t_hi > t_lo) || !(tol > 0.0)) throw std::invalid_argument("window_boundaries: bad bracket or tol");

  Window w;
  w.q = q;
  w.p_lift = p_lift;
  w.p = ((p_lift % q) + q) % q;

  const Side s_lo = side_at(f, t_lo, p_lift, q, opt);
  const Side s_hi = side_at(f, t_hi, p_lift, q, opt);
  if (s_lo == Side::Above || s_hi == Side::Below) {
    std::ostringstream os;
    os << "rotation number " << p_lift << "/" << q << " is not attained for t in [" << t_lo << ", " << t_hi << "]";
    throw NoLockInBracket(os.str());
  }

  double below = t_lo, above = t_hi;
  std::optional<double> seed;
  if (s_lo == Side::Inside) {
    seed = t_lo;
    w.clipped_lo = true;
  }
  if (s_hi == Side::Inside) {
    if (!seed) seed = t_hi;
    w.clipped_hi = true;
  }
  for (int it = 0; !seed && it < opt.max_bisections && above - below > tol; ++it) {
    const double mid = 0.5 * (below + above);
    switch (side_at(f, mid, p_lift, q, opt)) {
      case Side::Inside:
        seed = mid;
        break;
      case Side::Below:
        below = mid;
        break;
      case Side::Above:
        above = mid;
        break;
    }
  }
  if (!seed) {
    w.point = true;
    w.t_lo = w.t_hi = 0.5 * (below + above);
    w.bracket_radius = 0.5 * (above - below);
    return w;
  }

  // Edges are bracketed to a quarter of tol so that a window of zero width
  // always measures below tol.
  const double edge_tol = 0.25 * tol;
  double radius = 0.0;
  if (w.clipped_lo) {
    w.t_lo = t_lo;
  } else {
    const auto upper_extreme_nonneg = [&](double t) {
      return extreme_of_displacement(f.at(t), p_lift, q, opt.grid, true) >= 0.0;
    };
    const auto [mid, r] = bisect(below, *seed, edge_tol, opt.max_bisections, upper_extreme_nonneg);
    w.t_lo = mid;
    radius = std::max(radius, r);
  }
  if (w.clipped_hi) {
    w.t_hi = t_hi;
  } else {
    const auto lower_extreme_pos = [&](double t) {
      return extreme_of_displacement(f.at(t), p_lift, q, opt.grid, false) > 0.0;
    };
    const auto [mid, r] = bisect(*seed, above, edge_tol, opt.max_bisections, lower_extreme_pos);
    w.t_hi = mid;
    radius = std::max(radius, r);
  }
  w.bracket_radius = radius;
  if (w.t_hi - w.t_lo < tol) {
    w.point = true;
    const double c = 0.5 * (w.t_lo + w.t_hi);
    w.t_lo = w.t_hi = c;
  }
  return w;
}

std::vector<Window> enumerate_windows(const ParamFamily& f, int q_max, double tol, const WindowOptions& opt) {
  if (q_max < 1) throw std::invalid_argument("enumerate_windows: q_max must be >= 1");
  const double n = f.winding();
  const double m = f.displacement_bound();
  const bool periodic = f.t_periodic();

  std::vector<Fraction> targets;
  if (periodic) {
    targets = rationals_between(0.0, n, q_max);
    if (!targets.empty() && targets.back().value() >= n) targets.pop_back();
  } else {
    const RotationResult r0 = rho_estimate(f.at(0.0), 0.0, opt.n_iter);
    const RotationResult r1 = rho_estimate(f.at(1.0), 0.0, opt.n_iter);
    targets = rationals_between(r0.lift_estimate - r0.error_bound, r1.lift_estimate + r1.error_bound, q_max);
  }

  // |rho(f_t) - N t| <= sup |G_t|, so the window of p/q lies inside this bracket.
  const double eps = 1e-9 + tol;
  std::vector<std::optional<Window>> slots(targets.size());
  parallel_for(targets.size(), opt.workers, [&](std::size_t i) {
    const double target = targets[i].value();
    double lo = (target - m) / n - eps;
    double hi = (target + m) / n + eps;
    if (!periodic) {
      lo = std::max(lo, 0.0);
      hi = std::min(hi, 1.0);
      if (!(hi > lo)) return;
    }
    try {
      slots[i] = window_boundaries(f, targets[i].p, static_cast<int>(targets[i].q), lo, hi, tol, opt);
    } catch (const NoLockInBracket&) {
      // Not in the rotation range of a non-periodic family.
    }
  });

  std::vector<Window> out;
  for (auto& s : slots) {
    if (s) out.push_back(*s);
  }
  return out;
}

LockedFraction mc_locked_fraction(const ParamFamily& f, long samples, std::uint64_t seed,
                                  const ClassifyOptions& classify_options, unsigned workers) {
  if (samples < 1) throw std::invalid_argument("mc_locked_fraction: samples must be >= 1");
  const CounterRng rng(seed);
  std::vector<Classification> cls(static_cast<std::size_t>(samples));
  parallel_for(cls.size(), workers, [&](std::size_t i) {
    cls[i] = classify(f.at(rng.uniform(i)), classify_options).classification;
  });
  LockedFraction out;
  out.samples = samples;
  for (auto c : cls) {
    if (c == Classification::Locked) ++out.locked;
    if (c == Classification::Unresolved) ++out.unresolved;
  }
  return out;
}

LockedMeasure locked_measure(const ParamFamily& f, int q_max, long mc_samples, double tol, std::uint64_t seed,
                             const WindowOptions& opt) {
  LockedMeasure lm;
  lm.q_max = q_max;
  lm.seed = seed;
  lm.samples = mc_samples;
  for (const auto& w : enumerate_windows(f, q_max, tol, opt)) {
    if (!w.point) lm.lower += std::max(0.0, w.width() - 2.0 * w.bracket_radius);
  }
  ClassifyOptions co;
  co.q_max = q_max;
  co.n_iter = opt.n_iter;
  co.grid = opt.grid;
  const LockedFraction lf = mc_locked_fraction(f, mc_samples, seed, co, opt.workers);
  lm.mc = lf.fraction();
  lm.unresolved_frac = lf.unresolved_fraction();
  lm.mc_stderr = lf.stderr_();
  return lm;
}

TongueDiagram tongue_diagram(const CircleFamily& shape, std::span<const double> deltas, int q_max, double tol,
                             const WindowOptions& opt) {
  TongueDiagram d;
  d.label = shape.label();
  d.q_max = q_max;
  d.tol = tol;
  for (double delta : deltas) {
    std::ostringstream label;
    label << shape.label() << "*" << delta;
    const CircleFamily scaled = shape.scaled(delta, label.str());
    validate(scaled, NormGrid{kDefaultNormGrid, scaled.t_periodic() ? 2 : 65});
    d.rows.push_back({delta, enumerate_windows(scaled, q_max, tol, opt)});
  }
  return d;
}

ScalingFit scaling_fit(std::span<const Window> windows) {
  std::vector<double> xs, ys;
  for (const auto& w : windows) {
    if (!w.point && w.width() > 0.0) {
      xs.push_back(std::log(static_cast<double>(w.q)));
      ys.push_back(std::log(w.width()));
    }
  }
  if (xs.size() < 3) throw InsufficientData("scaling_fit: need at least three windows with positive width");
  const double k = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= k;
  my /= k;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx <= 0.0) throw InsufficientData("scaling_fit: all windows share one denominator");
  ScalingFit fit;
  fit.points = xs.size();
  fit.exponent = sxy / sxx;
  const double ss_res = syy - fit.exponent * sxy;
  fit.r_squared = syy > 0.0 ? 1.0 - std::max(0.0, ss_res) / syy : 1.0;
  return fit;
}

}  // namespace circlemaps
