#include "circlemaps/rotation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "circlemaps/errors.hpp"
#include "circlemaps/farey.hpp"

namespace circlemaps {

std::string to_string(Classification c) {
  switch (c) {
    case Classification::Locked:
      return "Locked";
    case Classification::IrrationalCandidate:
      return "IrrationalCandidate";
    case Classification::Unresolved:
      return "Unresolved";
  }
  return "Unknown";
}

std::string to_string(LockStatus s) {
  switch (s) {
    case LockStatus::Locked:
      return "Locked";
    case LockStatus::NotLocked:
      return "NotLocked";
    case LockStatus::Unresolved:
      return "Unresolved";
  }
  return "Unknown";
}

RotationResult rho_estimate(const CircleMap& map, double theta0, long n_iter) {
  if (n_iter < 1) throw std::invalid_argument("rho_estimate: n_iter must be >= 1");
  // Iterate on the fractional part and count whole turns separately so the
  // lift never grows large enough to lose precision.
  const double start = theta0 - std::floor(theta0);
  double y = start;
  double turns = 0.0;
  for (long i = 0; i < n_iter; ++i) {
    y = map.lift(y);
    const double k = std::floor(y);
    y -= k;
    turns += k;
  }
  RotationResult r;
  r.n_iter = n_iter;
  r.lift_estimate = (turns + (y - start)) / static_cast<double>(n_iter);
  r.estimate = r.lift_estimate - std::floor(r.lift_estimate);
  if (r.estimate >= 1.0) r.estimate = 0.0;
  r.error_bound = 1.0 / static_cast<double>(n_iter);
  r.classification = Classification::Unresolved;
  return r;
}

int default_lock_grid(int q) {
  if (q <= 20) return 4096;
  const int extra = (q - 20 + 9) / 10;
  return 4096 << std::min(extra, 8);
}

namespace {

// Grid indices in coarse-to-fine (bit-reversed) order so a lock with both
// signs present is usually detected after a handful of evaluations.
const std::vector<int>& scan_order(int grid) {
  thread_local std::vector<int> order;
  thread_local int cached = 0;
  if (cached == grid) return order;
  int bits = 0;
  while ((1 << bits) < grid) ++bits;
  order.clear();
  order.reserve(static_cast<std::size_t>(grid));
  for (int i = 0; i < (1 << bits); ++i) {
    int r = 0;
    for (int b = 0; b < bits; ++b) r |= ((i >> b) & 1) << (bits - 1 - b);
    if (r < grid) order.push_back(r);
  }
  cached = grid;
  return order;
}

}  // namespace

LockTest is_locked(const CircleMap& map, std::int64_t p_lift, int q, int grid) {
  if (q < 1) throw std::invalid_argument("is_locked: q must be positive");
  if (gcd(p_lift, q) != 1) throw std::invalid_argument("is_locked: p and q must be coprime");
  LockTest out;
  out.grid = grid > 0 ? grid : default_lock_grid(q);
  const double h = 1.0 / out.grid;
  const double p = static_cast<double>(p_lift);
  const auto D = [&](double theta) { return map.iterate(theta, q) - theta - p; };

  const double noise = 1e-12 * (1.0 + std::abs(p) + q * static_cast<double>(map.stages().size()));
  const auto [slope_lo, slope_hi] = map.slope_bounds();
  const double lip = std::max(std::pow(slope_hi, q) - 1.0, 1.0 - std::pow(slope_lo, q));
  // Between grid points D moves by at most h (monotone lift) and by at most
  // half a spacing times its Lipschitz constant.
  out.margin = std::min(h, 0.5 * h * lip);

  double theta_min = 0.0, theta_max = 0.0;
  out.d_min = std::numeric_limits<double>::infinity();
  out.d_max = -std::numeric_limits<double>::infinity();
  for (int idx : scan_order(out.grid)) {
    const double theta = idx * h;
    const double d = D(theta);
    if (std::abs(d) <= noise) {
      out.status = LockStatus::Locked;
      out.witness = theta;
      out.residual = std::abs(d);
      out.d_min = std::min(out.d_min, d);
      out.d_max = std::max(out.d_max, d);
      return out;
    }
    if (d < out.d_min) {
      out.d_min = d;
      theta_min = theta;
    }
    if (d > out.d_max) {
      out.d_max = d;
      theta_max = theta;
    }
    if (out.d_min < 0.0 && out.d_max > 0.0) break;
  }

  if (out.d_min < 0.0 && out.d_max > 0.0) {
    // D is 1-periodic, so walk from a negative point forward to a positive one.
    double lo = theta_min;
    double hi = theta_max < lo ? theta_max + 1.0 : theta_max;
    double best = lo;
    double best_abs = std::abs(out.d_min);
    for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const double d = D(mid);
      if (std::abs(d) < best_abs) {
        best_abs = std::abs(d);
        best = mid;
      }
      if (best_abs <= noise) break;
      if (d < 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    out.status = LockStatus::Locked;
    out.witness = best - std::floor(best);
    out.residual = best_abs;
    return out;
  }

  const double threshold = out.margin + noise;
  if (out.d_min > threshold || out.d_max < -threshold) {
    out.status = LockStatus::NotLocked;
  } else {
    out.status = LockStatus::Unresolved;
  }
  return out;
}

RotationResult classify(const CircleMap& map, const ClassifyOptions& options) {
  if (options.q_max < 1) throw std::invalid_argument("classify: q_max must be >= 1");
  RotationResult r = rho_estimate(map, options.theta0, options.n_iter);
  auto candidates =
      rationals_between(r.lift_estimate - r.error_bound, r.lift_estimate + r.error_bound, options.q_max);
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Fraction& a, const Fraction& b) { return a.q < b.q; });
  bool unresolved = false;
  for (const auto& c : candidates) {
    const LockTest lt = is_locked(map, c.p, static_cast<int>(c.q), options.grid);
    if (lt.status == LockStatus::Locked) {
      r.classification = Classification::Locked;
      r.q = c.q;
      r.p_lift = c.p;
      r.p = ((c.p % c.q) + c.q) % c.q;
      r.witness = lt.witness;
      return r;
    }
    if (lt.status == LockStatus::Unresolved) unresolved = true;
  }
  r.classification = unresolved ? Classification::Unresolved : Classification::IrrationalCandidate;
  return r;
}

double equidistribution_test(const CircleMap& map, double theta0, long n_iter, int bins) {
  if (bins < 1 || n_iter < 1) throw std::invalid_argument("equidistribution_test: need bins, n_iter >= 1");
  std::vector<long> counts(static_cast<std::size_t>(bins), 0);
  double y = theta0 - std::floor(theta0);
  for (long i = 0; i < n_iter; ++i) {
    y = map.lift(y);
    y -= std::floor(y);
    auto b = static_cast<std::size_t>(y * bins);
    if (b >= counts.size()) b = counts.size() - 1;
    ++counts[b];
  }
  double cumulative = 0.0;
  double discrepancy = 0.0;
  for (int b = 0; b < bins; ++b) {
    if (counts[static_cast<std::size_t>(b)] == 0) {
      std::ostringstream os;
      os << "orbit never visits bin " << b << " of " << bins;
      throw EmptyBin(os.str(), b);
    }
    cumulative += static_cast<double>(counts[static_cast<std::size_t>(b)]) / static_cast<double>(n_iter);
    discrepancy = std::max(discrepancy, std::abs(cumulative - static_cast<double>(b + 1) / bins));
  }
  return discrepancy;
}

}  // namespace circlemaps
