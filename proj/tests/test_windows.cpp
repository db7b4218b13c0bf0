#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "circlemaps/errors.hpp"
#include "circlemaps/family.hpp"
#include "circlemaps/windows.hpp"
#include "support.hpp"

using namespace circlemaps;

namespace {
const double kPi = std::acos(-1.0);

double max_displacement(const CircleFamily& f, double t, std::int64_t p, int q, bool maximize) {
  const CircleMap m = f.at(t);
  double best = maximize ? -1e300 : 1e300;
  for (int i = 0; i < 4096; ++i) {
    const double th = i / 4096.0;
    const double d = m.iterate(th, q) - th - static_cast<double>(p);
    best = maximize ? std::max(best, d) : std::min(best, d);
  }
  return best;
}
}  // namespace

TEST_CASE("Arnold 0/1 window matches the closed form") {
  const Window w = window_boundaries(CircleFamily::arnold(0.1), 0, 1, -0.3, 0.3, 1e-7);
  CHECK(std::abs(w.t_lo + 0.1) <= 1e-6);
  CHECK(std::abs(w.t_hi - 0.1) <= 1e-6);
  CHECK(w.width() == doctest::Approx(0.2).epsilon(1e-5));
  CHECK(w.bracket_radius <= 1e-7);
  CHECK_FALSE(w.point);
}

TEST_CASE("rigid rotation windows are points") {
  const auto ws = enumerate_windows(CircleFamily::rigid(1), 3, 1e-6);
  REQUIRE(ws.size() == 4);
  const double want[] = {0.0, 1.0 / 3.0, 0.5, 2.0 / 3.0};
  for (std::size_t i = 0; i < ws.size(); ++i) {
    CHECK(ws[i].point);
    CHECK(ws[i].width() == 0.0);
    CHECK(ws[i].t_lo == doctest::Approx(want[i]).epsilon(1e-6));
  }
}

TEST_CASE("Arnold q_max 1 and 2") {
  const CircleFamily f = CircleFamily::arnold(0.1);
  const auto one = enumerate_windows(f, 1, 1e-6);
  REQUIRE(one.size() == 1);
  CHECK(one[0].q == 1);
  const auto two = enumerate_windows(f, 2, 1e-6);
  REQUIRE(two.size() == 2);
  CHECK(two[0].q == 1);
  CHECK(two[1].q == 2);
  CHECK(two[1].width() > 0.0);
  CHECK(two[1].width() < two[0].width());
  CHECK(two[0].t_hi < two[1].t_lo);
  CHECK_THROWS_AS(window_boundaries(f, 3, 1, 0.0, 0.5, 1e-6), NoLockInBracket);
}

TEST_CASE("windows are sound, disjoint and Farey ordered") {
  const CircleFamily f = CircleFamily::arnold(0.12);
  const auto ws = enumerate_windows(f, 8, 1e-7);
  for (std::size_t i = 0; i < ws.size(); ++i) {
    const auto& w = ws[i];
    if (i > 0) {
      CHECK(ws[i - 1].value() < w.value());
      CHECK(ws[i - 1].t_hi <= w.t_lo + ws[i - 1].bracket_radius + w.bracket_radius);
    }
    if (w.point) continue;
    const double mid = 0.5 * (w.t_lo + w.t_hi);
    CHECK(is_locked(f.at(mid), w.p_lift, static_cast<int>(w.q)).status == LockStatus::Locked);
    const double off = 10 * w.bracket_radius + 1e-6;
    CHECK(is_locked(f.at(w.t_lo - off), w.p_lift, static_cast<int>(w.q)).status != LockStatus::Locked);
    CHECK(is_locked(f.at(w.t_hi + off), w.p_lift, static_cast<int>(w.q)).status != LockStatus::Locked);
  }
}

TEST_CASE("boundary functions increase in t") {
  const CircleFamily f = CircleFamily::arnold(0.1);
  support::for_all(30, 41, [&](support::Gen& g) {
    const double t = g.uniform(-0.2, 0.8), dt = 1e-3;
    const int q = g.integer(1, 4);
    const std::int64_t p = g.integer(0, q - 1);
    for (bool mx : {true, false}) CHECK(max_displacement(f, t + dt, p, q, mx) > max_displacement(f, t, p, q, mx));
  });
}

TEST_CASE("locked measure") {
  WindowOptions o;
  const LockedMeasure rigid = locked_measure(CircleFamily::rigid(1), 10, 500, 1e-6, 1, o);
  CHECK(rigid.lower == 0.0);
  CHECK(rigid.mc == 0.0);
  const LockedMeasure one = locked_measure(CircleFamily::arnold(0.1), 1, 500, 1e-6, 1, o);
  CHECK(one.lower >= 0.2 - 2e-6);
  const LockedMeasure small = locked_measure(CircleFamily::arnold(0.02), 8, 2000, 1e-6, 1, o);
  const LockedMeasure large = locked_measure(CircleFamily::arnold(0.2 / (2 * kPi)), 8, 2000, 1e-6, 1, o);
  CHECK(small.lower < large.lower);
  for (const auto& m : {small, large}) {
    CHECK(m.lower <= m.mc + m.unresolved_frac + 3 * m.mc_stderr);
    CHECK(m.mc + m.unresolved_frac <= 1.0);
  }
}

TEST_CASE("Monte Carlo fraction is reproducible across worker counts") {
  const CircleFamily f = CircleFamily::arnold(0.1);
  ClassifyOptions co;
  co.q_max = 10;
  const LockedFraction a = mc_locked_fraction(f, 400, 7, co, 1);
  const LockedFraction b = mc_locked_fraction(f, 400, 7, co, 3);
  CHECK(a.locked == b.locked);
  CHECK(a.unresolved == b.unresolved);
  const LockedFraction c = mc_locked_fraction(f, 400, 8, co, 1);
  CHECK(c.samples == 400);
}

TEST_CASE("tongue diagram") {
  const CircleFamily shape = CircleFamily::arnold(1.0);
  const double deltas[] = {0.0, 0.03, 0.06, 0.1};
  const double tol = 1e-6;
  const TongueDiagram d = tongue_diagram(shape, deltas, 5, tol);
  REQUIRE(d.rows.size() == 4);
  for (const auto& w : d.rows[0].windows) CHECK(w.width() == 0.0);
  // Each tongue thickens with delta.
  for (std::size_t r = 1; r < d.rows.size(); ++r) {
    REQUIRE(d.rows[r].windows.size() == d.rows[r - 1].windows.size());
    for (std::size_t i = 0; i < d.rows[r].windows.size(); ++i) {
      CHECK(d.rows[r].windows[i].width() >= d.rows[r - 1].windows[i].width() - 2 * tol);
    }
  }
  const double bad[] = {0.5};
  CHECK_THROWS_AS(tongue_diagram(shape, bad, 3, tol), DegenerateFamily);
}

TEST_CASE("scaling fit") {
  std::vector<Window> ws;
  for (int q : {2, 3, 5, 7, 11}) {
    Window w;
    w.q = q;
    w.t_lo = 0.0;
    w.t_hi = 0.3 * std::pow(q, -3.0);
    ws.push_back(w);
  }
  const ScalingFit fit = scaling_fit(ws);
  CHECK(fit.exponent == doctest::Approx(-3.0).epsilon(1e-9));
  CHECK(fit.r_squared == doctest::Approx(1.0));
  for (auto& w : ws) w.t_hi = 0.01;
  CHECK(std::abs(scaling_fit(ws).exponent) <= 1e-12);
  ws.resize(2);
  CHECK_THROWS_AS(scaling_fit(ws), InsufficientData);

  const auto arnold = enumerate_windows(CircleFamily::arnold(0.1), 8, 1e-7);
  const ScalingFit a = scaling_fit(arnold);
  CHECK(std::isfinite(a.exponent));
  CHECK(a.exponent < 0.0);
}

TEST_CASE("renormalization maps windows affinely") {
  const CircleFamily f = CircleFamily::arnold(0.1);
  const double a = 0.3, b = 0.8, tol = 1e-7;
  const CircleFamily r = renormalize(f, a, b);
  const auto original = enumerate_windows(f, 6, tol);
  const auto renormal = enumerate_windows(r, 6, tol);
  int compared = 0;
  for (const auto& w : original) {
    if (w.point || w.t_lo <= a || w.t_hi >= b) continue;
    const auto it = std::find_if(renormal.begin(), renormal.end(),
                                 [&](const Window& v) { return v.p_lift == w.p_lift && v.q == w.q; });
    REQUIRE(it != renormal.end());
    CHECK(std::abs(a + (b - a) * it->t_lo - w.t_lo) <= 2 * tol);
    CHECK(std::abs(a + (b - a) * it->t_hi - w.t_hi) <= 2 * tol);
    ++compared;
  }
  CHECK(compared >= 3);
}
