#include "circlemaps/skew_product.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>

#include "circlemaps/errors.hpp"

namespace circlemaps {

namespace {

bool is_constant(const TPoly& p) {
  for (std::size_t i = 1; i < p.size(); ++i) {
    if (p[i] != 0.0) return false;
  }
  return true;
}

double frac(double v) { return v - std::floor(v); }

Rational mul_mod1(const Rational& x, int m) {
  const BigInt num = boost::multiprecision::numerator(x);
  const BigInt den = boost::multiprecision::denominator(x);
  BigInt r = (num * m) % den;
  if (r < 0) r += den;
  return Rational(r, den);
}

// Fractional part of j x for an exact x, as a double in [0, 1).
double phase_of(const Rational& x, int j) {
  const BigInt num = boost::multiprecision::numerator(x);
  const BigInt den = boost::multiprecision::denominator(x);
  BigInt r = (num * j) % den;
  if (r < 0) r += den;
  return Rational(r, den).convert_to<double>();
}

std::int64_t gcd64(std::int64_t a, std::int64_t b) {
  while (b != 0) {
    const std::int64_t r = a % b;
    a = b;
    b = r;
  }
  return a < 0 ? -a : a;
}

// Multiplicative order of m modulo b (b coprime to m), capped at limit + 1.
int order_mod(std::int64_t m, std::int64_t b, int limit) {
  if (b == 1) return 1;
  std::int64_t v = m % b;
  for (int d = 1; d <= limit; ++d) {
    if (v == 1) return d;
    v = (v * m) % b;
  }
  return limit + 1;
}

std::vector<double> t_samples(int count) {
  if (count < 2) throw std::invalid_argument("need at least two t samples");
  std::vector<double> ts(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) ts[static_cast<std::size_t>(i)] = static_cast<double>(i) / (count - 1);
  return ts;
}

// Per-parameter maxima of |G^(k)| over a y grid, G = Lift - y - n t.
struct JetMax {
  std::array<double, 5> m{};
  double rate = 0.0;  // max |d/dt G|
};

JetMax jet_max(const CircleMap& map, double t, int n, int y_grid, bool with_rate) {
  JetMax out;
  const double h = 1.0 / y_grid;
  for (int i = 0; i < y_grid; ++i) {
    const double y = i * h;
    const Derivs d = map.lift_derivs(y);
    const double g[5] = {d[0] - y - n * t, d[1] - 1.0, d[2], d[3], d[4]};
    for (int k = 0; k < 5; ++k) out.m[static_cast<std::size_t>(k)] = std::max(out.m[static_cast<std::size_t>(k)], std::abs(g[k]));
    if (with_rate) out.rate = std::max(out.rate, std::abs(map.lift_with_rate(y).second - n));
  }
  return out;
}

double widened_c3(const JetMax& j, int y_grid) {
  const double half = 0.5 / y_grid;
  double b = 0.0;
  for (int k = 0; k < 4; ++k) b = std::max(b, j.m[static_cast<std::size_t>(k)] + half * j.m[static_cast<std::size_t>(k + 1)]);
  return b;
}

}  // namespace

SkewMap::SkewMap(int m, std::vector<SkewMode> modes, std::string label)
    : m_(m), modes_(std::move(modes)), label_(std::move(label)) {
  if (m_ < 2) throw std::invalid_argument("SkewMap: base m must be >= 2");
}

SkewMap SkewMap::arnold_fiber(int m, double amplitude, std::string label) {
  if (label.empty()) {
    std::ostringstream os;
    os << "arnold-fiber(m=" << m << "," << amplitude << ")";
    label = os.str();
  }
  return SkewMap(m, {{0, 1, {0.0}, {amplitude}}}, std::move(label));
}

bool SkewMap::t_periodic() const {
  return std::all_of(modes_.begin(), modes_.end(),
                     [](const SkewMode& md) { return is_constant(md.a) && is_constant(md.b); });
}

double SkewMap::g(double t, double x, double y) const {
  double v = 0.0;
  for (const auto& md : modes_) {
    const double arg = kTwoPi * (md.jx * x + md.jy * y);
    v += eval_tpoly(md.a, t) * std::cos(arg) + eval_tpoly(md.b, t) * std::sin(arg);
  }
  return v;
}

TorusPoint skew_apply(const SkewMap& f, double t, const TorusPoint& p) {
  TorusPoint out;
  out.x = mul_mod1(p.x, f.m());
  out.y = frac(p.y + t + f.g(t, p.x.convert_to<double>(), p.y));
  return out;
}

std::pair<double, double> skew_apply(const SkewMap& f, double t, double x, double y) {
  return {frac(f.m() * x), frac(y + t + f.g(t, x, y))};
}

std::string PeriodicCircle::name() const {
  std::ostringstream os;
  os << boost::multiprecision::numerator(x0) << "/" << boost::multiprecision::denominator(x0) << "@" << n;
  return os.str();
}

std::vector<Rational> circle_orbit(int m, const PeriodicCircle& c) {
  std::vector<Rational> xs;
  xs.reserve(static_cast<std::size_t>(c.n));
  Rational x = c.x0;
  for (int i = 0; i < c.n; ++i) {
    xs.push_back(x);
    x = mul_mod1(x, m);
  }
  return xs;
}

std::vector<PeriodicCircle> periodic_circles(int m, int n_max) {
  if (m < 2) throw std::invalid_argument("periodic_circles: m must be >= 2");
  if (n_max < 1) throw std::invalid_argument("periodic_circles: n_max must be >= 1");
  constexpr std::int64_t kLimit = std::int64_t{1} << 24;
  std::vector<PeriodicCircle> out;
  std::int64_t power = 1;
  for (int n = 1; n <= n_max; ++n) {
    if (power > kLimit / m) throw std::invalid_argument("periodic_circles: m^n_max is too large to enumerate");
    power *= m;
    const std::int64_t den = power - 1;
    for (std::int64_t k = 0; k < den; ++k) {
      const std::int64_t b = den / gcd64(k, den);
      if (order_mod(m, b, n) != n) continue;
      out.push_back({BigInt(k), n, Rational(BigInt(k), BigInt(den))});
    }
  }
  return out;
}

std::vector<PeriodicCircle> first_circle_per_period(int m, int n_max) {
  std::vector<PeriodicCircle> out;
  for (auto& c : periodic_circles(m, n_max)) {
    if (out.empty() || out.back().n != c.n) out.push_back(std::move(c));
  }
  return out;
}

RestrictedFamily::RestrictedFamily(const SkewMap& f, PeriodicCircle circle, int t_checks)
    : circle_(std::move(circle)) {
  if (circle_.n < 1) throw std::invalid_argument("RestrictedFamily: period must be positive");
  {
    // m^n x0 - x0 must be an integer.
    Rational y = circle_.x0;
    for (int i = 0; i < circle_.n; ++i) y *= f.m();
    if (boost::multiprecision::denominator(Rational(y - circle_.x0)) != 1) {
      throw std::invalid_argument("RestrictedFamily: circle is not periodic for this base");
    }
  }
  t_periodic_ = f.t_periodic();
  for (const Rational& x : circle_orbit(f.m(), circle_)) {
    Fiber fiber;
    for (const auto& md : f.modes()) {
      const double phase = kTwoPi * phase_of(x, md.jx);
      fiber.modes.push_back({md.jy, std::cos(phase), std::sin(phase), md.a, md.b, derivative(md.a), derivative(md.b)});
      displacement_bound_ += tpoly_bound(md.a) + tpoly_bound(md.b);
    }
    fibers_.push_back(std::move(fiber));
  }
  std::ostringstream os;
  os << f.label() << "@" << circle_.name();
  label_ = os.str();

  const int grid = kDefaultNormGrid;
  const double h = 1.0 / grid;
  for (double t : t_samples(t_checks)) {
    for (std::size_t i = 0; i < fibers_.size(); ++i) {
      const TrigPoly p = stage(fibers_[i], t).periodic;
      if (p.coefficient_bound(1) < 1.0) continue;
      double min_slope = 0.0;
      for (int j = 0; j < grid; ++j) min_slope = std::min(min_slope, p.derivative(j * h, 1));
      if (1.0 + min_slope - 0.5 * h * p.coefficient_bound(2) <= 0.0) {
        std::ostringstream msg;
        msg << "fiber map of '" << f.label() << "' over x = " << circle_orbit(f.m(), circle_)[i]
            << " is not a diffeomorphism at t=" << t;
        throw DegenerateFiber(msg.str());
      }
    }
  }
}

Stage RestrictedFamily::stage(const Fiber& fiber, double t) const {
  double c0 = 0.0, r0 = 0.0;
  std::vector<Harmonic> hs, rs;
  for (const auto& md : fiber.modes) {
    const auto fold = [&](double a, double b) {
      return std::pair{a * md.cos_phase + b * md.sin_phase, b * md.cos_phase - a * md.sin_phase};
    };
    const auto [A, B] = fold(eval_tpoly(md.a, t), eval_tpoly(md.b, t));
    const auto [dA, dB] = fold(eval_tpoly(md.da, t), eval_tpoly(md.db, t));
    if (md.jy == 0) {
      c0 += A;
      r0 += dA;
    } else {
      const int sign = md.jy > 0 ? 1 : -1;
      hs.push_back({std::abs(md.jy), A, sign * B});
      rs.push_back({std::abs(md.jy), dA, sign * dB});
    }
  }
  Stage s;
  s.shift = t;
  s.shift_rate = 1.0;
  s.periodic = TrigPoly(c0, std::move(hs));
  s.periodic_rate = TrigPoly(r0, std::move(rs));
  return s;
}

CircleMap RestrictedFamily::at(double t) const {
  std::vector<Stage> stages;
  stages.reserve(fibers_.size());
  for (const auto& fiber : fibers_) stages.push_back(stage(fiber, t));
  return CircleMap(std::move(stages));
}

FamilyNorm RestrictedFamily::norm(const NormGrid& grid) const {
  FamilyNorm out;
  for (double t : t_samples(grid.t)) {
    const JetMax j = jet_max(at(t), t, circle_.n, grid.theta, true);
    out.c3_g = std::max(out.c3_g, widened_c3(j, grid.theta));
    out.c0_dt = std::max(out.c0_dt, j.rate);
  }
  out.value = std::max(out.c3_g, out.c0_dt);
  return out;
}

A3Result a3_check(const RestrictedFamily& rf, double R, int t_grid, int y_grid) {
  if (y_grid < 2) throw std::invalid_argument("a3_check: y grid too coarse");
  A3Result out;
  for (double t : t_samples(t_grid)) {
    const JetMax j = jet_max(rf.at(t), t, rf.winding(), y_grid, false);
    for (int k = 0; k < 4; ++k) out.sup_c3 = std::max(out.sup_c3, j.m[static_cast<std::size_t>(k)]);
    out.bound = std::max(out.bound, widened_c3(j, y_grid));
  }
  out.passes = out.bound < R;
  return out;
}

QuasiSearcher::QuasiSearcher(const SkewMap& f, const QuasiSearchOptions& options) : options_(options) {
  for (auto& c : periodic_circles(f.m(), options.n_max)) families_.emplace_back(f, std::move(c));
  for (std::size_t i = 0; i < families_.size(); ++i) {
    if (options.R) {
      a3_.push_back(a3_check(families_[i], *options.R, options.a3_t_grid, options.a3_y_grid));
      if (!a3_.back().passes) continue;
    }
    admitted_.push_back(i);
  }
}

std::optional<QuasiHit> QuasiSearcher::search(double t) const {
  ClassifyOptions co;
  co.q_max = options_.q_max;
  co.n_iter = options_.n_iter;
  co.grid = options_.grid;
  for (std::size_t i : admitted_) {
    RotationResult r = classify(families_[i].at(t), co);
    if (r.classification == Classification::IrrationalCandidate) return QuasiHit{families_[i].circle(), r};
  }
  return std::nullopt;
}

std::optional<QuasiHit> quasi_search(const SkewMap& f, double t, const QuasiSearchOptions& options) {
  return QuasiSearcher(f, options).search(t);
}

}  // namespace circlemaps
