#include "circlemaps/family.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "circlemaps/errors.hpp"

namespace circlemaps {

double eval_tpoly(const TPoly& poly, double t) {
  double v = 0.0;
  for (auto it = poly.rbegin(); it != poly.rend(); ++it) v = v * t + *it;
  return v;
}

TPoly derivative(const TPoly& poly) {
  if (poly.size() <= 1) return {};
  TPoly d(poly.size() - 1);
  for (std::size_t i = 1; i < poly.size(); ++i) d[i - 1] = static_cast<double>(i) * poly[i];
  return d;
}

TPoly affine_substitute(const TPoly& poly, double a, double b) {
  // Horner in polynomial arithmetic: result = result * (a + b s) + c_i.
  TPoly result;
  for (auto it = poly.rbegin(); it != poly.rend(); ++it) {
    TPoly next(result.size() + 1, 0.0);
    for (std::size_t i = 0; i < result.size(); ++i) {
      next[i] += a * result[i];
      next[i + 1] += b * result[i];
    }
    next[0] += *it;
    result = std::move(next);
  }
  return result;
}

double tpoly_bound(const TPoly& poly) {
  double s = 0.0;
  for (double c : poly) s += std::abs(c);
  return s;
}

namespace {

bool is_constant(const TPoly& poly) {
  return std::all_of(poly.begin() + std::min<std::ptrdiff_t>(1, static_cast<std::ptrdiff_t>(poly.size())),
                     poly.end(), [](double c) { return c == 0.0; });
}

std::vector<double> t_samples(int count) {
  if (count < 2) throw std::invalid_argument("NormGrid: need at least two t samples");
  std::vector<double> ts(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) ts[static_cast<std::size_t>(i)] = static_cast<double>(i) / (count - 1);
  return ts;
}

}  // namespace

CircleFamily::CircleFamily(int winding, TPoly const_term, std::vector<FamilyHarmonic> harmonics,
                           std::string label)
    : winding_(winding),
      const_term_(std::move(const_term)),
      harmonics_(std::move(harmonics)),
      label_(std::move(label)) {
  if (winding_ < 1) throw std::invalid_argument("CircleFamily: winding number must be positive");
  for (const auto& h : harmonics_) {
    if (h.j < 1) throw std::invalid_argument("CircleFamily: harmonic index must be positive");
  }
}

CircleFamily CircleFamily::arnold(double amplitude, std::string label) {
  if (label.empty()) {
    std::ostringstream os;
    os << "arnold(" << amplitude << ")";
    label = os.str();
  }
  return CircleFamily(1, {0.0}, {{1, {0.0}, {amplitude}}}, std::move(label));
}

CircleFamily CircleFamily::rigid(int winding) {
  return CircleFamily(winding, {0.0}, {}, "rigid");
}

TrigPoly CircleFamily::g(double t) const {
  std::vector<Harmonic> hs;
  hs.reserve(harmonics_.size());
  for (const auto& h : harmonics_) hs.push_back({h.j, eval_tpoly(h.a, t), eval_tpoly(h.b, t)});
  return TrigPoly(eval_tpoly(const_term_, t), std::move(hs));
}

TrigPoly CircleFamily::g_rate(double t) const {
  std::vector<Harmonic> hs;
  hs.reserve(harmonics_.size());
  for (const auto& h : harmonics_) {
    hs.push_back({h.j, eval_tpoly(derivative(h.a), t), eval_tpoly(derivative(h.b), t)});
  }
  return TrigPoly(eval_tpoly(derivative(const_term_), t), std::move(hs));
}

CircleFamily CircleFamily::scaled(double factor, std::string label) const {
  auto scale = [factor](TPoly p) {
    for (auto& c : p) c *= factor;
    return p;
  };
  std::vector<FamilyHarmonic> hs;
  for (const auto& h : harmonics_) hs.push_back({h.j, scale(h.a), scale(h.b)});
  return CircleFamily(winding_, scale(const_term_), std::move(hs), label.empty() ? label_ : std::move(label));
}

CircleMap CircleFamily::at(double t) const {
  Stage s;
  s.shift = winding_ * t;
  s.shift_rate = winding_;
  s.periodic = g(t);
  s.periodic_rate = g_rate(t);
  return CircleMap({std::move(s)});
}

bool CircleFamily::t_periodic() const {
  if (!is_constant(const_term_)) return false;
  return std::all_of(harmonics_.begin(), harmonics_.end(),
                     [](const FamilyHarmonic& h) { return is_constant(h.a) && is_constant(h.b); });
}

double CircleFamily::displacement_bound() const {
  double b = tpoly_bound(const_term_);
  for (const auto& h : harmonics_) b += tpoly_bound(h.a) + tpoly_bound(h.b);
  return b;
}

FamilyNorm CircleFamily::norm(const NormGrid& grid) const { return family_norm(*this, grid); }

double eval_lift(const CircleFamily& f, double t, double theta) {
  return theta + f.winding() * t + f.g(t)(theta);
}

void validate(const CircleFamily& f, const NormGrid& grid) {
  const double h = 1.0 / grid.theta;
  for (double t : t_samples(grid.t)) {
    const TrigPoly g = f.g(t);
    if (g.coefficient_bound(1) >= 1.0) {
      if (grid.theta < std::max(2, 2 * g.degree())) {
        throw std::invalid_argument("validate: theta grid too coarse for the harmonic degree");
      }
      double min_slope = 0.0;
      for (int i = 0; i < grid.theta; ++i) min_slope = std::min(min_slope, g.derivative(i * h, 1));
      if (1.0 + min_slope - 0.5 * h * g.coefficient_bound(2) <= 0.0) {
        std::ostringstream os;
        os << "family '" << f.label() << "' is not a diffeomorphism at t=" << t
           << " (min of 1 + dg/dtheta is " << 1.0 + min_slope << ")";
        throw DegenerateFamily(os.str());
      }
    }
    const double rate = sup_norm(f.g_rate(t), 0, grid.theta);
    if (rate >= f.winding()) {
      std::ostringstream os;
      os << "family '" << f.label() << "' violates t-regularity at t=" << t << " (sup |dg/dt| = " << rate
         << " >= winding " << f.winding() << ")";
      throw DegenerateFamily(os.str());
    }
  }
}

FamilyNorm family_norm(const CircleFamily& f, const NormGrid& grid) {
  validate(f, grid);
  FamilyNorm n;
  for (double t : t_samples(grid.t)) {
    n.c3_g = std::max(n.c3_g, c3_norm(f.g(t), grid.theta));
    n.c0_dt = std::max(n.c0_dt, sup_norm(f.g_rate(t), 0, grid.theta));
  }
  n.value = std::max(n.c3_g, n.c0_dt);
  return n;
}

CircleFamily renormalize(const CircleFamily& f, double a, double b) {
  if (!(b > a)) throw std::invalid_argument("renormalize: need a < b");
  const double span = b - a;
  const double drift = f.winding() * span;
  const int k = std::max(1, static_cast<int>(std::lround(drift)));
  TPoly c = affine_substitute(f.const_term(), a, span);
  c.resize(std::max<std::size_t>(c.size(), 2), 0.0);
  c[0] += f.winding() * a;
  c[1] += drift - k;
  std::vector<FamilyHarmonic> hs;
  for (const auto& h : f.harmonics()) {
    hs.push_back({h.j, affine_substitute(h.a, a, span), affine_substitute(h.b, a, span)});
  }
  std::ostringstream label;
  label << f.label() << "|[" << a << "," << b << "]";
  return CircleFamily(k, std::move(c), std::move(hs), label.str());
}

}  // namespace circlemaps
