#include "circlemaps/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "circlemaps/errors.hpp"
#include "circlemaps/parallel.hpp"
#include "circlemaps/rotation.hpp"
#include "circlemaps/windows.hpp"

namespace circlemaps {

namespace {

double binomial_sigma(double p, long n) { return n > 0 ? std::sqrt(p * (1.0 - p) / static_cast<double>(n)) : 0.0; }

}  // namespace

IntersectionResult intersection_measure(std::span<const ParamFamily* const> families, long samples, int q_max,
                                        std::uint64_t seed, const IntersectionOptions& options) {
  if (families.empty()) throw std::invalid_argument("intersection_measure: no families");
  if (samples < 1) throw std::invalid_argument("intersection_measure: samples must be >= 1");

  IntersectionResult res;
  res.samples = samples;
  res.q_max = q_max;
  res.seed = seed;
  res.windings_increasing = true;
  res.norms_below_one = true;
  std::vector<double> norms;
  for (std::size_t i = 0; i < families.size(); ++i) {
    norms.push_back(families[i]->norm(options.norm_grid).value);
    if (norms.back() >= 1.0) res.norms_below_one = false;
    if (i > 0 && families[i]->winding() <= families[i - 1]->winding()) res.windings_increasing = false;
  }
  res.conforming = res.norms_below_one && res.windings_increasing;
  if (!res.norms_below_one && options.enforce_hypotheses) {
    std::ostringstream os;
    os << "family norm must be < 1 for every family; got";
    for (std::size_t i = 0; i < norms.size(); ++i) os << " " << families[i]->label() << "=" << norms[i];
    throw HypothesisViolation(os.str());
  }

  ClassifyOptions co;
  co.q_max = q_max;
  co.n_iter = options.n_iter;
  co.grid = options.grid;
  const CounterRng rng(seed);
  // Depth of the leading run of families with the sample locked (optimistic)
  // or not certified irrational (pessimistic).
  std::vector<std::size_t> opt_depth(static_cast<std::size_t>(samples)), pess_depth(opt_depth.size());
  parallel_for(opt_depth.size(), options.workers, [&](std::size_t i) {
    const double t = rng.uniform(i);
    std::size_t opt = 0, pess = 0;
    bool all_locked = true;
    for (const ParamFamily* f : families) {
      const Classification c = classify(f->at(t), co).classification;
      if (c == Classification::IrrationalCandidate) break;
      ++pess;
      if (c != Classification::Locked) all_locked = false;
      if (all_locked) ++opt;
    }
    opt_depth[i] = opt;
    pess_depth[i] = pess;
  });

  for (std::size_t n = 1; n <= families.size(); ++n) {
    IntersectionRow row;
    row.N = static_cast<int>(n);
    row.label = families[n - 1]->label();
    row.winding = families[n - 1]->winding();
    row.norm = norms[n - 1];
    const auto opt = std::count_if(opt_depth.begin(), opt_depth.end(), [n](std::size_t d) { return d >= n; });
    const auto pess = std::count_if(pess_depth.begin(), pess_depth.end(), [n](std::size_t d) { return d >= n; });
    row.optimistic = static_cast<double>(opt) / static_cast<double>(samples);
    row.pessimistic = static_cast<double>(pess) / static_cast<double>(samples);
    row.sigma = binomial_sigma(row.optimistic, samples);
    res.rows.push_back(std::move(row));
  }
  const auto& first = res.rows.front();
  const auto& last = res.rows.back();
  res.apparent_common_window =
      res.rows.size() > 1 && last.optimistic > 0.0 &&
      last.optimistic >= first.optimistic - 3.0 * std::max(first.sigma, last.sigma);
  return res;
}

CircleFamily random_family(const CounterRng& rng, double r, int max_harmonic, const NormGrid& grid) {
  if (!(r >= 0.0) || r >= 1.0) throw std::invalid_argument("random_family: r must lie in [0, 1)");
  if (max_harmonic < 1) throw std::invalid_argument("random_family: max_harmonic must be >= 1");
  if (r == 0.0) return CircleFamily::rigid(1);
  std::uint64_t draw = 0;
  const auto coef = [&] { return 2.0 * rng.uniform(draw++) - 1.0; };
  TPoly c{coef(), coef()};
  std::vector<FamilyHarmonic> hs;
  for (int j = 1; j <= max_harmonic; ++j) {
    TPoly a{coef(), coef()};
    TPoly b{coef(), coef()};
    hs.push_back({j, std::move(a), std::move(b)});
  }
  // Coefficient bound on the norm, so the first rescaling is already a valid
  // family; the measured norm then fixes the scale exactly.
  double c3 = tpoly_bound(c), dt = tpoly_bound(derivative(c));
  for (const auto& h : hs) {
    const double w = std::pow(kTwoPi * h.j, 3);
    c3 += std::max(1.0, w) * (tpoly_bound(h.a) + tpoly_bound(h.b));
    dt += tpoly_bound(derivative(h.a)) + tpoly_bound(derivative(h.b));
  }
  const CircleFamily base(1, std::move(c), std::move(hs), "random");
  const CircleFamily first = base.scaled(r / std::max(c3, dt));
  const double measured = family_norm(first, grid).value;
  std::ostringstream label;
  label << "random(r=" << r << ")";
  return base.scaled(r / std::max(c3, dt) * (r / measured), label.str());
}

std::vector<EtaPoint> eta_curve(std::span<const double> r_grid, const EtaOptions& options) {
  if (options.families_per_r < 1) throw std::invalid_argument("eta_curve: families_per_r must be >= 1");
  std::vector<double> rs(r_grid.begin(), r_grid.end());
  std::sort(rs.begin(), rs.end());
  const CounterRng root(options.seed, 0x657461);
  ClassifyOptions co;
  co.q_max = options.q_max;
  co.n_iter = options.n_iter;
  co.grid = options.grid;

  std::vector<EtaPoint> out;
  double running = 0.0;
  for (std::size_t ri = 0; ri < rs.size(); ++ri) {
    EtaPoint pt;
    pt.r = rs[ri];
    const int count = rs[ri] == 0.0 ? 1 : options.families_per_r;
    pt.families = count;
    for (int fi = 0; fi < count; ++fi) {
      const CounterRng stream = root.split(ri * 1024 + static_cast<std::uint64_t>(fi));
      const CircleFamily f = random_family(stream, rs[ri], options.max_harmonic, options.norm_grid);
      const LockedFraction lf = mc_locked_fraction(f, options.mc_samples, options.seed, co, options.workers);
      const double mass = static_cast<double>(lf.locked + lf.unresolved) / static_cast<double>(lf.samples);
      if (fi == 0 || mass > pt.raw) {
        pt.raw = mass;
        pt.sigma = binomial_sigma(mass, lf.samples);
      }
    }
    running = std::max(running, pt.raw);
    pt.eta = running;
    out.push_back(pt);
  }
  return out;
}

double eta_lookup(std::span<const EtaPoint> curve, double r) {
  if (r >= 1.0) return 1.0;
  for (const auto& p : curve) {
    if (p.r >= r) return p.eta;
  }
  return 1.0;
}

RenormResult renormalization_check(std::span<const ParamFamily* const> families, double a, double b, int q_max,
                                   std::uint64_t seed, long samples, double eta_hat, long n_iter, int grid,
                                   unsigned workers) {
  if (!(b > a)) throw std::invalid_argument("renormalization_check: J must have positive length");
  if (samples < 1) throw std::invalid_argument("renormalization_check: samples must be >= 1");
  ClassifyOptions co;
  co.q_max = q_max;
  co.n_iter = n_iter;
  co.grid = grid;
  const CounterRng rng(seed);
  RenormResult res;
  for (std::size_t k = 0; k < families.size(); ++k) {
    std::vector<unsigned char> locked(static_cast<std::size_t>(samples), 0);
    parallel_for(locked.size(), workers, [&](std::size_t i) {
      const double t = a + (b - a) * rng.uniform(i);
      locked[i] = classify(families[k]->at(t), co).classification == Classification::Locked;
    });
    const double ratio = static_cast<double>(std::count(locked.begin(), locked.end(), 1)) / static_cast<double>(samples);
    res.ratios.push_back(ratio);
    if (k == 0 || ratio < res.best_ratio) {
      res.best_ratio = ratio;
      res.best_index = k;
    }
    if (ratio < eta_hat) {
      res.found = k;
      break;
    }
  }
  return res;
}

TheoremAResult theorem_a(const SkewMap& f, const TheoremAOptions& options) {
  TheoremAResult res;
  res.circles = first_circle_per_period(f.m(), options.n_max);
  std::vector<std::unique_ptr<RestrictedFamily>> owned;
  std::vector<const ParamFamily*> families;
  for (const auto& c : res.circles) {
    owned.push_back(std::make_unique<RestrictedFamily>(f, c));
    families.push_back(owned.back().get());
  }
  res.intersection = intersection_measure(families, options.samples, options.q_max, options.seed, options.intersection);
  res.eta = eta_curve(options.eta_r_grid, options.eta);

  const auto& rows = res.intersection.rows;
  for (const auto& row : rows) res.matching_norm = std::max(res.matching_norm, row.norm);
  res.eta_hat = eta_lookup(res.eta, res.matching_norm);
  res.monotone = true;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].optimistic > rows[i - 1].optimistic || rows[i].pessimistic > rows[i - 1].pessimistic) {
      res.monotone = false;
    }
  }
  const double sigma = std::max(rows.front().sigma, rows.back().sigma);
  res.bound = rows.front().optimistic * std::pow(res.eta_hat, static_cast<double>(rows.size() - 1)) + 3.0 * sigma;
  res.decay_ok = rows.back().optimistic <= res.bound;
  return res;
}

}  // namespace circlemaps
