#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "circlemaps/circle_map.hpp"
#include "circlemaps/family.hpp"
#include "circlemaps/rng.hpp"
#include "circlemaps/skew_product.hpp"

namespace circlemaps {

struct IntersectionOptions {
  long n_iter = 2000;
  int grid = 0;
  unsigned workers = 1;
  NormGrid norm_grid{};
  // Throw HypothesisViolation when some family has norm >= 1. When false the
  // run proceeds and the result is marked non-conforming.
  bool enforce_hypotheses = true;
};

struct IntersectionRow {
  int N = 0;  // number of families intersected
  std::string label;
  int winding = 0;
  double norm = 0.0;
  double optimistic = 0.0;   // fraction locked for every one of the first N families
  double pessimistic = 0.0;  // same with Unresolved counted as locked
  double sigma = 0.0;        // binomial standard error of optimistic
};

struct IntersectionResult {
  std::vector<IntersectionRow> rows;
  long samples = 0;
  int q_max = 0;
  std::uint64_t seed = 0;
  bool windings_increasing = false;  // growth proxy for unbounded windings
  bool norms_below_one = false;      // every family norm < 1
  bool conforming = false;
  // The last row keeps the mass of the first within 3 sigma: the families
  // appear to share a lock window instead of shrinking the intersection.
  bool apparent_common_window = false;
};

// Monte Carlo measure of the parameters t in [0, 1) locked for all of the first
// N families, N = 1..size, using one shared set of t samples.
IntersectionResult intersection_measure(std::span<const ParamFamily* const> families, long samples, int q_max,
                                        std::uint64_t seed, const IntersectionOptions& options = {});

struct EtaOptions {
  int families_per_r = 4;
  long mc_samples = 2000;
  int q_max = 30;
  std::uint64_t seed = kDefaultSeed;
  long n_iter = 2000;
  int grid = 0;
  unsigned workers = 1;
  int max_harmonic = 3;
  NormGrid norm_grid{1024, 17};
};

struct EtaPoint {
  double r = 0.0;
  double raw = 0.0;    // largest locked fraction (Unresolved included) among the sampled families
  double eta = 0.0;    // running maximum of raw over r, the nondecreasing cleanup
  double sigma = 0.0;  // standard error of the family attaining raw
  int families = 0;
};

// Random winding-1 family whose trigonometric and t-polynomial coefficients
// are drawn from rng and rescaled so that its family norm equals r (< 1).
CircleFamily random_family(const CounterRng& rng, double r, int max_harmonic, const NormGrid& grid);

// Empirical lower envelope of eta(r) = sup of the locked measure over families
// with norm <= r, sorted by r.
std::vector<EtaPoint> eta_curve(std::span<const double> r_grid, const EtaOptions& options = {});

// eta at the smallest grid r' >= r; 1 when r >= 1 or r lies past the grid.
double eta_lookup(std::span<const EtaPoint> curve, double r);

struct RenormResult {
  std::optional<std::size_t> found;  // index of the first family with ratio < eta
  std::vector<double> ratios;        // locked fraction of J per family, up to found
  double best_ratio = 1.0;
  std::size_t best_index = 0;
};

// For each family in order, the Monte Carlo fraction of J = [a, b] that is
// locked, stopping at the first one below eta_hat.
RenormResult renormalization_check(std::span<const ParamFamily* const> families, double a, double b, int q_max,
                                   std::uint64_t seed, long samples, double eta_hat, long n_iter = 2000,
                                   int grid = 0, unsigned workers = 1);

struct TheoremAOptions {
  int n_max = 6;
  long samples = 10000;
  int q_max = 30;
  std::uint64_t seed = kDefaultSeed;
  std::vector<double> eta_r_grid{0.0, 0.01, 0.05, 0.1, 0.2, 0.5, 0.9};
  EtaOptions eta{};
  IntersectionOptions intersection{};
};

struct TheoremAResult {
  std::vector<PeriodicCircle> circles;
  IntersectionResult intersection;
  std::vector<EtaPoint> eta;
  double matching_norm = 0.0;  // largest family norm in the list
  double eta_hat = 1.0;
  double bound = 0.0;          // mu_1 eta^(N-1) + 3 sigma
  bool monotone = false;
  bool decay_ok = false;       // mu_N <= bound
};

// Intersection experiment over the restricted families of the first periodic
// circle of each exact period 1..n_max, checked against geometric decay with
// the measured eta.
TheoremAResult theorem_a(const SkewMap& f, const TheoremAOptions& options);

}  // namespace circlemaps
