#pragma once

#include <optional>

namespace circlemaps {

// Diophantine set D(C) = {x : |exp(2 pi i n x) - 1| >= C |n|^-3 for all n != 0},
// tested for 1 <= n <= n_max only.
struct DioParams {
  double C = 0.1;
  long n_max = 1000;
  long grid = 100000;  // midpoint samples for measure estimates
};

struct DioMembership {
  // Empty: the condition holds for every n <= n_max. This is not a proof of
  // membership, which quantifies over all n.
  std::optional<long> excluded_at;

  bool member_up_to_cutoff() const noexcept { return !excluded_at.has_value(); }
};

// Uses |exp(2 pi i n x) - 1| = 2 |sin(pi n x)|.
DioMembership dio_member(double x, const DioParams& params);

struct DioMeasure {
  double estimate = 0.0;        // fraction of grid midpoints that pass; decreases toward mu D(C) as n_max grows
  double analytic_lower = 0.0;  // 1 - C zeta(3) / pi
  double grid_error = 0.0;      // bound on |estimate - measure of the cutoff set|
  long excluded_runs = 0;       // maximal runs of excluded grid points
};

// Union bound over the excluded arcs around p/n: each has half-width about
// C / (2 pi n^4) and there are n of them for each n, giving C zeta(3) / pi.
double dio_analytic_lower(double C);

DioMeasure dio_measure(const DioParams& params, unsigned workers = 1);

}  // namespace circlemaps
