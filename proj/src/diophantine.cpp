#include "circlemaps/diophantine.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "circlemaps/parallel.hpp"

namespace circlemaps {

namespace {

void check(const DioParams& p) {
  if (!(p.C > 0.0) || p.C > 2.0) throw std::invalid_argument("DioParams: C must lie in (0, 2]");
  if (p.n_max < 1) throw std::invalid_argument("DioParams: n_max must be >= 1");
  if (p.grid < 1) throw std::invalid_argument("DioParams: grid must be >= 1");
}

// 2 |sin(pi n x)| >= C / n^3, evaluated on the exact residual n x - round(n x).
bool passes(double x, long n, double C) {
  const double nd = static_cast<double>(n);
  const double r = std::fma(nd, x, -std::nearbyint(nd * x));
  const double threshold = C / (nd * nd * nd);
  // |sin(pi r)| >= 2 |r| on |r| <= 1/2 settles most cases without a sine.
  if (4.0 * std::abs(r) >= threshold) return true;
  return 2.0 * std::abs(std::sin(std::numbers::pi * r)) >= threshold;
}

}  // namespace

DioMembership dio_member(double x, const DioParams& params) {
  check(params);
  DioMembership m;
  for (long n = 1; n <= params.n_max; ++n) {
    if (!passes(x, n, params.C)) {
      m.excluded_at = n;
      break;
    }
  }
  return m;
}

double dio_analytic_lower(double C) {
  constexpr double kZeta3 = 1.2020569031595942853997381615114;
  return 1.0 - C * kZeta3 / std::numbers::pi;
}

DioMeasure dio_measure(const DioParams& params, unsigned workers) {
  check(params);
  const long g = params.grid;
  const double h = 1.0 / static_cast<double>(g);
  std::vector<unsigned char> member(static_cast<std::size_t>(g), 0);
  constexpr std::size_t kChunk = 1024;
  const std::size_t chunks = (member.size() + kChunk - 1) / kChunk;
  parallel_for(chunks, workers, [&](std::size_t c) {
    const std::size_t end = std::min(member.size(), (c + 1) * kChunk);
    for (std::size_t i = c * kChunk; i < end; ++i) {
      const double x = (static_cast<double>(i) + 0.5) * h;
      bool ok = true;
      for (long n = 1; n <= params.n_max && ok; ++n) ok = passes(x, n, params.C);
      member[i] = ok ? 1 : 0;
    }
  });

  DioMeasure out;
  long count = 0;
  for (std::size_t i = 0; i < member.size(); ++i) {
    count += member[i];
    const bool starts_run = !member[i] && (i == 0 ? member.back() != 0 : member[i - 1] != 0);
    if (starts_run) ++out.excluded_runs;
  }
  if (count == 0) out.excluded_runs = 1;
  out.estimate = static_cast<double>(count) * h;
  out.analytic_lower = dio_analytic_lower(params.C);

  // Each maximal excluded interval that holds grid points is estimated to
  // within one spacing; allow two intervals per observed run. Arcs narrower
  // than a spacing may be missed entirely, so their total width is added.
  double thin = 0.0;
  for (long n = 1; n <= params.n_max; ++n) {
    const double nd = static_cast<double>(n);
    const double width = 2.0 * std::asin(std::min(1.0, params.C / (2.0 * nd * nd * nd))) / (std::numbers::pi * nd);
    if (width < h) thin += nd * width;
  }
  out.grid_error = h * (2.0 * static_cast<double>(out.excluded_runs) + 2.0) + thin;
  return out;
}

}  // namespace circlemaps
