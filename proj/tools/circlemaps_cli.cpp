// circlemaps: command-line front end for the circle-map and skew-product
// experiments. Every subcommand writes CSV tables, report.json and the
// effective configuration (config.toml) into --out.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "circlemaps/diophantine.hpp"
#include "circlemaps/errors.hpp"
#include "circlemaps/experiments.hpp"
#include "circlemaps/family.hpp"
#include "circlemaps/io.hpp"
#include "circlemaps/parallel.hpp"
#include "circlemaps/rotation.hpp"
#include "circlemaps/skew_product.hpp"
#include "circlemaps/windows.hpp"

namespace fs = std::filesystem;
using namespace circlemaps;

namespace {

enum Exit { kOk = 0, kFailure = 1, kInput = 2, kDegenerate = 3, kHypothesis = 4 };

struct Common {
  std::string input;
  std::string out = "out";
  std::string profile;
  double amplitude = -1.0;  // < 0: profile default
  int qmax = 30;
  std::uint64_t seed = kDefaultSeed;
  unsigned workers = 0;
  double tol = 1e-6;
  int grid = 0;
  long niter = 2000;
};

struct Source {
  std::string label;
  std::string text;  // definition used for hashing
  std::string path;  // empty for built-in profiles
};

void add_common(CLI::App* sub, Common& c, bool family_input) {
  sub->add_option("--input,-i", c.input, family_input ? "family definition file (JSON)" : "skew-map definition file (JSON)")
      ->envname("CIRCLEMAPS_INPUT");
  sub->add_option("--out,-o", c.out, "output directory")->envname("CIRCLEMAPS_OUT")->capture_default_str();
  sub->add_option("--qmax", c.qmax, "largest denominator searched")
      ->envname("CIRCLEMAPS_QMAX")
      ->check(CLI::Range(1, 100000))
      ->capture_default_str();
  sub->add_option("--seed", c.seed, "random seed")->envname("CIRCLEMAPS_SEED")->capture_default_str();
  sub->add_option("--workers", c.workers, "worker threads, 0 = all hardware threads")
      ->envname("CIRCLEMAPS_WORKERS")
      ->capture_default_str();
  sub->add_option("--tol", c.tol, "window boundary tolerance")
      ->envname("CIRCLEMAPS_TOL")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--grid", c.grid, "lock-test grid, 0 = automatic")
      ->envname("CIRCLEMAPS_GRID")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  sub->add_option("--niter", c.niter, "orbit length for rotation estimates")
      ->envname("CIRCLEMAPS_NITER")
      ->check(CLI::Range(1L, 1000000000L))
      ->capture_default_str();
  sub->add_option("--profile", c.profile,
                  family_input ? "built-in family instead of --input: arnold, rigid"
                               : "built-in skew map instead of --input: arnold-fiber")
      ->envname("CIRCLEMAPS_PROFILE");
  sub->add_option("--amplitude", c.amplitude, "amplitude for --profile")->envname("CIRCLEMAPS_AMPLITUDE");
}

double effective_amplitude(const Common& c, double fallback) { return c.amplitude < 0.0 ? fallback : c.amplitude; }

Source load_source(const Common& c, const char* default_profile, double default_amplitude) {
  if (!c.input.empty() && !c.profile.empty()) throw ParseError("give either --input or --profile, not both");
  Source s;
  if (!c.input.empty()) {
    s.path = fs::absolute(c.input).lexically_normal().string();
    s.text = read_file(s.path);
    return s;
  }
  const std::string profile = c.profile.empty() ? default_profile : c.profile;
  s.text = fmt::format("{{\"profile\":\"{}\",\"amplitude\":{}}}", profile,
                       format_real(effective_amplitude(c, default_amplitude)));
  s.label = profile;
  return s;
}

CircleFamily load_family(const Common& c, Source& src) {
  if (!src.path.empty()) {
    CircleFamily f = parse_family(src.text, src.path);
    src.label = f.label();
    return f;
  }
  const double amp = effective_amplitude(c, 0.1);
  if (src.label == "arnold") return CircleFamily::arnold(amp);
  if (src.label == "rigid") return CircleFamily::rigid(1);
  throw ParseError("unknown family profile '" + src.label + "'");
}

SkewMap load_skew(const Common& c, Source& src, int m) {
  if (!src.path.empty()) {
    SkewMap f = parse_skew_map(src.text, src.path);
    src.label = f.label();
    return f;
  }
  const double amp = effective_amplitude(c, 0.05);
  if (src.label == "arnold-fiber") return SkewMap::arnold_fiber(m, amp);
  throw ParseError("unknown skew-map profile '" + src.label + "'");
}

std::string fmt_int(long long v) { return std::to_string(v); }

class Output {
 public:
  Output(const Common& c, std::string id, const CLI::App& app)
      : dir_(fs::absolute(c.out).lexically_normal()), start_(std::chrono::steady_clock::now()) {
    report_.id = std::move(id);
    // Unset options without defaults are dropped so the file can be fed back
    // through --config.
    std::istringstream lines(app.config_to_str(true, false));
    config_ = "[" + app.get_name() + "]\n";
    for (std::string line; std::getline(lines, line);) {
      if (!line.ends_with("=\"\"")) config_ += line + "\n";
    }
    report_.parameters["q_max"] = c.qmax;
    report_.parameters["seed"] = c.seed;
    report_.parameters["tol"] = c.tol;
    report_.parameters["grid"] = c.grid;
    report_.parameters["n_iter"] = c.niter;
  }

  ExperimentReport& report() { return report_; }

  void source(const Source& s) {
    report_.inputs["label"] = s.label;
    report_.inputs["path"] = s.path;
    report_.inputs["hash"] = git_blob_hash(s.text);
  }

  // Tables are buffered and written together so that a failure leaves no
  // partial output behind.
  void table(const std::string& name, const Csv& csv) {
    tables_.emplace_back(name, csv.str());
    report_.tables.push_back(name);
  }

  void commit() {
    fs::create_directories(dir_);
    for (const auto& [name, text] : tables_) write_atomic(dir_ / name, text);
    report_.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    write_atomic(dir_ / "report.json", report_.to_json());
    write_atomic(dir_ / "config.toml", config_);
    std::cout << "wrote " << tables_.size() + 2 << " files to " << dir_.string() << "\n";
  }

 private:
  fs::path dir_;
  std::chrono::steady_clock::time_point start_;
  ExperimentReport report_;
  std::string config_;
  std::vector<std::pair<std::string, std::string>> tables_;
};

WindowOptions window_options(const Common& c) {
  WindowOptions o;
  o.n_iter = c.niter;
  o.grid = c.grid;
  o.workers = c.workers;
  return o;
}

ClassifyOptions classify_options(const Common& c) {
  ClassifyOptions o;
  o.q_max = c.qmax;
  o.n_iter = c.niter;
  o.grid = c.grid;
  return o;
}

std::vector<double> t_values(const std::vector<double>& list, const std::vector<double>& range) {
  std::vector<double> ts = list;
  if (!range.empty()) {
    if (range.size() != 3 || range[2] < 1 || range[2] != static_cast<long>(range[2])) {
      throw ParseError("--t-range expects: lo hi count");
    }
    const long n = static_cast<long>(range[2]);
    for (long i = 0; i < n; ++i) ts.push_back(n == 1 ? range[0] : range[0] + (range[1] - range[0]) * i / (n - 1));
  }
  if (ts.empty()) throw ParseError("no parameter values: give --t or --t-range");
  return ts;
}

int cmd_rho(const Common& c, const CLI::App& app, const std::vector<double>& tl, const std::vector<double>& tr) {
  Source src = load_source(c, "arnold", 0.1);
  const CircleFamily f = load_family(c, src);
  validate(f);
  const std::vector<double> ts = t_values(tl, tr);
  std::vector<RotationResult> rows(ts.size());
  const ClassifyOptions co = classify_options(c);
  parallel_for(ts.size(), c.workers, [&](std::size_t i) { rows[i] = classify(f.at(ts[i]), co); });

  Output out(c, "rho", app);
  out.source(src);
  Csv csv({"t", "rho", "error_bound", "classification", "p", "q"});
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const auto& r = rows[i];
    const bool locked = r.classification == Classification::Locked;
    csv.row({format_real(ts[i]), format_real(r.estimate), format_real(r.error_bound), to_string(r.classification),
             locked ? fmt_int(r.p) : "", locked ? fmt_int(r.q) : ""});
  }
  out.table("rho.csv", csv);
  out.report().results["rows"] = ts.size();
  out.commit();
  return kOk;
}

int cmd_windows(const Common& c, const CLI::App& app, long samples) {
  Source src = load_source(c, "arnold", 0.1);
  const CircleFamily f = load_family(c, src);
  validate(f);
  const WindowOptions wo = window_options(c);
  const std::vector<Window> ws = enumerate_windows(f, c.qmax, c.tol, wo);

  Output out(c, "windows", app);
  out.source(src);
  out.report().parameters["samples"] = samples;
  Csv wcsv({"p", "q", "t_lo", "t_hi", "width", "bracket_radius"});
  double lower = 0.0;
  for (const auto& w : ws) {
    wcsv.row({fmt_int(w.p), fmt_int(w.q), format_real(w.t_lo), format_real(w.t_hi), format_real(w.width()),
              format_real(w.bracket_radius)});
    if (!w.point) lower += std::max(0.0, w.width() - 2.0 * w.bracket_radius);
  }
  out.table("windows.csv", wcsv);

  Csv mcsv({"q_max", "lower", "mc", "unresolved", "seed"});
  std::string mc, unresolved;
  if (samples > 0) {
    const LockedFraction lf = mc_locked_fraction(f, samples, c.seed, classify_options(c), c.workers);
    mc = format_real(lf.fraction());
    unresolved = format_real(lf.unresolved_fraction());
    out.report().results["mc_stderr"] = lf.stderr_();
  }
  mcsv.row({fmt_int(c.qmax), format_real(lower), mc, unresolved, std::to_string(c.seed)});
  out.table("measure.csv", mcsv);
  out.report().results["windows"] = ws.size();
  out.report().results["lower"] = lower;
  try {
    const ScalingFit fit = scaling_fit(ws);
    out.report().results["scaling_exponent"] = fit.exponent;
    out.report().results["scaling_r2"] = fit.r_squared;
  } catch (const InsufficientData& e) {
    out.report().results["scaling_fit"] = e.what();
  }
  out.commit();
  return kOk;
}

int cmd_tongues(const Common& c, const CLI::App& app, const std::vector<double>& deltas) {
  Source src = load_source(c, "arnold", 0.1);
  // The profile amplitude is the unit shape; deltas scale it.
  Common shape_c = c;
  if (src.path.empty()) shape_c.amplitude = 1.0;
  const CircleFamily shape = load_family(shape_c, src);
  const TongueDiagram d = tongue_diagram(shape, deltas, c.qmax, c.tol, window_options(c));

  Output out(c, "tongues", app);
  out.source(src);
  out.report().parameters["deltas"] = deltas;
  Csv csv({"delta", "p", "q", "t_lo", "t_hi", "width"});
  nlohmann::ordered_json sums = nlohmann::ordered_json::array();
  for (const auto& row : d.rows) {
    double sum = 0.0;
    for (const auto& w : row.windows) {
      csv.row({format_real(row.delta), fmt_int(w.p), fmt_int(w.q), format_real(w.t_lo), format_real(w.t_hi),
               format_real(w.width())});
      sum += w.width();
    }
    sums.push_back({{"delta", row.delta}, {"total_width", sum}, {"windows", row.windows.size()}});
  }
  out.table("diagram.csv", csv);
  out.report().results["rows"] = sums;
  out.commit();
  return kOk;
}

int cmd_dio(const Common& c, const CLI::App& app, double C, long nmax, long grid) {
  const DioParams p{C, nmax, grid};
  const DioMeasure m = dio_measure(p, c.workers);
  Output out(c, "dio", app);
  Source src;
  src.label = "dio";
  src.text = fmt::format("{{\"C\":{},\"n_max\":{},\"grid\":{}}}", format_real(C), nmax, grid);
  out.source(src);
  Csv csv({"C", "n_max", "estimate", "analytic_lower", "grid_error"});
  csv.row({format_real(C), fmt_int(nmax), format_real(m.estimate), format_real(m.analytic_lower),
           format_real(m.grid_error)});
  out.table("dio.csv", csv);
  out.report().results["excluded_runs"] = m.excluded_runs;
  out.report().results["above_lower_bound"] = m.estimate >= m.analytic_lower - m.grid_error;
  out.commit();
  return kOk;
}

int cmd_skew(const Common& c, const CLI::App& app, int m, int nmax, double R, bool no_filter,
             const std::vector<double>& tl, const std::vector<double>& tr, long samples) {
  Source src = load_source(c, "arnold-fiber", 0.05);
  const SkewMap f = load_skew(c, src, m);
  QuasiSearchOptions qo;
  qo.n_max = nmax;
  qo.q_max = c.qmax;
  qo.n_iter = c.niter;
  qo.grid = c.grid;
  if (!no_filter) qo.R = R;
  const QuasiSearcher searcher(f, qo);

  std::vector<double> ts;
  if (samples > 0) {
    const CounterRng rng(c.seed);
    for (long i = 0; i < samples; ++i) ts.push_back(rng.uniform(static_cast<std::uint64_t>(i)));
  }
  if (!tl.empty() || !tr.empty()) {
    for (double t : t_values(tl, tr)) ts.push_back(t);
  }

  const auto& fams = searcher.families();
  std::vector<A3Result> a3(fams.size());
  parallel_for(fams.size(), c.workers, [&](std::size_t i) {
    a3[i] = no_filter ? a3_check(fams[i], R, qo.a3_t_grid, qo.a3_y_grid) : searcher.a3()[i];
  });
  std::vector<std::optional<QuasiHit>> hits(ts.size());
  parallel_for(ts.size(), c.workers, [&](std::size_t i) { hits[i] = searcher.search(ts[i]); });

  Output out(c, "skew", app);
  out.source(src);
  out.report().parameters["m"] = f.m();
  out.report().parameters["n_max"] = nmax;
  out.report().parameters["R"] = R;
  out.report().parameters["a3_filter"] = !no_filter;
  out.report().parameters["samples"] = samples;
  Csv circles({"k", "n", "x0_num", "x0_den", "sup_c3", "passes"});
  long passing = 0;
  for (std::size_t i = 0; i < fams.size(); ++i) {
    const auto& pc = fams[i].circle();
    circles.row({pc.k.str(), fmt_int(pc.n), boost::multiprecision::numerator(pc.x0).str(),
                 boost::multiprecision::denominator(pc.x0).str(), format_real(a3[i].bound),
                 a3[i].passes ? "1" : "0"});
    passing += a3[i].passes;
  }
  out.table("circles.csv", circles);
  Csv search({"t", "found", "k", "n", "rho", "classification"});
  long found = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (hits[i]) {
      ++found;
      search.row({format_real(ts[i]), "1", hits[i]->circle.k.str(), fmt_int(hits[i]->circle.n),
                  format_real(hits[i]->rotation.estimate), to_string(hits[i]->rotation.classification)});
    } else {
      search.row({format_real(ts[i]), "0", "", "", "", ""});
    }
  }
  out.table("search.csv", search);
  out.report().results["circles"] = fams.size();
  out.report().results["circles_passing_a3"] = passing;
  out.report().results["searched"] = ts.size();
  out.report().results["found"] = found;
  out.commit();
  return kOk;
}

int cmd_theorem_a(const Common& c, const CLI::App& app, int m, int nmax, long samples, bool allow_nonconforming,
                  const std::vector<double>& eta_r, long eta_samples, int eta_families) {
  Source src = load_source(c, "arnold-fiber", 0.05);
  const SkewMap f = load_skew(c, src, m);
  TheoremAOptions o;
  o.n_max = nmax;
  o.samples = samples;
  o.q_max = c.qmax;
  o.seed = c.seed;
  o.eta_r_grid = eta_r;
  o.eta.families_per_r = eta_families;
  o.eta.mc_samples = eta_samples;
  o.eta.q_max = c.qmax;
  o.eta.seed = c.seed;
  o.eta.n_iter = c.niter;
  o.eta.grid = c.grid;
  o.eta.workers = c.workers;
  o.intersection.n_iter = c.niter;
  o.intersection.grid = c.grid;
  o.intersection.workers = c.workers;
  o.intersection.enforce_hypotheses = !allow_nonconforming;
  const TheoremAResult r = theorem_a(f, o);

  Output out(c, "theoremA", app);
  out.source(src);
  out.report().parameters["m"] = f.m();
  out.report().parameters["n_max"] = nmax;
  out.report().parameters["samples"] = samples;
  out.report().parameters["eta_r_grid"] = eta_r;
  out.report().parameters["eta_samples"] = eta_samples;
  out.report().parameters["eta_families"] = eta_families;
  Csv inter({"N", "label", "winding", "norm", "optimistic", "pessimistic", "sigma"});
  for (const auto& row : r.intersection.rows) {
    inter.row({fmt_int(row.N), row.label, fmt_int(row.winding), format_real(row.norm), format_real(row.optimistic),
               format_real(row.pessimistic), format_real(row.sigma)});
  }
  out.table("intersection.csv", inter);
  Csv eta({"r", "raw", "eta", "sigma", "families"});
  for (const auto& p : r.eta) {
    eta.row({format_real(p.r), format_real(p.raw), format_real(p.eta), format_real(p.sigma), fmt_int(p.families)});
  }
  out.table("eta.csv", eta);
  auto& res = out.report().results;
  res["framing"] =
      "geometric-decay proxy: mu_N <= mu_1 * eta^(N-1) + 3 sigma with eta measured at the largest family norm; "
      "measure zero itself is not decidable numerically";
  res["windings_increasing"] = r.intersection.windings_increasing;
  res["norms_below_one"] = r.intersection.norms_below_one;
  res["conforming"] = r.intersection.conforming;
  res["apparent_common_window"] = r.intersection.apparent_common_window;
  res["matching_norm"] = r.matching_norm;
  res["eta_hat"] = r.eta_hat;
  res["bound"] = r.bound;
  res["monotone"] = r.monotone;
  res["decay_ok"] = r.decay_ok;
  out.commit();
  if (!r.intersection.conforming) std::cerr << "warning: report marked non-conforming\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Circle maps, mode locking and skew products: rotation numbers, lock windows, Diophantine sets and "
               "measure experiments.\nExit codes: 0 ok, 2 input error, 3 degenerate map, 4 hypothesis violation."};
  app.set_version_flag("--version", version_string());
  app.set_config("--config", "", "TOML/INI configuration file (flags > config > environment > defaults)");
  app.require_subcommand(1);

  Common c;
  std::vector<double> t_list, t_range, deltas{0.0, 0.02, 0.05, 0.1, 0.15};
  long samples = 0;
  double dio_C = 0.1, R = 0.5;
  long dio_nmax = 1000, dio_grid = 100000;
  int m = 2, nmax = 6, eta_families = 4;
  bool no_filter = false, allow_nonconforming = false;
  std::vector<double> eta_r{0.0, 0.01, 0.05, 0.1, 0.2, 0.5, 0.9};
  long eta_samples = 2000;

  auto* rho = app.add_subcommand("rho", "rotation number and classification at given parameters");
  add_common(rho, c, true);
  rho->add_option("--t", t_list, "parameter values")->delimiter(',');
  rho->add_option("--t-range", t_range, "lo hi count")->expected(3);

  auto* windows = app.add_subcommand("windows", "mode-locking windows and locked measure of a family");
  add_common(windows, c, true);
  windows->add_option("--samples", samples, "Monte Carlo samples for the locked fraction (0 skips)")
      ->envname("CIRCLEMAPS_SAMPLES")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();

  auto* tongues = app.add_subcommand("tongues", "windows of the family scaled by each delta");
  add_common(tongues, c, true);
  tongues->add_option("--deltas", deltas, "amplitude scale factors")->delimiter(',')->capture_default_str();

  auto* dio = app.add_subcommand("dio", "measure of the Diophantine set D(C)");
  add_common(dio, c, true);
  dio->add_option("--C", dio_C, "Diophantine constant")->check(CLI::Range(1e-300, 2.0))->capture_default_str();
  dio->add_option("--nmax", dio_nmax, "frequency cutoff")->check(CLI::PositiveNumber)->capture_default_str();
  dio->add_option("--points", dio_grid, "midpoint samples")->check(CLI::PositiveNumber)->capture_default_str();

  auto* skew = app.add_subcommand("skew", "periodic circles of a skew product and the quasiperiodic-circle search");
  add_common(skew, c, false);
  skew->add_option("--m", m, "base of the expanding map for --profile")->check(CLI::Range(2, 64))->capture_default_str();
  skew->add_option("--nmax", nmax, "largest circle period")->check(CLI::Range(1, 24))->capture_default_str();
  skew->add_option("--R", R, "C3 radius for the circle filter")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  skew->add_flag("--no-a3-filter", no_filter, "search every circle regardless of --R");
  skew->add_option("--t", t_list, "parameter values")->delimiter(',');
  skew->add_option("--t-range", t_range, "lo hi count")->expected(3);
  skew->add_option("--samples", samples, "uniform parameter samples drawn from --seed")
      ->envname("CIRCLEMAPS_SAMPLES")
      ->check(CLI::NonNegativeNumber);

  auto* theorem = app.add_subcommand("theoremA", "intersection of locked sets over restricted families");
  add_common(theorem, c, false);
  theorem->add_option("--m", m, "base of the expanding map for --profile")->check(CLI::Range(2, 64))->capture_default_str();
  theorem->add_option("--nmax", nmax, "periods 1..nmax")->check(CLI::Range(1, 24))->capture_default_str();
  theorem->add_option("--samples", samples, "common parameter samples")
      ->envname("CIRCLEMAPS_SAMPLES")
      ->check(CLI::PositiveNumber);
  theorem->add_option("--eta-r", eta_r, "norm grid for the eta curve")->delimiter(',')->capture_default_str();
  theorem->add_option("--eta-samples", eta_samples, "Monte Carlo samples per eta family")->capture_default_str();
  theorem->add_option("--eta-families", eta_families, "random families per r")->capture_default_str();
  theorem->add_flag("--allow-nonconforming", allow_nonconforming,
                    "run even when a family norm is >= 1; the report is marked non-conforming");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }

  try {
    if (rho->parsed()) return cmd_rho(c, *rho, t_list, t_range);
    if (windows->parsed()) return cmd_windows(c, *windows, samples);
    if (tongues->parsed()) return cmd_tongues(c, *tongues, deltas);
    if (dio->parsed()) return cmd_dio(c, *dio, dio_C, dio_nmax, dio_grid);
    if (skew->parsed()) return cmd_skew(c, *skew, m, nmax, R, no_filter, t_list, t_range, samples);
    if (theorem->parsed()) {
      return cmd_theorem_a(c, *theorem, m, nmax, samples > 0 ? samples : 10000, allow_nonconforming, eta_r, eta_samples,
                           eta_families);
    }
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const HypothesisViolation& e) {
    std::cerr << "hypothesis violation: " << e.what() << "\n";
    return kHypothesis;
  } catch (const DegenerateFamily& e) {
    std::cerr << "degenerate: " << e.what() << "\n";
    return kDegenerate;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}
