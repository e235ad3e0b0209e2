// merodyn: command-line front end for the zeta_lambda dynamics library.
//
// Subcommands: fixed-points, cycles, classify, lyapunov, cobweb, bifurcation,
// julia, figure.  Every run writes a header line with the fully resolved
// configuration so outputs are self-describing.  Exit codes: 0 success,
// 2 flag/validation error, 1 runtime error.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "merodyn/fixed_points.hpp"
#include "merodyn/io.hpp"
#include "merodyn/julia_render.hpp"
#include "merodyn/map_core.hpp"
#include "merodyn/orbits.hpp"

namespace {

using namespace merodyn;
namespace mio = merodyn::io;

unsigned default_workers() {
  if (const char* env = std::getenv("MERODYN_WORKERS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

void write_output(const std::string& path, const std::string& data, bool binary) {
  if (path.empty() || path == "-") {
    std::cout << data;
    return;
  }
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << data;
}

SeedRule parse_seed_rule(const std::string& spec) {
  if (spec == "critical") return {SeedRule::Kind::CriticalPoint, 0.0};
  if (spec.rfind("value:", 0) == 0)
    return {SeedRule::Kind::FixedSeed, mio::parse_double(spec.substr(6))};
  throw CLI::ValidationError("--seed-rule", "expected 'critical' or 'value:<x>'");
}

std::string run_fixed_points(double lambda, double tol) {
  const auto records = solve_fixed_points(Parameter(lambda), tol);
  mio::CsvTable t;
  t.comments = {"merodyn fixed-points lambda=" + mio::format_double(lambda) +
                " tol=" + mio::format_double(tol)};
  t.columns = {"location", "stability", "multiplier"};
  for (const auto& r : records)
    t.rows.push_back({mio::format_double(r.location), stability_name(r.stability),
                      mio::format_double(r.multiplier)});
  return mio::write_csv(t);
}

std::string run_cycles(double lambda, int period, double lo, double hi, int grid,
                       double tol) {
  CycleScanReport report;
  const auto cycles =
      find_cycles(Parameter(lambda), period, lo, hi, grid, tol, &report);
  mio::CsvTable t;
  std::ostringstream cfg;
  cfg << "merodyn cycles lambda=" << mio::format_double(lambda)
      << " period=" << period << " interval=" << mio::format_double(lo) << ","
      << mio::format_double(hi) << " grid=" << grid
      << " tol=" << mio::format_double(tol)
      << " skipped_brackets=" << report.skipped_brackets;
  t.comments = {cfg.str()};
  t.columns = {"cycle", "point_index", "point", "multiplier", "stability"};
  int idx = 0;
  for (const auto& c : cycles) {
    for (std::size_t j = 0; j < c.points.size(); ++j)
      t.rows.push_back({std::to_string(idx), std::to_string(j),
                        mio::format_double(c.points[j]),
                        mio::format_double(c.multiplier),
                        stability_name(c.stability)});
    ++idx;
  }
  return mio::write_csv(t);
}

std::string run_classify(double lambda, double seed, long max_steps) {
  const auto result = classify_limit(Parameter(lambda), seed, max_steps);
  mio::CsvTable t;
  t.comments = {"merodyn classify lambda=" + mio::format_double(lambda) +
                " seed=" + mio::format_double(seed) +
                " max_steps=" + std::to_string(max_steps)};
  t.columns = {"limit", "target", "cycle_points"};
  std::string cycle_points;
  if (result.cycle) {
    for (std::size_t i = 0; i < result.cycle->points.size(); ++i) {
      if (i) cycle_points += ';';
      cycle_points += mio::format_double(result.cycle->points[i]);
    }
  }
  t.rows.push_back({limit_name(result.kind), mio::format_double(result.target),
                    cycle_points});
  return mio::write_csv(t);
}

std::string run_lyapunov(std::optional<double> lambda,
                         std::optional<std::pair<double, double>> range,
                         int steps, long k, long burn_in, SeedRule rule) {
  mio::CsvTable t;
  std::ostringstream cfg;
  cfg << "merodyn lyapunov k=" << k << " burn_in=" << burn_in
      << " seed=" << mio::format_double(rule.seed());
  if (range) cfg << " lambda_range=" << mio::format_double(range->first) << ","
                 << mio::format_double(range->second) << " steps=" << steps;
  t.comments = {cfg.str()};
  t.columns = {"lambda", "value", "terms_used", "skipped_terms"};
  auto emit = [&](double lam) {
    try {
      const auto est = lyapunov(Parameter(lam), rule.seed(), k, burn_in);
      t.rows.push_back({mio::format_double(lam), mio::format_double(est.value),
                        std::to_string(est.terms_used),
                        std::to_string(est.skipped_terms)});
    } catch (const OrbitEscapedError&) {
      t.rows.push_back({mio::format_double(lam), "escaped", "0", "0"});
    }
  };
  if (range) {
    for (int i = 0; i < steps; ++i)
      emit(range->first +
           (range->second - range->first) * static_cast<double>(i) / (steps - 1));
  } else {
    emit(*lambda);
  }
  return mio::write_csv(t);
}

std::string run_cobweb(double lambda, double seed, int n) {
  const auto path = cobweb(Parameter(lambda), seed, n);
  mio::CsvTable t;
  t.comments = {"merodyn cobweb lambda=" + mio::format_double(lambda) +
                " seed=" + mio::format_double(seed) + " n=" + std::to_string(n)};
  t.columns = {"x", "y"};
  for (const auto& [x, y] : path.vertices)
    t.rows.push_back({mio::format_double(x), mio::format_double(y)});
  return mio::write_csv(t);
}

std::string run_bifurcation(double lmin, double lmax, int steps, long transient,
                            int samples, SeedRule rule, unsigned workers) {
  const auto records =
      bifurcation_sweep(lmin, lmax, steps, transient, samples, rule, workers);
  mio::CsvTable t;
  std::ostringstream cfg;
  cfg << "merodyn bifurcation lambda_range=" << mio::format_double(lmin) << ","
      << mio::format_double(lmax) << " steps=" << steps
      << " transient=" << transient << " samples=" << samples
      << " seed=" << mio::format_double(rule.seed());
  t.comments = {cfg.str()};
  t.columns = {"lambda", "sample"};
  for (const auto& rec : records)
    for (double s : rec.attractor_samples)
      t.rows.push_back({mio::format_double(rec.lambda), mio::format_double(s)});
  return mio::write_csv(t);
}

struct JuliaArgs {
  RenderConfig cfg;
  std::string csv_out;
  unsigned workers = 1;
};

std::string render_ppm_with_header(const JuliaArgs& args) {
  const RasterImage img = render(args.cfg, args.workers);
  if (!args.csv_out.empty()) {
    mio::CsvTable t;
    t.columns = {"row", "col", "state", "iterations"};
    for (int j = 0; j < img.height; ++j)
      for (int i = 0; i < img.width; ++i) {
        const auto& px = img.at(i, j);
        const char* state = px.state == PixelOutcome::State::Fatou  ? "fatou"
                            : px.state == PixelOutcome::State::Julia ? "julia"
                                                                     : "undecided";
        t.rows.push_back({std::to_string(j), std::to_string(i), state,
                          std::to_string(px.iterations)});
      }
    write_output(args.csv_out, mio::write_csv(t), false);
  }
  std::string ppm = encode_ppm(img, args.cfg.palette, args.cfg.max_iter);
  // Self-describing header as a PPM comment after the magic.
  std::ostringstream cfg;
  cfg << "# merodyn julia lambda=" << mio::format_double(args.cfg.lambda)
      << " window=" << mio::format_double(args.cfg.window.re_min) << ","
      << mio::format_double(args.cfg.window.re_max) << ","
      << mio::format_double(args.cfg.window.im_min) << ","
      << mio::format_double(args.cfg.window.im_max)
      << " grid=" << args.cfg.width << "x" << args.cfg.height
      << " N=" << args.cfg.max_iter
      << " M=" << mio::format_double(args.cfg.escape_bound)
      << " conv_eps=" << mio::format_double(args.cfg.conv_eps) << " mode="
      << (args.cfg.mode == RenderMode::AttractorAware ? "attractor-aware"
                                                      : "escape-only")
      << "\n";
  ppm.insert(3, cfg.str());
  return ppm;
}

int run_figure(const std::string& id, const std::string& out, unsigned workers) {
  const double ls = lambda_star();
  auto julia_preset = [&](double lambda) {
    JuliaArgs a;
    a.cfg.lambda = lambda;
    a.cfg.width = a.cfg.height = 500;
    a.cfg.max_iter = 250;
    a.workers = workers;
    write_output(out, render_ppm_with_header(a), true);
  };
  if (id == "1") write_output(out, run_cycles(12.0, 2, 1e-6, 10.0, 100000, 1e-12), false);
  else if (id == "2" || id == "2i") write_output(out, run_cobweb(0.9, 0.05, 10), false);
  else if (id == "2ii") write_output(out, run_cobweb(0.9, -0.3, 10), false);
  else if (id == "3" || id == "3i") write_output(out, run_cobweb(1.0, 0.4, 20), false);
  else if (id == "3ii") write_output(out, run_cobweb(1.0, -0.2, 20), false);
  else if (id == "4" || id == "4i") write_output(out, run_cobweb(1.1, 0.03, 10), false);
  else if (id == "4ii") write_output(out, run_cobweb(1.1, -0.25, 10), false);
  else if (id == "5" || id == "5i") write_output(out, run_cobweb(ls, 0.5, 200), false);
  else if (id == "5ii") write_output(out, run_cobweb(11.0, 0.2, 50), false);
  else if (id == "6") write_output(out, run_cobweb(11.0, 1.6, 50), false);
  else if (id == "7")
    write_output(out,
                 run_bifurcation(0.2, 15.0, 500, 20000, 50, SeedRule{}, workers),
                 false);
  else if (id == "8")
    write_output(out,
                 run_lyapunov(std::nullopt, std::make_pair(10.0, 45.0), 200, 2000,
                              500, SeedRule{}),
                 false);
  else if (id == "9" || id == "9a") julia_preset(0.9);
  else if (id == "9b") julia_preset(1.1);
  else if (id == "9c") julia_preset(9.93);
  else if (id == "9d") julia_preset(9.94);
  else {
    std::cerr << "unknown figure id '" << id
              << "' (valid: 1 2[i|ii] 3[i|ii] 4[i|ii] 5[i|ii] 6 7 8 9[a-d])\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical dynamics of the family zeta_lambda(z) = lambda z e^{-z} / (z+1)"};
  app.require_subcommand(1);

  std::string out = "-";
  unsigned workers = default_workers();
  app.add_option("--workers", workers, "worker thread count")
      ->check(CLI::PositiveNumber);

  double lambda = 1.0, tol = 1e-12, seed = 0.0;
  long max_steps = 100000, k = 2000, burn_in = 500, transient = 20000;
  int period = 2, grid = 100000, steps = 200, n = 10, samples = 50;
  std::pair<double, double> interval{1e-6, 10.0};
  std::vector<double> lambda_range;
  std::string seed_rule_spec = "critical";

  auto* fp = app.add_subcommand("fixed-points", "locate and classify real fixed points");
  fp->add_option("--lambda", lambda, "family parameter")->required()->check(CLI::PositiveNumber);
  fp->add_option("--tol", tol, "root tolerance");
  fp->add_option("--out", out, "output path ('-' for stdout)");

  auto* cy = app.add_subcommand("cycles", "locate periodic cycles of a given period");
  cy->add_option("--lambda", lambda)->required()->check(CLI::PositiveNumber);
  cy->add_option("--period", period)->check(CLI::Range(2, 64));
  cy->add_option("--interval", interval, "scan interval lo hi");
  cy->add_option("--grid", grid)->check(CLI::Range(100, 100000000));
  cy->add_option("--tol", tol);
  cy->add_option("--out", out);

  auto* cl = app.add_subcommand("classify", "classify the limit of an orbit");
  cl->add_option("--lambda", lambda)->required()->check(CLI::PositiveNumber);
  cl->add_option("--seed", seed)->required();
  cl->add_option("--max-steps", max_steps)->check(CLI::PositiveNumber);
  cl->add_option("--out", out);

  auto* ly = app.add_subcommand("lyapunov", "Lyapunov exponent estimates");
  ly->add_option("--lambda", lambda)->check(CLI::PositiveNumber);
  ly->add_option("--lambda-range", lambda_range, "sweep range lo hi")->expected(2);
  ly->add_option("--steps", steps, "sweep grid size")->check(CLI::Range(2, 100000000));
  ly->add_option("--k", k)->check(CLI::Range(100L, 1000000000L));
  ly->add_option("--burn-in", burn_in)->check(CLI::NonNegativeNumber);
  ly->add_option("--seed-rule", seed_rule_spec, "'critical' or 'value:<x>'");
  ly->add_option("--out", out);

  auto* cw = app.add_subcommand("cobweb", "cobweb (web diagram) path data");
  cw->add_option("--lambda", lambda)->required()->check(CLI::PositiveNumber);
  cw->add_option("--seed", seed)->required();
  cw->add_option("--n", n, "iteration count")->check(CLI::PositiveNumber);
  cw->add_option("--out", out);

  auto* bf = app.add_subcommand("bifurcation", "bifurcation diagram sweep");
  bf->add_option("--lambda-range", lambda_range, "sweep range lo hi")->expected(2)->required();
  bf->add_option("--steps", steps)->check(CLI::Range(2, 100000000));
  bf->add_option("--transient", transient)->check(CLI::NonNegativeNumber);
  bf->add_option("--samples", samples)->check(CLI::PositiveNumber);
  bf->add_option("--seed-rule", seed_rule_spec);
  bf->add_option("--out", out);

  JuliaArgs ja;
  std::vector<double> window_spec;
  std::string mode_spec = "attractor-aware", palette_spec = "red-white";
  auto* ju = app.add_subcommand("julia", "render a Julia/Fatou image (binary PPM)");
  ju->add_option("--lambda", ja.cfg.lambda)->required()->check(CLI::PositiveNumber);
  ju->add_option("--window", window_spec, "re_min re_max im_min im_max")->expected(4);
  ju->add_option("--width", ja.cfg.width)->check(CLI::PositiveNumber);
  ju->add_option("--height", ja.cfg.height)->check(CLI::PositiveNumber);
  ju->add_option("--n", ja.cfg.max_iter, "max iterations N")->check(CLI::PositiveNumber);
  ju->add_option("--m", ja.cfg.escape_bound, "escape bound M")->check(CLI::PositiveNumber);
  ju->add_option("--conv-eps", ja.cfg.conv_eps)->check(CLI::PositiveNumber);
  ju->add_option("--mode", mode_spec, "'escape-only' or 'attractor-aware'");
  ju->add_option("--palette", palette_spec, "'red-white' or 'iteration-shaded'");
  ju->add_option("--csv-out", ja.csv_out, "also dump per-pixel outcomes as CSV");
  ju->add_option("--out", out);

  std::string figure_id;
  auto* fig = app.add_subcommand("figure", "reproduce a captioned figure preset");
  fig->add_option("id", figure_id, "figure id, e.g. 1, 2i, 5ii, 9d")->required();
  fig->add_option("--out", out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (fp->parsed()) {
      write_output(out, run_fixed_points(lambda, tol), false);
    } else if (cy->parsed()) {
      write_output(out, run_cycles(lambda, period, interval.first, interval.second,
                                   grid, tol), false);
    } else if (cl->parsed()) {
      write_output(out, run_classify(lambda, seed, max_steps), false);
    } else if (ly->parsed()) {
      std::optional<std::pair<double, double>> range;
      if (lambda_range.size() == 2) range = {lambda_range[0], lambda_range[1]};
      else if (!ly->count("--lambda")) {
        std::cerr << "lyapunov: need --lambda or --lambda-range\n";
        return 2;
      }
      write_output(out,
                   run_lyapunov(lambda, range, steps, k, burn_in,
                                parse_seed_rule(seed_rule_spec)),
                   false);
    } else if (cw->parsed()) {
      write_output(out, run_cobweb(lambda, seed, n), false);
    } else if (bf->parsed()) {
      write_output(out,
                   run_bifurcation(lambda_range[0], lambda_range[1], steps,
                                   transient, samples,
                                   parse_seed_rule(seed_rule_spec), workers),
                   false);
    } else if (ju->parsed()) {
      if (window_spec.size() == 4)
        ja.cfg.window = {window_spec[0], window_spec[1], window_spec[2], window_spec[3]};
      if (mode_spec == "escape-only") ja.cfg.mode = RenderMode::EscapeOnly;
      else if (mode_spec == "attractor-aware") ja.cfg.mode = RenderMode::AttractorAware;
      else { std::cerr << "julia: bad --mode '" << mode_spec << "'\n"; return 2; }
      if (palette_spec == "red-white") ja.cfg.palette = Palette::PaperRedWhite;
      else if (palette_spec == "iteration-shaded") ja.cfg.palette = Palette::IterationShaded;
      else { std::cerr << "julia: bad --palette '" << palette_spec << "'\n"; return 2; }
      ja.workers = workers;
      ja.cfg.validate();
      write_output(out, render_ppm_with_header(ja), true);
    } else if (fig->parsed()) {
      return run_figure(figure_id, out, workers);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
