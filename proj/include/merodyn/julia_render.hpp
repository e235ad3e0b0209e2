// Escape/convergence-time rendering of Julia and Fatou sets of zeta_lambda.
//
// EscapeOnly mode is the plain four-step algorithm: iterate each grid
// midpoint, color it Fatou once its modulus passes the bound M, leave it
// Undecided otherwise.  AttractorAware mode additionally detects convergence
// to the regime's real attractor (fixed point, sqrt(2), or any attracting
// cycle) and resolves non-escaping, non-converging pixels to Julia.
#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "merodyn/fixed_points.hpp"
#include "merodyn/map_core.hpp"
#include "merodyn/orbits.hpp"

namespace merodyn {

enum class RenderMode { EscapeOnly, AttractorAware };
enum class Palette { PaperRedWhite, IterationShaded };

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Window {
  double re_min = -1.0, re_max = 1.0;
  double im_min = -1.0, im_max = 1.0;
};

struct RenderConfig {
  double lambda = 1.0;
  Window window;
  int width = 1000;
  int height = 1000;
  int max_iter = 250;          // N
  // M.  On the real line the first iterate past the pole has modulus at
  // least 13.2*lambda (the minimum of |zeta| on (-inf,-1), attained at the
  // critical point -(1+sqrt(5))/2), while bounded real dynamics stay below
  // 0.206*lambda (the maximum of zeta on (0,inf)).  A bound of 10 therefore
  // flags the basin's far route through the essential-singularity direction
  // for every lambda of interest without clipping bounded orbits;
  // a much larger bound would leave far excursions unable to either escape
  // or re-converge within a 250-iteration budget.
  double escape_bound = 10.0;
  double conv_eps = 1e-6;
  RenderMode mode = RenderMode::AttractorAware;
  Palette palette = Palette::PaperRedWhite;

  void validate() const {
    if (!(std::isfinite(lambda) && lambda > 0.0)) throw ConfigError("lambda must be > 0");
    if (!(window.re_min < window.re_max && window.im_min < window.im_max))
      throw ConfigError("degenerate window");
    if (width < 1 || height < 1) throw ConfigError("grid must be at least 1x1");
    if (max_iter < 1) throw ConfigError("max_iter must be >= 1");
    if (!(escape_bound > 0.0)) throw ConfigError("escape bound must be > 0");
    if (!(conv_eps > 0.0)) throw ConfigError("conv_eps must be > 0");
  }

  // Midpoint of grid cell (col i, row j); row 0 is the top of the window.
  ComplexPoint pixel_midpoint(int i, int j) const {
    const double d_re = (window.re_max - window.re_min) / width;
    const double d_im = (window.im_max - window.im_min) / height;
    return {window.re_min + (i + 0.5) * d_re, window.im_max - (j + 0.5) * d_im};
  }
};

struct PixelOutcome {
  enum class State : std::uint8_t { Fatou, Julia, Undecided };
  State state = State::Undecided;
  int iterations = 0;
};

struct RasterImage {
  int width = 0;
  int height = 0;
  std::vector<PixelOutcome> outcomes;  // row-major

  const PixelOutcome& at(int col, int row) const {
    return outcomes[static_cast<std::size_t>(row) * width + col];
  }
};

// Real attractor points the AttractorAware mode tests against.  Empty when
// the regime has none reachable (above lambda* with no attracting cycle).
inline std::vector<double> resolve_attractors(const Parameter& p) {
  switch (p.regime()) {
    case Regime::BelowOne:
    case Regime::One:
      return {0.0};
    case Regime::Middle:
      return {detail::solve_fp_equation(p.lambda(), kDefaultRootTol)};
    case Regime::LambdaStar:
      return {std::sqrt(2.0)};
    case Regime::AboveStar: {
      if (auto c = find_attracting_cycle(p)) return c->points;
      return {};
    }
  }
  return {};
}

inline PixelOutcome classify_pixel(const RenderConfig& cfg,
                                   const std::vector<double>& attractors,
                                   ComplexPoint z0) {
  const double m2 = cfg.escape_bound * cfg.escape_bound;
  const double eps2 = cfg.conv_eps * cfg.conv_eps;
  const bool aware = cfg.mode == RenderMode::AttractorAware;
  ComplexPoint z = z0;
  for (int i = 0; i < cfg.max_iter; ++i) {
    const double dr = z.re + 1.0;
    if (std::abs(dr) <= kPoleGuard && std::abs(z.im) <= kPoleGuard)
      return {PixelOutcome::State::Julia, i};
    if (!z.finite() || z.abs2() > m2)
      return {PixelOutcome::State::Fatou, i};
    if (aware) {
      for (double a : attractors) {
        const double xr = z.re - a;
        if (xr * xr + z.im * z.im < eps2)
          return {PixelOutcome::State::Fatou, i};
      }
    }
    z = eval_map_complex(cfg.lambda, z);
  }
  if (aware) return {PixelOutcome::State::Julia, cfg.max_iter};
  return {PixelOutcome::State::Undecided, cfg.max_iter};
}

inline PixelOutcome classify_pixel(const RenderConfig& cfg, ComplexPoint z0) {
  cfg.validate();
  const std::vector<double> attractors =
      cfg.mode == RenderMode::AttractorAware
          ? resolve_attractors(Parameter(cfg.lambda))
          : std::vector<double>{};
  return classify_pixel(cfg, attractors, z0);
}

// Rows are the parallel work unit; the outcome grid is pre-sized and each
// worker writes disjoint rows, so images are identical for any worker count.
inline RasterImage render(const RenderConfig& cfg, unsigned workers = 1) {
  cfg.validate();
  const std::vector<double> attractors =
      cfg.mode == RenderMode::AttractorAware
          ? resolve_attractors(Parameter(cfg.lambda))
          : std::vector<double>{};

  RasterImage img;
  img.width = cfg.width;
  img.height = cfg.height;
  img.outcomes.resize(static_cast<std::size_t>(cfg.width) * cfg.height);

  auto render_rows = [&](int row_begin, int row_end) {
    for (int j = row_begin; j < row_end; ++j) {
      PixelOutcome* row = img.outcomes.data() + static_cast<std::size_t>(j) * cfg.width;
      for (int i = 0; i < cfg.width; ++i)
        row[i] = classify_pixel(cfg, attractors, cfg.pixel_midpoint(i, j));
    }
  };

  if (workers <= 1) {
    render_rows(0, cfg.height);
  } else {
    std::vector<std::thread> pool;
    const int chunk = (cfg.height + static_cast<int>(workers) - 1) /
                      static_cast<int>(workers);
    for (unsigned w = 0; w < workers; ++w) {
      const int begin = static_cast<int>(w) * chunk;
      const int end = std::min(cfg.height, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(render_rows, begin, end);
    }
    for (auto& t : pool) t.join();
  }
  return img;
}

// Binary PPM, "P6", maxval 255.  PaperRedWhite: Fatou red, Julia/Undecided
// white.  IterationShaded: Fatou on a linear ramp by step, Julia white.
inline std::string encode_ppm(const RasterImage& img, Palette palette,
                              int max_iter = 250) {
  std::string out = "P6\n" + std::to_string(img.width) + " " +
                    std::to_string(img.height) + "\n255\n";
  out.reserve(out.size() + img.outcomes.size() * 3);
  for (const PixelOutcome& px : img.outcomes) {
    unsigned char rgb[3] = {255, 255, 255};
    if (px.state == PixelOutcome::State::Fatou) {
      if (palette == Palette::PaperRedWhite) {
        rgb[1] = rgb[2] = 0;
      } else {
        const int n = std::max(1, max_iter);
        const int step = std::min(px.iterations, n);
        const unsigned char v =
            static_cast<unsigned char>(255 - (200 * step) / n);
        rgb[0] = v;
        rgb[1] = static_cast<unsigned char>(v / 2);
        rgb[2] = 0;
      }
    }
    out.append(reinterpret_cast<const char*>(rgb), 3);
  }
  return out;
}

}  // namespace merodyn
