// Real fixed points and periodic cycles of zeta_lambda.
//
// Nonzero fixed points solve (x+1) e^x = lambda, which is strictly increasing
// on (-1, inf) and negative on (-inf, -1), so there is exactly one nonzero
// root for lambda != 1.  Cycles of period n are sign-change roots of
// zeta^n(x) - x on a scan grid, bisected and Newton-polished.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "merodyn/map_core.hpp"

namespace merodyn {

// Half-width of the |multiplier| = 1 band that classifies as indifferent.
// 1e-5 rather than tighter: the reproduced flip-bifurcation parameter
// lambda = 18.44505 is a rounded value whose true cycle multiplier is
// -1.0000024.
inline constexpr double kIndifferentBand = 1e-5;

inline constexpr double kDefaultRootTol = 1e-12;

enum class Stability { Attracting, Repelling, RationallyIndifferent };

inline const char* stability_name(Stability s) {
  switch (s) {
    case Stability::Attracting:             return "attracting";
    case Stability::Repelling:              return "repelling";
    case Stability::RationallyIndifferent:  return "indifferent";
  }
  return "?";
}

inline Stability classify_multiplier(double multiplier) {
  const double m = std::abs(multiplier);
  if (std::abs(m - 1.0) <= kIndifferentBand)
    return Stability::RationallyIndifferent;
  return m < 1.0 ? Stability::Attracting : Stability::Repelling;
}

struct FixedPointRecord {
  double location = 0.0;
  double multiplier = 0.0;
  Stability stability = Stability::Attracting;
  bool is_origin = false;
};

struct PeriodicCycle {
  int period = 0;
  std::vector<double> points;  // orbit order, starting from the smallest element
  double multiplier = 0.0;     // product of derivatives along the cycle
  Stability stability = Stability::Attracting;
};

struct ToleranceError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NotAFixedPointError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline double fp_residual(double x, double lambda) {
  return (x + 1.0) * std::exp(x) - lambda;
}

// Unique root of (x+1)e^x = lambda on (-1, inf); equals 0 iff lambda == 1.
inline double solve_fp_equation(double lambda, double tol) {
  double lo = -1.0 + 1e-15;
  double hi = 1.0;
  while (fp_residual(hi, lambda) < 0.0) hi *= 2.0;
  if (tol < std::nextafter(hi, INFINITY) - hi)
    throw ToleranceError("tol below representable spacing near the root");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // hit double resolution
    (fp_residual(mid, lambda) < 0.0 ? lo : hi) = mid;
  }
  double x = 0.5 * (lo + hi);
  // Newton polish on g(x) = (x+1)e^x - lambda, g'(x) = (x+2)e^x.
  for (int i = 0; i < 50; ++i) {
    const double g = fp_residual(x, lambda);
    const double gp = (x + 2.0) * std::exp(x);
    const double step = g / gp;
    const double next = x - step;
    if (!std::isfinite(next) || next <= -1.0) break;
    x = next;
    if (std::abs(step) < 0.25 * tol) break;
  }
  return x;
}

}  // namespace detail

inline FixedPointRecord classify_fixed_point(const Parameter& p, double x_f,
                                             double tol = kDefaultRootTol) {
  if (std::abs(eval_map(p, x_f) - x_f) > 10.0 * tol)
    throw NotAFixedPointError("point is not a fixed point within tolerance");
  FixedPointRecord rec;
  rec.location = x_f;
  rec.is_origin = (x_f == 0.0);
  rec.multiplier = rec.is_origin ? p.lambda() : eval_derivative(p, x_f);
  rec.stability = classify_multiplier(rec.multiplier);
  return rec;
}

// Origin record first, then the single nonzero root when lambda != 1.
inline std::vector<FixedPointRecord> solve_fixed_points(
    const Parameter& p, double tol = kDefaultRootTol) {
  if (!(tol > 0.0)) throw ToleranceError("tol must be > 0");
  std::vector<FixedPointRecord> out;
  out.push_back(classify_fixed_point(p, 0.0, tol));
  if (p.regime() != Regime::One) {
    const double x = detail::solve_fp_equation(p.lambda(), tol);
    out.push_back(classify_fixed_point(p, x, tol));
  }
  return out;
}

struct CycleScanReport {
  int skipped_brackets = 0;  // brackets abandoned near the pole / overflow
};

namespace detail {

// zeta^n(x); nullopt when the orbit leaves the representable range or hits
// the pole guard along the way.
inline std::optional<double> iterate_n(double lambda, double x, int n) {
  for (int i = 0; i < n; ++i) {
    if (std::abs(x + 1.0) <= kPoleGuard) return std::nullopt;
    x = eval_map_raw(lambda, x);
    if (!std::isfinite(x)) return std::nullopt;
  }
  return x;
}

inline std::optional<double> cycle_gap(double lambda, double x, int n) {
  const auto fx = iterate_n(lambda, x, n);
  if (!fx) return std::nullopt;
  return *fx - x;
}

}  // namespace detail

inline double cycle_multiplier_value(const Parameter& p,
                                     const std::vector<double>& points) {
  double m = 1.0;
  for (double x : points) m *= eval_derivative(p, x);
  return m;
}

// Recompute a cycle's multiplier and stability from its points.
inline PeriodicCycle cycle_multiplier(const Parameter& p, PeriodicCycle cycle) {
  cycle.multiplier = cycle_multiplier_value(p, cycle.points);
  cycle.stability = classify_multiplier(cycle.multiplier);
  return cycle;
}

inline std::vector<PeriodicCycle> find_cycles(
    const Parameter& p, int period, double lo = 1e-6, double hi = 10.0,
    int grid = 100000, double tol = kDefaultRootTol,
    CycleScanReport* report = nullptr) {
  if (period < 2) throw std::invalid_argument("period must be >= 2");
  if (grid < 100) throw std::invalid_argument("grid must be >= 100");
  if (!(lo < hi)) throw std::invalid_argument("empty scan interval");

  const double lambda = p.lambda();
  CycleScanReport local{};
  std::vector<double> roots;

  double prev_x = lo;
  std::optional<double> prev_g = detail::cycle_gap(lambda, prev_x, period);
  for (int i = 1; i <= grid; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / grid;
    const auto g = detail::cycle_gap(lambda, x, period);
    if (!g || !prev_g) {
      if (!g) ++local.skipped_brackets;
      prev_x = x;
      prev_g = g;
      continue;
    }
    if ((*prev_g < 0.0) != (*g < 0.0) || *g == 0.0) {
      double a = prev_x, b = x;
      double ga = *prev_g;
      bool bad = false;
      while (b - a > tol) {
        const double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) break;
        const auto gm = detail::cycle_gap(lambda, mid, period);
        if (!gm) { bad = true; ++local.skipped_brackets; break; }
        if ((ga < 0.0) == (*gm < 0.0)) { a = mid; ga = *gm; } else { b = mid; }
      }
      if (!bad) {
        double r = 0.5 * (a + b);
        // Newton polish on h(x) = zeta^n(x) - x with the chain-rule derivative.
        for (int it = 0; it < 50; ++it) {
          double fx = r, dh = 1.0;
          bool ok = true;
          for (int k = 0; k < period; ++k) {
            if (std::abs(fx + 1.0) <= kPoleGuard) { ok = false; break; }
            dh *= eval_derivative(lambda, fx);
            fx = eval_map_raw(lambda, fx);
            if (!std::isfinite(fx)) { ok = false; break; }
          }
          if (!ok) break;
          const double h = fx - r;
          const double hp = dh - 1.0;
          if (hp == 0.0) break;
          const double next = r - h / hp;
          if (!std::isfinite(next) || next < a - (b - a) || next > b + (b - a))
            break;  // keep the bisection value on divergence
          if (std::abs(next - r) < 0.25 * tol) { r = next; break; }
          r = next;
        }
        roots.push_back(r);
      }
    }
    prev_x = x;
    prev_g = *g;
  }

  // Drop fixed points and roots whose true period properly divides `period`.
  const double tol_distinct = 100.0 * tol;
  std::vector<double> proper;
  for (double r : roots) {
    bool divisor_period = false;
    for (int d = 1; d < period; ++d) {
      if (period % d != 0) continue;
      const auto fd = detail::iterate_n(lambda, r, d);
      if (fd && std::abs(*fd - r) <= tol_distinct) { divisor_period = true; break; }
    }
    if (!divisor_period) proper.push_back(r);
  }

  // Group roots into cycles by the smallest orbit element.
  std::vector<PeriodicCycle> cycles;
  for (double r : proper) {
    std::vector<double> orbit{r};
    bool ok = true;
    double x = r;
    for (int k = 1; k < period; ++k) {
      if (std::abs(x + 1.0) <= kPoleGuard) { ok = false; break; }
      x = eval_map_raw(lambda, x);
      if (!std::isfinite(x)) { ok = false; break; }
      orbit.push_back(x);
    }
    if (!ok) continue;
    const std::size_t min_idx = static_cast<std::size_t>(
        std::min_element(orbit.begin(), orbit.end()) - orbit.begin());
    std::rotate(orbit.begin(), orbit.begin() + min_idx, orbit.end());

    bool duplicate = false;
    for (const auto& c : cycles)
      if (std::abs(c.points.front() - orbit.front()) <= tol_distinct)
        duplicate = true;
    if (duplicate) continue;

    PeriodicCycle c;
    c.period = period;
    c.points = std::move(orbit);
    c.multiplier = cycle_multiplier_value(p, c.points);
    c.stability = classify_multiplier(c.multiplier);
    cycles.push_back(std::move(c));
  }
  std::sort(cycles.begin(), cycles.end(),
            [](const PeriodicCycle& a, const PeriodicCycle& b) {
              return a.points.front() < b.points.front();
            });
  if (report) *report = local;
  return cycles;
}

// Attracting cycle search used by limit classification and the renderer:
// smallest period in [2, max_period] with an attracting cycle on (0, 10].
inline std::optional<PeriodicCycle> find_attracting_cycle(const Parameter& p,
                                                          int max_period = 8) {
  for (int n = 2; n <= max_period; ++n) {
    for (const auto& c : find_cycles(p, n))
      if (c.stability == Stability::Attracting) return c;
  }
  return std::nullopt;
}

}  // namespace merodyn
