// Real-axis orbit machinery: iteration with pole/escape bookkeeping,
// limit-regime classification, Lyapunov exponents, cobweb paths and
// bifurcation sweeps.
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "merodyn/fixed_points.hpp"
#include "merodyn/map_core.hpp"

namespace merodyn {

inline constexpr double kConvergenceEps = 1e-9;
inline constexpr double kEscapeBound = 1e8;
// Sub-geometric convergence at the indifferent parameters: lambda = 1 reaches
// its target like 1/n, lambda* only like 1/sqrt(n), hence the looser band.
inline constexpr double kRelaxedEpsOne = 1e-5;
inline constexpr double kRelaxedEpsStar = 5e-3;
inline constexpr long kIndifferentStepCap = 1000000;

struct SeedIsPoleError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct OrbitEscapedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Termination {
  enum class Kind { Converged, Escaped, HitPole, Exhausted };
  Kind kind = Kind::Exhausted;
  long step = 0;        // step at which the terminating event was detected
  double target = 0.0;  // limit value when Converged
};

struct Orbit {
  double seed = 0.0;
  std::vector<double> samples;  // samples[0] == seed
  Termination termination;
};

inline Orbit iterate(const Parameter& p, double seed, long max_steps) {
  if (std::abs(seed + 1.0) <= kPoleGuard)
    throw SeedIsPoleError("seed is the pole -1");
  Orbit orbit;
  orbit.seed = seed;
  orbit.samples.reserve(static_cast<std::size_t>(std::min(max_steps + 1, 1L << 20)));
  orbit.samples.push_back(seed);
  const double lambda = p.lambda();
  double x = seed;
  for (long i = 0; i < max_steps; ++i) {
    const double next = eval_map_raw(lambda, x);
    if (!std::isfinite(next) || std::abs(next) > kEscapeBound) {
      orbit.termination = {Termination::Kind::Escaped, i + 1, 0.0};
      return orbit;
    }
    orbit.samples.push_back(next);
    if (std::abs(next + 1.0) <= kPoleGuard) {
      orbit.termination = {Termination::Kind::HitPole, i + 1, 0.0};
      return orbit;
    }
    if (std::abs(next - x) < kConvergenceEps &&
        std::abs(eval_map_raw(lambda, next) - next) < kConvergenceEps) {
      orbit.termination = {Termination::Kind::Converged, i + 1, next};
      return orbit;
    }
    x = next;
  }
  orbit.termination = {Termination::Kind::Exhausted, max_steps, 0.0};
  return orbit;
}

struct LimitClass {
  enum class Kind { ToZero, ToALambda, ToSqrt2, ToCycle, NonConvergent, PoleOrbit };
  Kind kind = Kind::NonConvergent;
  double target = 0.0;           // fixed-point limit when applicable
  std::optional<PeriodicCycle> cycle;
};

inline const char* limit_name(LimitClass::Kind k) {
  switch (k) {
    case LimitClass::Kind::ToZero:        return "to-zero";
    case LimitClass::Kind::ToALambda:     return "to-a-lambda";
    case LimitClass::Kind::ToSqrt2:       return "to-sqrt2";
    case LimitClass::Kind::ToCycle:       return "to-cycle";
    case LimitClass::Kind::NonConvergent: return "non-convergent";
    case LimitClass::Kind::PoleOrbit:     return "pole-orbit";
  }
  return "?";
}

// Label the orbit limit per regime: 0 below/at lambda = 1, a_lambda in the
// middle range, sqrt(2) at lambda*, and any attracting cycle above lambda*.
// NonConvergent is the honest outcome when nothing is reached.
inline LimitClass classify_limit(const Parameter& p, double seed, long max_steps) {
  if (std::abs(seed + 1.0) <= kPoleGuard)
    throw SeedIsPoleError("seed is the pole -1");

  const Regime regime = p.regime();
  const double lambda = p.lambda();

  double fixed_target = 0.0;
  LimitClass::Kind fixed_kind = LimitClass::Kind::ToZero;
  double eps = kConvergenceEps;
  long cap = max_steps;
  std::optional<PeriodicCycle> cycle;

  switch (regime) {
    case Regime::BelowOne:
      break;
    case Regime::One:
      eps = kRelaxedEpsOne;
      cap = std::min(max_steps, kIndifferentStepCap);
      break;
    case Regime::Middle:
      fixed_target = detail::solve_fp_equation(lambda, kDefaultRootTol);
      fixed_kind = LimitClass::Kind::ToALambda;
      break;
    case Regime::LambdaStar:
      fixed_target = std::sqrt(2.0);
      fixed_kind = LimitClass::Kind::ToSqrt2;
      eps = kRelaxedEpsStar;
      cap = std::min(max_steps, kIndifferentStepCap);
      break;
    case Regime::AboveStar:
      cycle = find_attracting_cycle(p);
      fixed_kind = LimitClass::Kind::NonConvergent;
      break;
  }

  const double cycle_eps = 1e-7;
  double x = seed;
  for (long i = 0; i < cap; ++i) {
    if (regime != Regime::AboveStar) {
      if (std::abs(x - fixed_target) < eps)
        return {fixed_kind, fixed_target, std::nullopt};
    } else if (cycle) {
      // Converged to the cycle when one full period tracks the cycle points.
      for (std::size_t j = 0; j < cycle->points.size(); ++j) {
        if (std::abs(x - cycle->points[j]) >= cycle_eps) continue;
        double y = x;
        bool tracks = true;
        for (int k = 1; k <= cycle->period; ++k) {
          y = eval_map_raw(lambda, y);
          const double expect =
              cycle->points[(j + static_cast<std::size_t>(k)) % cycle->points.size()];
          if (!std::isfinite(y) || std::abs(y - expect) >= cycle_eps) {
            tracks = false;
            break;
          }
        }
        if (tracks) return {LimitClass::Kind::ToCycle, 0.0, cycle};
      }
    }
    double next = eval_map_raw(lambda, x);
    // Far-field continuation.  A real orbit that shoots past the pole lands
    // far out on the positive axis, where e^{-x} underflows and the computed
    // image collapses to exactly 0 (or, from the far negative side,
    // overflows to +inf even though the true image is a huge positive real
    // whose own image is again a positive number below DBL_MIN).  In both
    // cases the true iterate is a tiny positive value, so clamp to the
    // smallest normal double: this keeps the orbit off the artificial fixed
    // point at 0 and only shortens the subsequent climb, leaving the limit
    // unchanged.
    if ((next == 0.0 && x != 0.0) ||
        next == std::numeric_limits<double>::infinity())
      next = std::numeric_limits<double>::min();
    if (!std::isfinite(next))
      return {LimitClass::Kind::NonConvergent, 0.0, std::nullopt};
    if (std::abs(next + 1.0) <= kPoleGuard)
      return {LimitClass::Kind::PoleOrbit, 0.0, std::nullopt};
    x = next;
  }
  return {LimitClass::Kind::NonConvergent, 0.0, std::nullopt};
}

struct LyapunovEstimate {
  double lambda = 0.0;
  double seed = 0.0;
  long terms_used = 0;
  long burn_in = 0;
  double value = 0.0;
  long skipped_terms = 0;  // near-pole or near-critical iterates, excluded
};

// Time average of ln |zeta'(x_i)| over the post-burn-in orbit.
inline LyapunovEstimate lyapunov(const Parameter& p, double seed, long k,
                                 long burn_in = 0) {
  if (k < 100) throw std::invalid_argument("k must be >= 100");
  if (std::abs(seed + 1.0) <= kPoleGuard)
    throw SeedIsPoleError("seed is the pole -1");
  const double lambda = p.lambda();
  LyapunovEstimate est;
  est.lambda = lambda;
  est.seed = seed;
  est.burn_in = burn_in;
  double x = seed;
  double sum = 0.0;
  for (long i = 0; i < burn_in + k; ++i) {
    if (i >= burn_in) {
      const double q = x * x + x - 1.0;
      if (std::abs(x + 1.0) <= kPoleGuard || std::abs(q) <= kCriticalGuard) {
        ++est.skipped_terms;
      } else {
        sum += std::log(std::abs(eval_derivative(lambda, x)));
        ++est.terms_used;
      }
    }
    x = eval_map_raw(lambda, x);
    if (!std::isfinite(x) || std::abs(x) > kEscapeBound)
      throw OrbitEscapedError("orbit escaped before k terms were collected");
  }
  est.value = sum / static_cast<double>(est.terms_used);
  return est;
}

struct CobwebPath {
  // (x0,0) -> (x0,z(x0)) -> (z(x0),z(x0)) -> ... ; 2n+1 vertices when the
  // full path completes, fewer if the orbit hits the pole or escapes.
  std::vector<std::pair<double, double>> vertices;
};

inline CobwebPath cobweb(const Parameter& p, double seed, int n) {
  if (std::abs(seed + 1.0) <= kPoleGuard)
    throw SeedIsPoleError("seed is the pole -1");
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  CobwebPath path;
  path.vertices.reserve(static_cast<std::size_t>(2 * n + 1));
  const double lambda = p.lambda();
  double x = seed;
  path.vertices.emplace_back(x, 0.0);
  for (int i = 0; i < n; ++i) {
    const double y = eval_map_raw(lambda, x);
    if (!std::isfinite(y) || std::abs(y) > kEscapeBound) break;
    path.vertices.emplace_back(x, y);
    path.vertices.emplace_back(y, y);
    if (std::abs(y + 1.0) <= kPoleGuard) break;
    x = y;
  }
  return path;
}

struct SeedRule {
  enum class Kind { CriticalPoint, FixedSeed };
  Kind kind = Kind::CriticalPoint;
  double value = 0.0;

  double seed() const {
    return kind == Kind::CriticalPoint ? positive_critical_point() : value;
  }
};

struct BifurcationRecord {
  double lambda = 0.0;
  std::vector<double> attractor_samples;  // empty when the orbit escaped or hit the pole
};

inline BifurcationRecord bifurcation_point(double lambda, long transient,
                                           int samples, double seed) {
  BifurcationRecord rec;
  rec.lambda = lambda;
  double x = seed;
  for (long i = 0; i < transient; ++i) {
    x = eval_map_raw(lambda, x);
    if (!std::isfinite(x) || std::abs(x) > kEscapeBound ||
        std::abs(x + 1.0) <= kPoleGuard)
      return rec;
  }
  rec.attractor_samples.reserve(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) {
    x = eval_map_raw(lambda, x);
    if (!std::isfinite(x) || std::abs(x) > kEscapeBound ||
        std::abs(x + 1.0) <= kPoleGuard) {
      rec.attractor_samples.clear();
      return rec;
    }
    rec.attractor_samples.push_back(x);
  }
  return rec;
}

// Uniform lambda grid (inclusive endpoints).  Records are indexed by grid
// position, so the output is independent of worker scheduling.
inline std::vector<BifurcationRecord> bifurcation_sweep(
    double lambda_min, double lambda_max, int steps, long transient,
    int samples, SeedRule seed_rule = {}, unsigned workers = 1) {
  if (!(0.0 < lambda_min && lambda_min < lambda_max))
    throw std::invalid_argument("require 0 < lambda_min < lambda_max");
  if (steps < 2) throw std::invalid_argument("steps must be >= 2");
  const double seed = seed_rule.seed();
  std::vector<BifurcationRecord> records(static_cast<std::size_t>(steps));
  auto work = [&](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      const double lambda =
          lambda_min + (lambda_max - lambda_min) * static_cast<double>(i) / (steps - 1);
      records[static_cast<std::size_t>(i)] =
          bifurcation_point(lambda, transient, samples, seed);
    }
  };
  if (workers <= 1) {
    work(0, steps);
  } else {
    std::vector<std::thread> pool;
    const int chunk = (steps + static_cast<int>(workers) - 1) / static_cast<int>(workers);
    for (unsigned w = 0; w < workers; ++w) {
      const int begin = static_cast<int>(w) * chunk;
      const int end = std::min(steps, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(work, begin, end);
    }
    for (auto& t : pool) t.join();
  }
  return records;
}

}  // namespace merodyn
