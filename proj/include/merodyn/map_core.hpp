// Core evaluation of the family  zeta_lambda(z) = lambda * z * exp(-z) / (z + 1),
// lambda > 0, together with its derivative, Schwarzian derivative and singular data.
// Everything here is a pure function; real inputs take a dedicated real code path.
#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace merodyn {

// Guard radii around the pole z = -1 and the critical points (roots of z^2+z-1).
inline constexpr double kPoleGuard = 1e-12;
inline constexpr double kCriticalGuard = 1e-9;

struct PoleError : std::domain_error {
  explicit PoleError(double x)
      : std::domain_error("evaluation within pole guard of z = -1 (x = " +
                          std::to_string(x) + ")") {}
};

struct CriticalPointError : std::domain_error {
  explicit CriticalPointError(double x)
      : std::domain_error("Schwarzian derivative singular at critical point (x = " +
                          std::to_string(x) + ")") {}
};

// Second bifurcation parameter (sqrt(2)+1) * e^sqrt(2), computed, never a literal.
inline double lambda_star() {
  static const double value =
      (std::sqrt(2.0) + 1.0) * std::exp(std::sqrt(2.0));
  return value;
}

enum class Regime { BelowOne, One, Middle, LambdaStar, AboveStar };

inline const char* regime_name(Regime r) {
  switch (r) {
    case Regime::BelowOne:   return "below-one";
    case Regime::One:        return "one";
    case Regime::Middle:     return "middle";
    case Regime::LambdaStar: return "lambda-star";
    case Regime::AboveStar:  return "above-star";
  }
  return "?";
}

// Family parameter lambda > 0 with its derived regime.
class Parameter {
 public:
  explicit Parameter(double lambda) : lambda_(lambda) {
    if (!(std::isfinite(lambda) && lambda > 0.0))
      throw std::invalid_argument("lambda must be finite and > 0");
  }

  double lambda() const { return lambda_; }

  Regime regime() const {
    if (lambda_ < 1.0) return Regime::BelowOne;
    if (lambda_ == 1.0) return Regime::One;
    const double ls = lambda_star();
    if (lambda_ < ls) return Regime::Middle;
    if (lambda_ == ls) return Regime::LambdaStar;
    return Regime::AboveStar;
  }

 private:
  double lambda_;
};

struct ComplexPoint {
  double re = 0.0;
  double im = 0.0;

  bool finite() const { return std::isfinite(re) && std::isfinite(im); }
  double abs2() const { return re * re + im * im; }
};

// zeta_lambda(x) on the real axis.  Throws PoleError inside the pole guard.
inline double eval_map(double lambda, double x) {
  if (std::abs(x + 1.0) <= kPoleGuard) throw PoleError(x);
  return lambda * x * std::exp(-x) / (x + 1.0);
}

// Unchecked variant for hot iteration loops: the caller tests the pole guard
// and non-finite results itself.
inline double eval_map_raw(double lambda, double x) {
  return lambda * x * std::exp(-x) / (x + 1.0);
}

inline double eval_map(const Parameter& p, double x) {
  return eval_map(p.lambda(), x);
}

// zeta'_lambda(x) = -lambda (x^2 + x - 1) e^{-x} / (x+1)^2.
inline double eval_derivative(double lambda, double x) {
  if (std::abs(x + 1.0) <= kPoleGuard) throw PoleError(x);
  const double xp1 = x + 1.0;
  return -lambda * (x * x + x - 1.0) * std::exp(-x) / (xp1 * xp1);
}

inline double eval_derivative(const Parameter& p, double x) {
  return eval_derivative(p.lambda(), x);
}

// One complex map step, written out in real arithmetic.  The operations are
// term-for-term symmetric under im -> -im, so conjugation symmetry of orbits
// is exact in IEEE arithmetic.
inline ComplexPoint eval_map_complex(double lambda, ComplexPoint z) {
  const double ex = std::exp(-z.re);
  const double ci = std::cos(z.im);
  const double si = std::sin(z.im);
  // w = z * e^{-z}
  const double wr = ex * (z.re * ci + z.im * si);
  const double wi = ex * (z.im * ci - z.re * si);
  // w / (z + 1)
  const double dr = z.re + 1.0;
  const double den = dr * dr + z.im * z.im;
  return {lambda * (wr * dr + wi * z.im) / den,
          lambda * (wi * dr - wr * z.im) / den};
}

inline ComplexPoint eval_map(const Parameter& p, ComplexPoint z) {
  if (std::abs(z.re + 1.0) <= kPoleGuard && std::abs(z.im) <= kPoleGuard)
    throw PoleError(z.re);
  return eval_map_complex(p.lambda(), z);
}

inline ComplexPoint eval_derivative(const Parameter& p, ComplexPoint z) {
  const double dr = z.re + 1.0;
  if (std::abs(dr) <= kPoleGuard && std::abs(z.im) <= kPoleGuard)
    throw PoleError(z.re);
  const double lambda = p.lambda();
  const double ex = std::exp(-z.re);
  const double ci = std::cos(z.im);
  const double si = std::sin(z.im);
  // q = z^2 + z - 1
  const double qr = z.re * z.re - z.im * z.im + z.re - 1.0;
  const double qi = 2.0 * z.re * z.im + z.im;
  // w = -lambda * q * e^{-z}
  const double er = ex * ci, ei = -ex * si;
  const double wr = -lambda * (qr * er - qi * ei);
  const double wi = -lambda * (qr * ei + qi * er);
  // (z+1)^2
  const double sr = dr * dr - z.im * z.im;
  const double sim = 2.0 * dr * z.im;
  const double den = sr * sr + sim * sim;
  return {(wr * sr + wi * sim) / den, (wi * sr - wr * sim) / den};
}

// Schwarzian derivative, lambda-independent closed form:
//   SD(zeta)(x) = -(x^4 + 2x^3 - 3x^2 - 4x + 18) / (2 (x^2 + x - 1)^2)
inline double eval_schwarzian(double x) {
  if (std::abs(x + 1.0) <= kPoleGuard) throw PoleError(x);
  const double q = x * x + x - 1.0;
  if (std::abs(q) <= kCriticalGuard) throw CriticalPointError(x);
  const double num = ((((x + 2.0) * x - 3.0) * x - 4.0) * x) + 18.0;
  return -num / (2.0 * q * q);
}

// Critical points (roots of x^2 + x - 1), critical values, asymptotic value, pole.
struct SingularData {
  double critical_points[2];  // (-1-sqrt5)/2, (-1+sqrt5)/2
  double critical_values[2];  // images of the critical points under zeta_lambda
  double asymptotic_value;    // 0
  double pole;                // -1
};

inline SingularData singular_data(const Parameter& p) {
  const double s5 = std::sqrt(5.0);
  const double lambda = p.lambda();
  SingularData d{};
  d.critical_points[0] = (-1.0 - s5) / 2.0;
  d.critical_points[1] = (-1.0 + s5) / 2.0;
  d.critical_values[0] = (3.0 + s5) / 2.0 * lambda * std::exp((1.0 + s5) / 2.0);
  d.critical_values[1] = (3.0 - s5) / 2.0 * lambda * std::exp((1.0 - s5) / 2.0);
  d.asymptotic_value = 0.0;
  d.pole = -1.0;
  return d;
}

// Positive critical point (-1+sqrt5)/2; the default orbit seed throughout.
inline double positive_critical_point() {
  return (-1.0 + std::sqrt(5.0)) / 2.0;
}

}  // namespace merodyn
