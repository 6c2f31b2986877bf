#include "unclab/student_t.hpp"

#include <cmath>
#include <limits>

#include "unclab/errors.hpp"

namespace unclab {

namespace {

// Continued fraction for the incomplete beta (Lentz's method, textbook
// coefficients). Valid for x < (a+1)/(a+b+2); the caller applies the
// symmetry I_x(a,b) = 1 - I_{1-x}(b,a) otherwise.
double incbeta_continued_fraction(double a, double b, double x) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-15;
  constexpr int max_terms = 2000000;

  double c = 1.0;
  double d = 1.0 - (a + b) * x / (a + 1.0);
  if (std::abs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double result = d;

  for (int m = 1; m <= max_terms; ++m) {
    const double dm = static_cast<double>(m);
    // even-step coefficient
    double numer = dm * (b - dm) * x / ((a + 2.0 * dm - 1.0) * (a + 2.0 * dm));
    d = 1.0 + numer * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + numer / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    result *= c * d;
    // odd-step coefficient
    numer = -(a + dm) * (a + b + dm) * x / ((a + 2.0 * dm) * (a + 2.0 * dm + 1.0));
    d = 1.0 + numer * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + numer / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = c * d;
    result *= delta;
    if (std::abs(delta - 1.0) < eps) return result;
  }
  throw numeric_error("incomplete_beta: continued fraction did not converge");
}

double t_pdf(double t, double dfd) {
  const double log_norm = std::lgamma(0.5 * (dfd + 1.0)) - std::lgamma(0.5 * dfd) -
                          0.5 * std::log(dfd * M_PI);
  return std::exp(log_norm - 0.5 * (dfd + 1.0) * std::log1p(t * t / dfd));
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw validation_error("incomplete_beta: a, b must be > 0");
  if (!(x >= 0.0 && x <= 1.0)) throw validation_error("incomplete_beta: x must be in [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;

  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * incbeta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                        b * std::log1p(-x) + a * std::log(x)) *
                   incbeta_continued_fraction(b, a, 1.0 - x) / b;
}

double t_cdf(double t, int df) {
  if (df < 1) throw validation_error("t_cdf: df must be >= 1");
  if (t == 0.0) return 0.5;
  const double dfd = static_cast<double>(df);
  const double x = dfd / (dfd + t * t);
  const double half_tail = 0.5 * incomplete_beta(0.5 * dfd, 0.5, x);
  return t > 0.0 ? 1.0 - half_tail : half_tail;
}

double t_quantile(int df, double prob) {
  if (df < 1) throw validation_error("t_quantile: df must be >= 1");
  if (!(prob > 0.0 && prob < 1.0)) throw validation_error("t_quantile: prob must be in (0, 1)");
  if (prob == 0.5) return 0.0;
  // Solve on the upper half and mirror.
  const bool upper = prob > 0.5;
  const double target = upper ? prob : 1.0 - prob;

  double lo = 0.0;
  double hi = 1.0;
  while (t_cdf(hi, df) < target) {
    hi *= 2.0;
    if (hi > 1e300) throw numeric_error("t_quantile: bracket expansion failed");
  }
  // Bisection until the interval is small, then Newton polish.
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (t_cdf(mid, df) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-12 * (1.0 + hi)) break;
  }
  double q = 0.5 * (lo + hi);
  const double dfd = static_cast<double>(df);
  for (int i = 0; i < 8; ++i) {
    const double err = t_cdf(q, df) - target;
    if (std::abs(err) < 1e-14) break;
    const double dens = t_pdf(q, dfd);
    if (dens <= 0.0) break;
    q -= err / dens;
  }
  return upper ? q : -q;
}

}  // namespace unclab
