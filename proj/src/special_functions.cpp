#include "chanres/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "chanres/errors.hpp"

namespace chanres {
namespace {

constexpr double kPiD = 3.14159265358979323846;
constexpr double kEulerGamma = 0.57721566490153286061;
constexpr double kSeriesLimit = 2.0;      // power series for J, Y below this
constexpr double kAsymptoticLimit = 25.0;  // Hankel expansion above this

void check_order(int m) {
  if (m < 0) throw std::invalid_argument("Bessel order must be non-negative");
}

void check_oscillatory_argument(double x, bool allow_zero) {
  if (std::isnan(x) || x < 0.0 || (!allow_zero && x == 0.0) || x > kMaxBesselArgument) {
    throw std::invalid_argument("Bessel argument out of range: " + std::to_string(x));
  }
}

void check_modified_argument(double x) {
  if (!(x > 0.0) || std::isinf(x)) {
    throw std::invalid_argument("modified Bessel argument must be positive: " + std::to_string(x));
  }
}

// J_m(x) = sum_k (-1)^k (x/2)^(2k+m) / (k! (k+m)!). Used for x <= 2 only.
double j_series(int m, double x) {
  const double half = 0.5 * x;
  double term = 1.0;
  for (int j = 1; j <= m; ++j) term *= half / j;
  const double q = -half * half;
  double sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<double>(k) * (k + m));
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

// Hankel asymptotic P, Q for order nu in {0, 1}, summed to the smallest term.
void hankel_pq(int nu, double x, double& p, double& q) {
  const double mu = 4.0 * nu * nu;
  const double eight_x = 8.0 * x;
  p = 1.0;
  q = 0.0;
  double a = 1.0;  // a_k(nu) / (8x)^k with running sign handled below
  double last = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    a *= (mu - odd * odd) / (k * eight_x);
    const double mag = std::abs(a);
    if (mag > last) break;
    last = mag;
    // k odd feeds Q, k even feeds P; signs alternate within each series.
    if (k % 2 == 1) {
      q += ((k / 2) % 2 == 0 ? a : -a);
    } else {
      p += ((k / 2) % 2 == 0 ? a : -a);
    }
    if (mag < 1e-18) break;
  }
}

// J_nu, Y_nu for nu in {0, 1} from the Hankel expansion.
void hankel_jy(int nu, double x, double& j, double& y) {
  double p, q;
  hankel_pq(nu, x, p, q);
  // chi = x - (nu/2 + 1/4) pi, expanded to keep the phase accurate at large x.
  const double phase = (0.5 * nu + 0.25) * kPiD;
  const double cx = std::cos(x);
  const double sx = std::sin(x);
  const double cp = std::cos(phase);
  const double sp = std::sin(phase);
  const double cchi = cx * cp + sx * sp;
  const double schi = sx * cp - cx * sp;
  const double amp = std::sqrt(2.0 / (kPiD * x));
  j = amp * (p * cchi - q * schi);
  y = amp * (p * schi + q * cchi);
}

// Miller backward recurrence: returns J_0..J_nmax at x > 0, normalised with
// J_0 + 2 sum J_2k = 1.
std::vector<double> miller_sequence(int nmax, double x) {
  const double top = std::max(static_cast<double>(nmax), x);
  int start = static_cast<int>(top + 40.0 + 2.0 * std::sqrt(40.0 * top));
  start += start % 2;
  std::vector<double> jn(static_cast<std::size_t>(nmax) + 1, 0.0);
  double next = 0.0;
  double current = 1e-300;
  double norm = 0.0;
  for (int k = start; k >= 1; --k) {
    const double prev = (2.0 * k / x) * current - next;
    next = current;
    current = prev;  // now holds J_{k-1}
    if (k - 1 <= nmax) jn[static_cast<std::size_t>(k - 1)] = current;
    if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * current;
    if (std::abs(current) > 1e250) {
      current *= 1e-250;
      next *= 1e-250;
      norm *= 1e-250;
      for (double& v : jn) v *= 1e-250;
    }
  }
  norm += current;  // J_0
  for (double& v : jn) v /= norm;
  return jn;
}

// J_0 .. J_{2K+1} at moderate x, used by the Neumann series for Y_0 and Y_1.
void neumann_y01(double x, double& y0, double& y1) {
  const int kmax = static_cast<int>(x + 40.0 + 2.0 * std::sqrt(40.0 * x));
  const std::vector<double> jn = miller_sequence(2 * kmax + 2, x);
  const double lg = std::log(0.5 * x) + kEulerGamma;
  double s0 = 0.0;
  double s1 = 0.0;
  for (int k = 1; k <= kmax; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    s0 += sign * jn[static_cast<std::size_t>(2 * k)] / k;
    s1 += sign * (jn[static_cast<std::size_t>(2 * k - 1)] - jn[static_cast<std::size_t>(2 * k + 1)]) / k;
  }
  y0 = (2.0 / kPiD) * lg * jn[0] - (4.0 / kPiD) * s0;
  y1 = -(2.0 / kPiD) * jn[0] / x + (2.0 / kPiD) * lg * jn[1] + (2.0 / kPiD) * s1;
}

// Small-argument logarithmic series for Y_0, Y_1.
void series_y01(double x, double& y0, double& y1) {
  const double half = 0.5 * x;
  const double lg = std::log(half);
  const double q = half * half;
  // Y_0
  double term = 1.0;
  double harmonic = 0.0;
  double s0 = 0.0;
  for (int k = 1; k < 100; ++k) {
    term *= -q / (static_cast<double>(k) * k);
    harmonic += 1.0 / k;
    s0 -= term * harmonic;  // (-1)^{k+1} H_k q^k / (k!)^2
    if (std::abs(term * harmonic) < 1e-18 * std::abs(s0)) break;
  }
  y0 = (2.0 / kPiD) * (lg + kEulerGamma) * j_series(0, x) + (2.0 / kPiD) * s0;
  // Y_1: psi(k+1) + psi(k+2) = -2 gamma + H_k + H_{k+1}
  term = half;  // (x/2)^{2k+1} / (k! (k+1)!) at k = 0
  double hk = 0.0;
  double s1 = 0.0;
  for (int k = 0; k < 100; ++k) {
    if (k > 0) {
      term *= -q / (static_cast<double>(k) * (k + 1));
      hk += 1.0 / k;
    }
    const double psi_sum = -2.0 * kEulerGamma + hk + hk + 1.0 / (k + 1);
    s1 += term * psi_sum;
    if (k > 2 && std::abs(term * psi_sum) < 1e-18 * std::abs(s1)) break;
  }
  y1 = -2.0 / (kPiD * x) + (2.0 / kPiD) * lg * j_series(1, x) - s1 / kPiD;
}

// Forward recurrence from (f_0, f_1) up to order m.
double forward_recurrence(int m, double x, double f0, double f1) {
  if (m == 0) return f0;
  double prev = f0;
  double cur = f1;
  for (int n = 1; n < m; ++n) {
    const double next = (2.0 * n / x) * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

// e^{x} K_m(x) = int_0^inf exp(-x (cosh t - 1)) cosh(m t) dt by the
// trapezoidal rule, which converges geometrically for this analytic integrand.
double k_scaled_integral(int m, double x) {
  const double h = std::min(0.1, 0.6 / std::sqrt(x));
  const double t_peak = m > 0 ? std::asinh(m / x) : 0.0;
  const double g_peak = -x * (std::cosh(t_peak) - 1.0) + m * t_peak;
  auto integrand = [&](double t) {
    const double base = -x * (std::cosh(t) - 1.0) - g_peak;
    return std::exp(base + m * t) + std::exp(base - m * t);
  };
  double sum = 0.5 * integrand(0.0);
  for (int i = 1; i < 1000000; ++i) {
    const double t = i * h;
    const double v = integrand(t);
    sum += v;
    if (t > t_peak && v < 1e-19 * sum) break;
  }
  // cosh(m t) = (e^{mt} + e^{-mt}) / 2
  return 0.5 * h * sum * std::exp(g_peak);
}

// e^{-x} I_m(x) = (1/pi) int_0^pi exp(x (cos t - 1)) cos(m t) dt, periodic
// trapezoid. Used only where I_m is not small relative to I_0.
double i_scaled_trapezoid(int m, double x) {
  const int n = m + 40 + static_cast<int>(std::ceil(std::sqrt(90.0 * x)));
  const double h = kPiD / n;
  double sum = 0.5 * (1.0 + std::exp(-2.0 * x) * ((m % 2 == 0) ? 1.0 : -1.0));
  for (int i = 1; i < n; ++i) {
    const double t = i * h;
    sum += std::exp(x * (std::cos(t) - 1.0)) * std::cos(m * t);
  }
  return sum / n;
}

// I_m(x) = sum_k (x/2)^(2k+m) / (k! (k+m)!), all terms positive.
double i_series_scaled(int m, double x) {
  const double half = 0.5 * x;
  // Start from log of the leading term to avoid overflow in (x/2)^m / m!.
  const double log_lead = m * std::log(half) - std::lgamma(m + 1.0) - x;
  const double q = half * half;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 10000; ++k) {
    term *= q / (static_cast<double>(k) * (k + m));
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return sum * std::exp(log_lead);
}

}  // namespace

double bessel_j(int m, double x) {
  check_order(m);
  check_oscillatory_argument(x, true);
  if (x == 0.0) return m == 0 ? 1.0 : 0.0;
  if (x <= kSeriesLimit) return j_series(m, x);
  if (x > kAsymptoticLimit && m <= x) {
    double j0, y0, j1, y1;
    hankel_jy(0, x, j0, y0);
    hankel_jy(1, x, j1, y1);
    return forward_recurrence(m, x, j0, j1);
  }
  return miller_sequence(m, x)[static_cast<std::size_t>(m)];
}

double bessel_y(int m, double x) {
  check_order(m);
  check_oscillatory_argument(x, false);
  double y0, y1;
  if (x <= kSeriesLimit) {
    series_y01(x, y0, y1);
  } else if (x <= kAsymptoticLimit) {
    neumann_y01(x, y0, y1);
  } else {
    double j;
    hankel_jy(0, x, j, y0);
    hankel_jy(1, x, j, y1);
  }
  return forward_recurrence(m, x, y0, y1);
}

double bessel_k_scaled(int m, double x) {
  check_order(m);
  check_modified_argument(x);
  return k_scaled_integral(m, x);
}

double bessel_i_scaled(int m, double x) {
  check_order(m);
  check_modified_argument(x);
  if (x <= std::max(50.0, 2.0 * m)) return i_series_scaled(m, x);
  return i_scaled_trapezoid(m, x);
}

double bessel_k(int m, double x) { return bessel_k_scaled(m, x) * std::exp(-x); }

double bessel_i(int m, double x) { return bessel_i_scaled(m, x) * std::exp(x); }

double bessel_j_prime(int m, double x) {
  check_order(m);
  if (x == 0.0) {
    check_oscillatory_argument(x, true);
    return m == 1 ? 0.5 : 0.0;
  }
  if (m == 0) return -bessel_j(1, x);
  return 0.5 * (bessel_j(m - 1, x) - bessel_j(m + 1, x));
}

double bessel_y_prime(int m, double x) {
  if (m == 0) return -bessel_y(1, x);
  return 0.5 * (bessel_y(m - 1, x) - bessel_y(m + 1, x));
}

double bessel_k_prime(int m, double x) {
  if (m == 0) return -bessel_k(1, x);
  return -0.5 * (bessel_k(m - 1, x) + bessel_k(m + 1, x));
}

double bessel_i_prime(int m, double x) {
  if (m == 0) return bessel_i(1, x);
  return 0.5 * (bessel_i(m - 1, x) + bessel_i(m + 1, x));
}

namespace {

// k-th zero of J_m without the public index limits. Zeros of J_m are at least
// ~pi apart, so a 0.5 scan step cannot step over a pair.
double nth_zero(int m, int k) {
  const double step = 0.5;
  double a = m > 0 ? static_cast<double>(m) : step;
  double fa = bessel_j(m, a);
  int found = 0;
  while (true) {
    const double b = a + step;
    const double fb = bessel_j(m, b);
    if ((fa < 0.0) != (fb < 0.0)) {
      if (++found == k) {
        auto f = [m](double t) { return bessel_j(m, t); };
        return find_root(f, RootBracket{a, b, fa, fb}, 1e-15);
      }
    }
    a = b;
    fa = fb;
  }
}

}  // namespace

double bessel_j_zero(int m, int k) {
  if (m < 0 || m > 20 || k < 1 || k > 50) {
    throw std::invalid_argument("bessel_j_zero supports 0 <= m <= 20 and 1 <= k <= 50");
  }
  return nth_zero(m, k);
}

int bessel_j_zero_count(int m, double x) {
  check_order(m);
  int count = 0;
  while (nth_zero(m, count + 1) < x) ++count;
  return count;
}

RootBracket make_bracket(const ScalarFunction& f, double lo, double hi) {
  if (!(lo < hi)) throw std::invalid_argument("bracket requires lo < hi");
  RootBracket b{lo, hi, f(lo), f(hi)};
  if (b.f_lo * b.f_hi > 0.0) throw BracketError("no sign change across bracket");
  return b;
}

double find_root(const ScalarFunction& f, const RootBracket& bracket, double tol) {
  if (!(bracket.lo < bracket.hi)) throw std::invalid_argument("bracket requires lo < hi");
  double a = bracket.lo;
  double b = bracket.hi;
  double fa = bracket.f_lo;
  double fb = bracket.f_hi;
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0)) throw BracketError("no sign change across bracket");

  constexpr double eps = std::numeric_limits<double>::epsilon();
  double c = b;
  double fc = fb;
  double d = b - a;
  double e = d;
  for (int iter = 0; iter < 1000; ++iter) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = b - a;
      e = d;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol1 = 2.0 * eps * std::abs(b) + 0.5 * tol;
    const double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || fb == 0.0) return b;
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      const double s = fb / fa;
      double p, q;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        const double qa = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
        q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      const double min1 = 3.0 * xm * q - std::abs(tol1 * q);
      const double min2 = std::abs(e * q);
      if (2.0 * p < std::min(min1, min2)) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > tol1 ? d : (xm > 0.0 ? tol1 : -tol1);
    fb = f(b);
  }
  throw AccuracyError("root finder did not converge");
}

}  // namespace chanres
