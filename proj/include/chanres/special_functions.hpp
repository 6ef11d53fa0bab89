#pragma once

// Integer-order cylindrical Bessel functions of real argument and a
// bracketing scalar root finder.
//
// Accuracy contract: J_m and Y_m to 1e-10 relative to max(|value|, envelope)
// on [0, 1e4], where the envelope sqrt(2/(pi x)) is the oscillation amplitude
// for x > m (relative error is meaningless at a zero). I_m and K_m to 1e-10
// relative on (0, 700].

#include <functional>

namespace chanres {

inline constexpr double kMaxBesselArgument = 1.0e4;

double bessel_j(int m, double x);
double bessel_y(int m, double x);
double bessel_i(int m, double x);
double bessel_k(int m, double x);

/// exp(-x) I_m(x) and exp(x) K_m(x); these stay finite where the unscaled
/// functions overflow or underflow.
double bessel_i_scaled(int m, double x);
double bessel_k_scaled(int m, double x);

// Derivatives with respect to the argument.
double bessel_j_prime(int m, double x);
double bessel_y_prime(int m, double x);
double bessel_i_prime(int m, double x);
double bessel_k_prime(int m, double x);

/// k-th positive zero of J_m, for 0 <= m <= 20 and 1 <= k <= 50.
double bessel_j_zero(int m, int k);

/// Number of zeros of J_m in the open interval (0, x). Unrestricted in m.
int bessel_j_zero_count(int m, double x);

struct RootBracket {
  double lo = 0.0;
  double hi = 0.0;
  double f_lo = 0.0;
  double f_hi = 0.0;
};

using ScalarFunction = std::function<double(double)>;

/// Evaluates f at both ends; throws BracketError when there is no sign change.
RootBracket make_bracket(const ScalarFunction& f, double lo, double hi);

/// Brent's method with bisection fallback. Returns x with f(x) == 0 or a
/// final bracket no wider than max(tol, 4 eps |x|). Deterministic.
double find_root(const ScalarFunction& f, const RootBracket& bracket, double tol);

}  // namespace chanres
