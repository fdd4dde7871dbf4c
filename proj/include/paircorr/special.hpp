#pragma once

// Closed-form antiderivatives, cosine/sine integrals, the smoothing-kernel
// transform and the Fejér kernel.

#include <paircorr/error.hpp>

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

namespace paircorr::special {

inline constexpr double euler_gamma = std::numbers::egamma;

/// sin(x)/x, continuous at 0.
inline double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0);
  }
  return std::sin(x) / x;
}

// ---------------------------------------------------------------------------
// Antiderivatives of e^{ax} sin bx, e^{ax} cos bx and their x-weighted forms.

enum class ExpTrigKind { exp_sin, exp_cos, x_exp_sin, x_exp_cos };

struct ExpTrigAntiderivative {
  double a;
  double b;
  ExpTrigKind kind;

  ExpTrigAntiderivative(double a_, double b_, ExpTrigKind k) : a(a_), b(b_), kind(k) {
    if (a == 0.0 && b == 0.0) throw DomainError("ExpTrigAntiderivative: a and b both zero");
  }

  /// Integrand e^{ax}·{sin,cos}(bx), optionally times x.
  double integrand(double x) const {
    const double e = std::exp(a * x);
    switch (kind) {
      case ExpTrigKind::exp_sin: return e * std::sin(b * x);
      case ExpTrigKind::exp_cos: return e * std::cos(b * x);
      case ExpTrigKind::x_exp_sin: return x * e * std::sin(b * x);
      case ExpTrigKind::x_exp_cos: return x * e * std::cos(b * x);
    }
    return 0.0;
  }
};

/// Value of the antiderivative (zero constant of integration) at x.
inline double exp_trig_antider(const ExpTrigAntiderivative& p, double x) {
  const double a = p.a, b = p.b;
  const double q = a * a + b * b;
  const double e = std::exp(a * x);
  const double s = std::sin(b * x), c = std::cos(b * x);
  switch (p.kind) {
    case ExpTrigKind::exp_sin: return (a * s - b * c) * e / q;
    case ExpTrigKind::exp_cos: return (a * c + b * s) * e / q;
    case ExpTrigKind::x_exp_sin: {
      const double u = a * x / q - (a * a - b * b) / (q * q);
      const double v = b * x / q - 2.0 * a * b / (q * q);
      return (u * s - v * c) * e;
    }
    case ExpTrigKind::x_exp_cos: {
      const double u = a * x / q - (a * a - b * b) / (q * q);
      const double v = b * x / q - 2.0 * a * b / (q * q);
      return (u * c + v * s) * e;
    }
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Cosine and sine integrals.

struct CiSi {
  double ci;
  double si;
};

/// ci(x) = C₀ + log x + ∫₀^x (cos t − 1)/t dt and Si(x) = ∫₀^x sin t/t dt,
/// x > 0. Power series up to x = 2, continued fraction for E₁(ix) beyond.
inline CiSi cosine_sine_integral(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("cosine_integral: x must be positive and finite");
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (x <= 2.0) {
    double ci_sum = 0.0, si_sum = x;
    double term = 1.0;  // x^k / k! with sign folded in below
    for (int k = 1; k < 100; ++k) {
      term *= x / k;
      double add;
      if (k % 2 == 0) {
        // cos part: (-1)^{k/2} x^k / (k · k!)
        add = ((k / 2) % 2 ? -term : term) / k;
        ci_sum += add;
      } else {
        if (k == 1) continue;
        add = (((k - 1) / 2) % 2 ? -term : term) / k;
        si_sum += add;
      }
      if (std::abs(add) < eps * (std::abs(ci_sum) + std::abs(si_sum) + 1e-300) && k > 4) break;
    }
    return {euler_gamma + std::log(x) + ci_sum, si_sum};
  }
  // Lentz evaluation of E₁(ix) e^{ix} as a continued fraction.
  using cd = std::complex<double>;
  constexpr double tiny = 1e-300;
  cd b(1.0, x);
  cd c(1.0 / tiny, 0.0);
  cd d = 1.0 / b;
  cd h = d;
  for (int i = 2; i < 1000; ++i) {
    const double a = -static_cast<double>((i - 1) * (i - 1));
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    const cd del = c * d;
    h *= del;
    if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < eps) break;
  }
  h *= cd(std::cos(x), -std::sin(x));
  return {-h.real(), std::numbers::pi / 2 + h.imag()};
}

inline double cosine_integral(double x) { return cosine_sine_integral(x).ci; }
inline double sine_integral(double x) { return cosine_sine_integral(x).si; }

/// ∫₁^∞ sin(a x)/x^{2n} dx in closed form via ci(a).
inline double sin_over_x_power_integral(double a, int n) {
  if (!(a > 0.0)) throw DomainError("sin_over_x_power_integral: a must be positive");
  if (n < 1) throw DomainError("sin_over_x_power_integral: n must be >= 1");
  const int m = 2 * n;
  double sum = 0.0;
  double fact = 1.0;  // (m - k - 1)!, built from k = m-1 downwards
  for (int k = m - 1; k >= 1; --k) {
    if (k < m - 1) fact *= static_cast<double>(m - k - 1);
    sum += fact / std::pow(a, m - k) * std::sin(a + (k - 1) * std::numbers::pi / 2);
  }
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;
  double lead = 1.0;
  for (int j = 1; j <= m - 1; ++j) lead *= a / j;
  return lead * (sum + sign * cosine_integral(a));
}

// ---------------------------------------------------------------------------
// Smooth-weight transform and Fejér kernel.

struct KernelParams {
  double U;      // log^M T
  double Delta;  // 1/(2^K U)
  int K;
  int M;

  /// Parameters for height T: U = log^M T, Δ = 1/(2^K U).
  static KernelParams for_height(double T, int K, int M) {
    if (!(T > 1.0)) throw DomainError("KernelParams: T must exceed 1");
    return from_u(std::pow(std::log(T), M), K, M);
  }

  static KernelParams from_u(double U, int K, int M) {
    if (!(U > 0.0)) throw DomainError("KernelParams: U must be positive");
    if (K < 0) throw DomainError("KernelParams: K must be non-negative");
    // 2^K is exact, so Δ·2^K·U == 1 up to the single rounding of the division.
    return {U, 1.0 / std::ldexp(U, K), K, M};
  }
};

/// Re Ψ̂_U(y) = sinc(2πy) · sinc(2πΔy)^{K+1}.
inline double re_psi_hat(double y, const KernelParams& kp) {
  const double w = 2.0 * std::numbers::pi * y;
  return sinc(w) * std::pow(sinc(kp.Delta * w), kp.K + 1);
}

/// (sin πu / πu)².
inline double fejer(double u) {
  const double s = sinc(std::numbers::pi * u);
  return s * s;
}

}  // namespace paircorr::special
