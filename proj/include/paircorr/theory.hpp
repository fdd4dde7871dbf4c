#pragma once

// Predictions of the four theorems and three conjectures, broken into named
// terms.

#include <paircorr/arithfn.hpp>
#include <paircorr/error.hpp>
#include <paircorr/quad.hpp>
#include <paircorr/special.hpp>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <json.hpp>

#include <array>
#include <cmath>
#include <complex>
#include <cstring>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

namespace paircorr::theory {

using cplx = std::complex<double>;
using arith::CorrectionState;

enum class TheoremId { T1, T2, T3, T4, C1, C2, C3 };

inline std::string to_string(TheoremId id) {
  static const char* names[] = {"T1", "T2", "T3", "T4", "C1", "C2", "C3"};
  return names[static_cast<int>(id)];
}

struct IntegralTerm {
  std::string name;
  double value;
  double error;  // quadrature estimate plus any certified truncation
};

struct TheoryBreakdown {
  TheoremId theorem_id = TheoremId::T1;
  std::vector<std::pair<std::string, double>> main_terms;
  std::vector<IntegralTerm> integral_terms;
  double error_envelope = 0.0;
  double total = 0.0;
  std::vector<std::string> warnings;

  double main(const std::string& name) const {
    for (const auto& [n, v] : main_terms)
      if (n == name) return v;
    throw DomainError("TheoryBreakdown: no main term '" + name + "'");
  }
  const IntegralTerm& integral(const std::string& name) const {
    for (const auto& t : integral_terms)
      if (t.name == name) return t;
    throw DomainError("TheoryBreakdown: no integral term '" + name + "'");
  }

  void finalize() {
    total = 0.0;
    for (const auto& [n, v] : main_terms) total += v;
    for (const auto& t : integral_terms) total += t.value;
  }

  nlohmann::json to_json() const {
    nlohmann::json mains = nlohmann::json::object(), ints = nlohmann::json::object();
    for (const auto& [n, v] : main_terms) mains[n] = v;
    for (const auto& t : integral_terms) ints[t.name] = {{"value", t.value}, {"error", t.error}};
    return {{"theorem", to_string(theorem_id)}, {"main_terms", mains},        {"integral_terms", ints},
            {"error_envelope", error_envelope}, {"total", total}, {"warnings", warnings}};
  }
};

// Exponent slack used in every O-term envelope, with surrogate constant 1.
inline constexpr double envelope_eps = 0.05;
// Smallest admissible M in the large-x envelopes.
inline constexpr int default_M = 3;

namespace detail {

inline constexpr double pi = std::numbers::pi;

struct Trig {
  double c, s;  // cos(h log x), sin(h log x)
  Trig(double h, double x) : c(std::cos(h * std::log(x))), s(std::sin(h * std::log(x))) {}
};

inline void check_args(double x, double T) {
  if (!(T > 1.0)) throw DomainError("theory: T must exceed 1");
  if (!(x >= 1.0)) throw DomainError("theory: x must be >= 1");
}

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace detail

/// (T/π)[2cos(h log x)/(4+h²)·log x − 4h sin(h log x)/(4+h²)²], shared by
/// the T2 and T3 predictions.
inline double main_bracket(double x, double T, double h) {
  const detail::Trig t(h, x);
  const double q = 4 + h * h;
  return T / detail::pi * (2 * t.c / q * std::log(x) - 4 * h * t.s / (q * q));
}

inline TheoryBreakdown thm1_prediction(double x, double T, double h) {
  detail::check_args(x, T);
  const detail::Trig t(h, x);
  const double q = 4 + h * h, L = std::log(x), lt = std::log(T / (2 * detail::pi));
  TheoryBreakdown b;
  b.theorem_id = TheoremId::T1;
  b.main_terms = {{"log_x_bracket", T / (2 * detail::pi) * (4 * t.c / q * L - 8 * h * t.s / (q * q))},
                  {"inverse_x_squared", T / (2 * detail::pi * x * x) * (lt * lt - 2 * lt)}};
  const double ht = std::abs(h) + 1;
  b.error_envelope = x * L + ht * T / std::pow(x, 0.5 - envelope_eps);
  if (x > T / std::log(T)) b.warnings.push_back("x = " + detail::fmt(x) + " exceeds T/log T");
  b.finalize();
  return b;
}

inline TheoryBreakdown thm3_prediction(double x, double T, double h) {
  detail::check_args(x, T);
  TheoryBreakdown b;
  b.theorem_id = TheoremId::T3;
  b.main_terms = {{"main_bracket", main_bracket(x, T, h)}};
  const double ht = std::abs(h) + 1;
  b.error_envelope = ht * x + ht * T / std::log(T);
  if (x < T / std::pow(std::log(T), default_M) || x > T)
    b.warnings.push_back("x = " + detail::fmt(x) + " outside [T/log^M T, T]");
  b.finalize();
  return b;
}

inline TheoryBreakdown thm4_prediction(double x, double T, double h) {
  detail::check_args(x, T);
  const detail::Trig t(h, x);
  TheoryBreakdown b;
  b.theorem_id = TheoremId::T4;
  b.main_terms = {{"main_term", T / (2 * detail::pi) * std::log(T / (2 * detail::pi * std::numbers::e)) * 4 * t.c /
                                    (4 + h * h)}};
  const double ht = std::abs(h) + 1;
  b.error_envelope = ht * T * std::pow(T / x, 0.5 - envelope_eps) + ht * T / std::log(T);
  if (x < T || x > T * T) b.warnings.push_back("x = " + detail::fmt(x) + " outside [T, T^2]");
  b.finalize();
  return b;
}

// ---------------------------------------------------------------------------
// G₁ and G₂ through cumulative moments of f.
//
// With φ = h log(ux/y) = h log u + h log(x/y),
//   G₁(y) = y⁻³ Re[(2−h²+3ih) (x/y)^{ih} P(y)],  P(y) = ∫₀^y f(u)u^{ih} du,
//   G₂(y) = y   Re[(6−h²−5ih) (x/y)^{ih} Q(y)],  Q(y) = ∫_y^∞ f(u)u^{ih−4} du.
// f is analytic between consecutive integers, so P and Q are accumulated at
// the integers with a ten-point Gauss rule per unit interval, and inside an
// interval both integrands are replaced by a Chebyshev interpolant whose
// antiderivative is exact.

/// Antiderivatives of f(u)u^{ih} and f(u)u^{ih−4} from n to n + t, t ∈ [0, 1].
class UnitExpansion {
 public:
  static constexpr int N = 20;

  arith::i64 n = 0;
  std::array<cplx, N + 1> p{}, q{};  // Chebyshev coefficients in s = 2t − 1

  cplx P(double t) const { return clenshaw(p, 2 * t - 1); }
  cplx Q(double t) const { return clenshaw(q, 2 * t - 1); }

  static const std::array<double, N>& nodes() {
    static const auto xs = [] {
      std::array<double, N> a{};
      for (int j = 0; j < N; ++j) a[j] = std::cos(std::numbers::pi * (j + 0.5) / N);
      return a;
    }();
    return xs;
  }

  // Coefficients of the antiderivative (vanishing at s = −1) of the
  // interpolant through samples g at `nodes()`, for du = ds/2.
  static std::array<cplx, N + 1> antiderivative(const std::array<cplx, N>& g) {
    static const auto cosines = [] {
      std::array<std::array<double, N>, N> c{};
      for (int k = 0; k < N; ++k)
        for (int j = 0; j < N; ++j) c[k][j] = std::cos(std::numbers::pi * k * (j + 0.5) / N);
      return c;
    }();
    std::array<cplx, N + 2> c{};
    for (int k = 0; k < N; ++k) {
      cplx s{};
      for (int j = 0; j < N; ++j) s += g[j] * cosines[k][j];
      c[k] = s * (2.0 / N);
    }
    c[0] *= 0.5;
    std::array<cplx, N + 1> C{};
    // ∫T₀ = T₁, ∫T₁ = T₂/4 (+const), ∫T_k = T_{k+1}/(2(k+1)) − T_{k−1}/(2(k−1)).
    for (int k = 1; k <= N; ++k) {
      const cplx prev = (k == 1) ? 2.0 * c[0] : c[k - 1];
      C[k] = 0.25 * (prev - c[k + 1]) / static_cast<double>(k);
    }
    cplx at_minus1{};
    for (int k = 1; k <= N; ++k) at_minus1 += (k % 2 ? -1.0 : 1.0) * C[k];
    C[0] = -at_minus1;
    return C;
  }

 private:
  static cplx clenshaw(const std::array<cplx, N + 1>& c, double s) {
    cplx b1{}, b2{};
    for (int k = N; k >= 1; --k) {
      const cplx b0 = c[k] + 2 * s * b1 - b2;
      b2 = b1;
      b1 = b0;
    }
    return c[0] + s * b1 - b2;
  }
};

class FMoments {
 public:
  FMoments(std::shared_ptr<const CorrectionState> corr, double h) : corr_(std::move(corr)), h_(h) {
    n_max_ = static_cast<arith::i64>(corr_->y_max()) - 1;
    P_.assign(static_cast<std::size_t>(n_max_ + 1), cplx{});
    Q_.assign(static_cast<std::size_t>(n_max_ + 1), cplx{});
    std::vector<cplx> q_piece(static_cast<std::size_t>(n_max_ + 1));
    P_[1] = p_unit(1.0);
    using G = boost::math::quadrature::gauss<double, 10>;
    const auto& gx = G::abscissa();
    const auto& gw = G::weights();
    for (arith::i64 n = 1; n < n_max_; ++n) {
      cplx sp{}, sq{};
      for (std::size_t i = 0; i < gx.size(); ++i)
        for (double sign : {-1.0, 1.0}) {
          if (gx[i] == 0.0 && sign > 0) continue;
          const double u = static_cast<double>(n) + 0.5 + sign * 0.5 * gx[i];
          const double u2 = u * u;
          const cplx v = gw[i] * corr_->f(u) * std::polar(1.0, h_ * std::log(u));
          sp += v;
          sq += v / (u2 * u2);
        }
      P_[n + 1] = P_[n] + 0.5 * sp;
      q_piece[n] = 0.5 * sq;
    }
    for (arith::i64 n = n_max_; n > 1; --n) Q_[n - 1] = Q_[n] + q_piece[n - 1];
    // Envelope |f(u)| ≤ C u^{0.6}, sampled at integers and inside [0, 1].
    double c = 0.0;
    for (int i = 1; i <= 64; ++i) {
      const double u = i / 64.0;
      c = std::max(c, std::abs(corr_->f(u)) / std::pow(u, 0.6));
    }
    for (arith::i64 n = 1; n <= n_max_; ++n) c = std::max(c, std::abs(corr_->f_at(n)) / std::pow(double(n), 0.6));
    f_env_ = 1.1 * c;  // slack for the variation between grid points
  }

  double h() const { return h_; }
  double y_limit() const { return static_cast<double>(n_max_); }
  double f_envelope() const { return f_env_; }
  const CorrectionState& corrections() const { return *corr_; }

  UnitExpansion unit(arith::i64 n) const {
    if (n < 1 || n >= n_max_) throw DomainError("FMoments: unit interval outside the table");
    std::array<cplx, UnitExpansion::N> gp, gq;
    const auto& xs = UnitExpansion::nodes();
    for (int j = 0; j < UnitExpansion::N; ++j) {
      const double u = static_cast<double>(n) + 0.5 * (1 + xs[j]);
      const double u2 = u * u;
      gp[j] = corr_->f(u) * std::polar(1.0, h_ * std::log(u));
      gq[j] = gp[j] / (u2 * u2);
    }
    UnitExpansion e;
    e.n = n;
    e.p = UnitExpansion::antiderivative(gp);
    e.q = UnitExpansion::antiderivative(gq);
    return e;
  }

  cplx P(double y) const {
    check(y, 0.0);
    if (y <= 1.0) return p_unit(y);
    const auto n = static_cast<arith::i64>(std::floor(y));
    return P(unit(n), y);
  }

  /// Q(y) without the part beyond the table, which `q_tail_bound` covers.
  cplx Q(double y) const {
    check(y, 1.0);
    const auto n = std::min(static_cast<arith::i64>(std::floor(y)), n_max_ - 1);
    return Q(unit(n), y);
  }

  // Evaluation through a prebuilt expansion of the unit interval holding y.
  cplx P(const UnitExpansion& e, double y) const { return P_[e.n] + e.P(y - static_cast<double>(e.n)); }
  cplx Q(const UnitExpansion& e, double y) const { return Q_[e.n] - e.Q(y - static_cast<double>(e.n)); }

  double q_tail_bound() const { return f_env_ * std::pow(y_limit(), -2.4) / 2.4; }

  double g1(double y, double x) const { return g1_from(P(y), y, x); }
  double g2(double y, double x) const { return g2_from(Q(y), y, x); }
  double g1_from(cplx p, double y, double x) const {
    const cplx rot = std::polar(1.0, h_ * std::log(x / y));
    return (cplx(2 - h_ * h_, 3 * h_) * rot * p).real() / (y * y * y);
  }
  double g2_from(cplx q, double y, double x) const {
    const cplx rot = std::polar(1.0, h_ * std::log(x / y));
    return y * (cplx(6 - h_ * h_, -5 * h_) * rot * q).real();
  }
  double g2_tail_bound(double y) const { return y * (std::abs(6 - h_ * h_) + 5 * std::abs(h_)) * q_tail_bound(); }

 private:
  void check(double y, double lo) const {
    if (!(y >= lo)) throw DomainError("FMoments: y below " + detail::fmt(lo));
    if (y > y_limit()) throw DomainError("FMoments: y beyond the singular-series table");
  }

  // ∫₀^y f(u)u^{ih} du for y ≤ 1, where f(u) = ½u log u − (½+B/2)u − ½u².
  cplx p_unit(double y) const {
    if (y == 0.0) return {};
    const cplx s1(2.0, h_), s2(3.0, h_);
    const double ly = std::log(y);
    const cplx y1 = std::exp(s1 * ly), y2 = std::exp(s2 * ly);
    const double c1 = 0.5 + CorrectionState::B / 2;
    return 0.5 * y1 * (ly / s1 - 1.0 / (s1 * s1)) - c1 * y1 / s1 - 0.5 * y2 / s2;
  }

  std::shared_ptr<const CorrectionState> corr_;
  double h_;
  arith::i64 n_max_;
  std::vector<cplx> P_, Q_;
  double f_env_ = 0.0;
};

/// Moments for shift h over the default corrections, cached per h.
inline std::shared_ptr<const FMoments> moments_for(double h) {
  static std::mutex mu;
  static std::map<std::uint64_t, std::shared_ptr<const FMoments>> cache;
  std::uint64_t key;
  std::memcpy(&key, &h, sizeof key);
  std::lock_guard lock(mu);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  if (cache.size() >= 16) cache.clear();
  auto m = std::make_shared<const FMoments>(arith::default_corrections(), h);
  cache.emplace(key, m);
  return m;
}

inline double g1(double y, double h, double x) {
  if (!(y >= 1.0)) throw DomainError("g1: y must be >= 1");
  return moments_for(h)->g1(y, x);
}

inline double g2(double y, double h, double x) {
  if (!(y >= 1.0)) throw DomainError("g2: y must be >= 1");
  return moments_for(h)->g2(y, x);
}

/// ∫₀¹ f(u)[cos(h log ux) − h sin(h log ux)] du in closed form.
inline double f_unit_moment(double h, double x) {
  const detail::Trig t(h, x);
  const double h2 = h * h, q = 4 + h2, B = CorrectionState::B;
  return -0.5 * ((4 + 3 * h2) / (q * q) * t.c + h2 * h / (q * q) * t.s) -
         (0.5 + B / 2) * ((2 + h2) / q * t.c - h / q * t.s) - 0.5 * ((3 + h2) / (9 + h2) * t.c - 2 * h / (9 + h2) * t.s);
}

// ---------------------------------------------------------------------------
// Full-range prediction with explicit integral terms.

struct Thm2Options {
  arith::i64 k_cap = 100000;
  double y_cap = 0.0;  // 0 selects 10³·x/T clamped to [10³, 10⁶]
};

inline double default_y_cap(double x, double T) { return std::clamp(1e3 * x / T, 1e3, 1e6); }

inline TheoryBreakdown thm2_prediction(double x, double T, double h, Thm2Options opt = {}) {
  detail::check_args(x, T);
  using detail::pi;
  const auto mom = moments_for(h);
  const auto& corr = mom->corrections();
  const detail::Trig t(h, x);
  const double q = 4 + h * h, a = T / x, ht = std::abs(h) + 1;
  double y_cap = opt.y_cap > 0 ? opt.y_cap : default_y_cap(x, T);
  if (y_cap > mom->y_limit()) throw DomainError("thm2: y_cap beyond the singular-series table");
  if (opt.k_cap < 2 || opt.k_cap > corr.table().k_max()) throw DomainError("thm2: k_cap outside table");
  if (!(y_cap > 1.0)) throw DomainError("thm2: y_cap must exceed 1");

  TheoryBreakdown b;
  b.theorem_id = TheoremId::T2;
  if (x < T / std::pow(std::log(T), default_M)) b.warnings.push_back("x = " + detail::fmt(x) + " below T/log^M T");

  // 1. Main bracket.
  b.main_terms.emplace_back("main_bracket", main_bracket(x, T, h));

  // 2. The sinc-weighted y-integral. Its 1/y part has a closed form,
  //    ∫₁^∞ sinc(ay)/y dy = (1/a)∫₁^∞ sin(ay)/y² dy.
  b.main_terms.emplace_back("inverse_y_sinc",
                            T / pi * (-2 * t.c / q) * special::sin_over_x_power_integral(a, 1) / a);
  {
    UnitExpansion ex;
    auto g = [&](double y) {
      return (-4 * corr.f(y) * t.c / (y * y) + mom->g1_from(mom->P(ex, y), y, x) + mom->g2_from(mom->Q(ex, y), y, x)) *
             special::sinc(a * y);
    };
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    double sum = 0.0, err = 0.0;
    for (double lo = 1.0; lo < y_cap;) {
      const double hi = std::min(std::floor(lo) + 1.0, y_cap);
      ex = mom->unit(static_cast<arith::i64>(std::floor(lo)));
      const int panels = std::max(1, static_cast<int>(std::ceil(a * (hi - lo) / 2.0)));
      for (int p = 0; p < panels; ++p) {
        const double u0 = lo + (hi - lo) * p / panels, u1 = lo + (hi - lo) * (p + 1) / panels;
        double e = 0.0;
        sum += GK::integrate(g, u0, u1, 0, 0.0, &e);
        err += e * 0.5 * (u1 - u0);  // Boost reports the error on [−1, 1]
      }
      lo = hi;
    }
    // Beyond y_cap: |f| ≤ C u^{0.6} gives |bracket| ≤ C'·y^{−1.4}, and
    // |sinc(ay)| ≤ min(1, 1/(ay)).
    const double C = mom->f_envelope();
    const double c_br = C * (4 * std::abs(t.c) + (std::abs(2 - h * h) + 3 * std::abs(h)) / 1.6 +
                             (std::abs(6 - h * h) + 5 * std::abs(h)) / 2.4);
    const double tail = c_br * std::min(std::pow(y_cap, -0.4) / 0.4, std::pow(y_cap, -1.4) / (1.4 * a));
    // G₂'s own truncation at the table end, integrated over [1, y_cap] against |sinc| ≤ 1.
    const double g2_trunc = mom->g2_tail_bound(1.0) * 0.5 * (y_cap * y_cap - 1);
    b.integral_terms.push_back({"f_and_G_sinc", T / pi * sum, T / pi * (err + tail + g2_trunc)});
  }

  // 3, 4. The two Si brackets.
  const double si = special::sine_integral(a);
  b.main_terms.emplace_back("si_bracket_9", -x / pi * si * (3 * t.c / (9 + h * h) + h * t.s / (9 + h * h)));
  b.main_terms.emplace_back("si_bracket_1", -x / pi * si * (t.c / (1 + h * h) - h * t.s / (1 + h * h)));

  // 5. Σ 𝔖(k)/k² ∫₀¹ y cos(h log(kx/y)) sinc(Ty/x) dy = Re[J · x^{ih} Σ 𝔖(k)k^{ih−2}],
  //    J = ∫₀¹ y^{1−ih} sinc(ay) dy, taken with y = e^{−v}.
  {
    quad::Options qo;
    qo.abs_tol = 1e-13;
    auto tail = [](double V) { return std::exp(-2 * V) / 2; };
    auto jr = quad::integrate_to_infinity(
        [&](double v) { return std::exp(-2 * v) * std::cos(h * v) * special::sinc(a * std::exp(-v)); }, 0.0, tail, qo);
    auto ji = quad::integrate_to_infinity(
        [&](double v) { return std::exp(-2 * v) * std::sin(h * v) * special::sinc(a * std::exp(-v)); }, 0.0, tail, qo);
    const cplx J(jr.value, ji.value);
    long double sr = 0.0L, si2 = 0.0L;
    const auto& tab = corr.table();
    for (arith::i64 k = 2; k <= opt.k_cap; k += 2) {
      const double lk = std::log(static_cast<double>(k));
      const double w = tab.value(k) / (static_cast<double>(k) * static_cast<double>(k));
      sr += w * std::cos(h * lk);
      si2 += w * std::sin(h * lk);
    }
    const cplx S(static_cast<double>(sr), static_cast<double>(si2));
    const double val = T / pi * (J * std::polar(1.0, h * std::log(x)) * S).real();
    const double trunc = tab.max_value() / static_cast<double>(opt.k_cap) * std::abs(J);
    const double qerr = (jr.error + ji.error) * std::abs(S);
    b.integral_terms.push_back({"singular_series_sum", val, T / pi * (trunc + qerr)});
  }

  const double e = envelope_eps;
  b.error_envelope = ht * std::pow(x, 1 + 6 * e) / T + ht * std::pow(x, 0.5 + 7 * e) +
                     ht * x * x / std::pow(T, 2 - 2 * e) + ht * T / std::pow(std::log(T), default_M - 2);
  b.finalize();
  double trunc = 0.0;
  for (const auto& it : b.integral_terms) trunc += it.error;
  if (trunc > 0.01 * std::abs(b.total))
    throw NumericalError("thm2: truncation bound " + detail::fmt(trunc) + " exceeds 1% of the total " +
                         detail::fmt(b.total) + "; raise k_cap or y_cap");
  return b;
}

// ---------------------------------------------------------------------------
// Conjectured form factor and spacing densities.

/// Form factor with the o(1) terms set to zero.
inline double conj1_form_factor(double alpha, double T, double h) {
  if (!(T > 1.0)) throw DomainError("conj1: T must exceed 1");
  const double a = std::abs(alpha), lT = std::log(T);
  const double osc = 4 * std::cos(h * lT * a) / (4 + h * h);
  return a <= 1.0 ? std::exp(-2 * a * lT) * lT + a * osc : osc;
}

/// ∫ F_h(α) r̂(α) dα under the conjectured form factor for an even kernel r with transform
/// r̂. The part 4cos(hα log T)/(4+h²) holds for every α beyond the unit
/// interval and integrates against r̂ to (4/(4+h²))·r(h log T/2π), which
/// leaves a compact integral over [−1, 1].
inline quad::Result conj1_convolved(const std::function<double(double)>& r, const std::function<double(double)>& r_hat,
                                    double T, double h) {
  if (!(T > 1.0)) throw DomainError("conj1: T must exceed 1");
  const double lT = std::log(T), w = 4 / (4 + h * h);
  quad::Options o;
  o.abs_tol = 1e-11;
  o.max_subdivisions = 20000;
  auto g = [&](double a) { return (conj1_form_factor(a, T, h) - w * std::cos(h * lT * a)) * r_hat(a); };
  // T^{−2α} is sharply peaked at 0; breakpoints let the panels resolve it.
  std::vector<double> bp{0.25 / lT, 1.0 / lT, 4.0 / lT};
  auto inner = quad::integrate(g, 0.0, 1.0, o, bp);
  return {w * r(h * lT / (2 * detail::pi)) + 2 * inner.value, 2 * inner.error, inner.evaluations};
}

/// ∫ 1 − 4/(4+h²)(sin πu/πu)² du over [c − α, c + α], c = h log T/2π.
inline double conj2_density(double alpha, double T, double h) {
  if (!(alpha > 0.0)) throw DomainError("conj2: alpha must be positive");
  if (!(T > 1.0)) throw DomainError("conj2: T must exceed 1");
  const double c = h * std::log(T) / (2 * detail::pi), w = 4 / (4 + h * h);
  quad::Options o;
  o.abs_tol = 1e-11;
  std::vector<double> bp;
  for (double k = std::ceil(c - alpha); k < c + alpha; k += 1.0) bp.push_back(k);
  return quad::integrate([&](double u) { return 1 - w * special::fejer(u); }, c - alpha, c + alpha, o, bp).value;
}

/// ∫_α^β 1 − (sin πu/πu)²/(1+(πu/log T)²) du. `warning` receives a note when β > log T/2.
inline double conj3_density(double alpha, double beta, double T, std::string* warning = nullptr) {
  if (!(alpha > 0.0) || !(beta > alpha)) throw DomainError("conj3: need 0 < alpha < beta");
  if (!(T > 1.0)) throw DomainError("conj3: T must exceed 1");
  const double lT = std::log(T);
  if (beta > lT) throw DomainError("conj3: beta must not exceed log T");
  if (beta > lT / 2 && warning) *warning = "beta = " + detail::fmt(beta) + " beyond log T/2";
  quad::Options o;
  o.abs_tol = 1e-11;
  std::vector<double> bp;
  for (double k = std::ceil(alpha); k < beta; k += 1.0) bp.push_back(k);
  auto g = [&](double u) {
    const double r = detail::pi * u / lT;
    return 1 - special::fejer(u) / (1 + r * r);
  };
  return quad::integrate(g, alpha, beta, o, bp).value;
}

}  // namespace paircorr::theory
