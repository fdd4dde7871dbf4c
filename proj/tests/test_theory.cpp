#include <paircorr/quad.hpp>
#include <paircorr/theory.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace paircorr;
using namespace paircorr::theory;

namespace {

constexpr double pi = std::numbers::pi;
const double T0 = 74920.827498994171;

auto corr() { return arith::default_corrections(); }

// G₁ by direct quadrature of its defining integral, panels at the integers.
double g1_direct(double y, double h, double x) {
  std::vector<double> bp;
  for (double k = 1; k < y; ++k) bp.push_back(k);
  quad::Options o;
  o.abs_tol = 1e-12;
  o.max_subdivisions = 100000;
  auto r = quad::integrate(
      [&](double u) {
        if (u == 0.0) return 0.0;
        const double p = h * std::log(u * x / y);
        return corr()->f(u) * ((2 - h * h) * std::cos(p) - 3 * h * std::sin(p));
      },
      0.0, y, o, bp);
  return r.value / (y * y * y);
}

// G₂ the same way, cut where the u^{0.6} envelope bounds the rest below 1e-12.
double g2_direct(double y, double h, double x) {
  const double top = std::min(corr()->y_max() - 1, 4e4);
  std::vector<double> bp;
  for (double k = std::ceil(y); k < std::min(top, y + 200); ++k) bp.push_back(k);
  for (double k = y + 200; k < top; k *= 1.5) bp.push_back(k);
  quad::Options o;
  o.abs_tol = 1e-13;
  o.max_subdivisions = 200000;
  auto r = quad::integrate(
      [&](double u) {
        const double p = h * std::log(u * x / y);
        const double u2 = u * u;
        return corr()->f(u) / (u2 * u2) * ((6 - h * h) * std::cos(p) + 5 * h * std::sin(p));
      },
      y, top, o, bp);
  return y * r.value;
}

}  // namespace

TEST(SmallXPrediction, ShiftZeroReduction) {
  const double T = 1e4, x = 20.0, lt = std::log(T / (2 * pi));
  auto b = thm1_prediction(x, T, 0.0);
  EXPECT_NEAR(b.total, T / (2 * pi) * std::log(x) + T / (2 * pi * x * x) * (lt * lt - 2 * lt), 1e-9);
  EXPECT_NEAR(thm1_prediction(1.0, T, 0.0).total, T / (2 * pi) * (lt * lt - 2 * lt), 1e-9);
  EXPECT_TRUE(b.warnings.empty());
}

TEST(SmallXPrediction, FullTurnCosine) {
  // x = e^{2π/h}, h = 2: cos(2π) = 1, sin(2π) = 0.
  const double T = 1e6, x = std::exp(pi);
  auto b = thm1_prediction(x, T, 2.0);
  EXPECT_NEAR(b.main("log_x_bracket"), T / (2 * pi) * (pi / 2), 1e-8);
}

TEST(SmallXPrediction, WarnsOutOfRange) { EXPECT_FALSE(thm1_prediction(5000.0, 1e4, 0.0).warnings.empty()); }

TEST(MidXPrediction, Values) {
  const double T = 1e5, x = 3e4;
  EXPECT_NEAR(thm3_prediction(x, T, 0.0).total, T / pi * std::log(x) / 2, 1e-9);
  // h = 2, x = T: the T1 bracket 4cos/(4+h²)·log x − 8h sin/(4+h²)², halved, times T/π.
  const double h = 2.0, L = std::log(T);
  const double ref = T / (2 * pi) * (4 * std::cos(h * L) / 8 * L - 16 * std::sin(h * L) / 64);
  EXPECT_NEAR(thm3_prediction(T, T, h).total, ref, 1e-12 * std::abs(ref));
}

TEST(LargeXPrediction, Values) {
  const double T = T0;
  EXPECT_NEAR(thm4_prediction(T, T, 0.0).total, T / (2 * pi) * std::log(T / (2 * pi * std::numbers::e)), 1e-9);
  // cos(h log x) = 0.
  const double x = 1e6, h = pi / 2 / std::log(x);
  EXPECT_NEAR(thm4_prediction(x, T, h).total, 0.0, 1e-9);
  const double x2 = std::pow(T, 1.5);
  const double ref = T / (2 * pi) * std::log(T / (2 * pi * std::numbers::e)) * 4 * std::cos(std::log(x2)) / 5;
  EXPECT_NEAR(thm4_prediction(x2, T, 1.0).total, ref, 1e-12 * std::abs(ref));
  EXPECT_FALSE(thm4_prediction(T / 2, T, 0.0).warnings.empty());
}

TEST(Predictions, EvenInShift) {
  const double T = T0;
  for (double h : {0.5, 1.0, 3.0, 10.0}) {
    for (double x : {30.0, 5000.0}) EXPECT_EQ(thm1_prediction(x, T, h).total, thm1_prediction(x, T, -h).total);
    EXPECT_EQ(thm3_prediction(T / 3, T, h).total, thm3_prediction(T / 3, T, -h).total);
    EXPECT_EQ(thm4_prediction(T * 7, T, h).total, thm4_prediction(T * 7, T, -h).total);
  }
  for (double h : {0.5, 3.0}) {
    const double a = thm2_prediction(T, T, h).total, b = thm2_prediction(T, T, -h).total;
    EXPECT_NEAR(a, b, 1e-12 * std::abs(a)) << h;
  }
}

TEST(Breakdown, TotalIsSumOfTermsAndJson) {
  auto b = thm2_prediction(T0, T0, 1.0);
  double s = 0.0;
  for (const auto& [n, v] : b.main_terms) s += v;
  for (const auto& t : b.integral_terms) s += t.value;
  EXPECT_NEAR(b.total, s, 1e-12 * std::abs(s));
  auto j = b.to_json();
  EXPECT_EQ(j["theorem"], "T2");
  EXPECT_EQ(j["main_terms"].size(), 4u);
  EXPECT_EQ(j["integral_terms"].size(), 2u);
  EXPECT_TRUE(j["integral_terms"]["singular_series_sum"].contains("error"));
}

// ---------------------------------------------------------------------------

TEST(GTerms, AgreeWithDirectQuadrature) {
  for (double h : {0.0, 1.0, 5.0})
    for (double y : {1.0, 2.5, 10.0, 50.0}) {
      EXPECT_NEAR(g1(y, h, 10.0), g1_direct(y, h, 10.0), 1e-8) << h << " " << y;
      EXPECT_NEAR(g2(y, h, 10.0), g2_direct(y, h, 10.0), 1e-8) << h << " " << y;
    }
}

TEST(GTerms, FirstDecays) {
  double prev = INFINITY;
  for (double y : {10.0, 100.0, 1000.0}) {
    const double v = std::abs(g1(y, 0.0, 10.0));
    EXPECT_LT(v, prev) << y;
    prev = v;
  }
  EXPECT_THROW(g1(0.5, 0.0, 10.0), DomainError);
}

TEST(GTerms, UnitMomentClosedForm) {
  for (double h : {0.0, 1.0, 5.0})
    for (double x : {2.0, 10.0}) {
      quad::Options o;
      o.abs_tol = 1e-13;
      auto r = quad::integrate(
          [&](double u) {
            if (u == 0.0) return 0.0;
            const double p = h * std::log(u * x);
            return corr()->f(u) * (std::cos(p) - h * std::sin(p));
          },
          0.0, 1.0, o);
      EXPECT_NEAR(f_unit_moment(h, x), r.value, 1e-10) << h << " " << x;
    }
}

// ---------------------------------------------------------------------------

TEST(FullRangePrediction, ShiftZeroSpecialization) {
  const double T = T0, x = 2 * T, a = T / x;
  auto b = thm2_prediction(x, T, 0.0);
  EXPECT_NEAR(b.main("main_bracket"), T / pi * std::log(x) / 2, 1e-9);
  const double si = special::sine_integral(a);
  EXPECT_NEAR(b.main("si_bracket_9"), -x / pi * si / 3, 1e-9);
  EXPECT_NEAR(b.main("si_bracket_1"), -x / pi * si, 1e-9);
  EXPECT_NEAR(b.main("inverse_y_sinc"), -T / pi / 2 * (std::sin(a) / a - special::cosine_integral(a)), 1e-8);
}

TEST(FullRangePrediction, FirstTermAtXEqualsT) {
  EXPECT_NEAR(thm2_prediction(T0, T0, 0.0).main("main_bracket"), T0 / pi * std::log(T0) / 2, 1e-9);
  EXPECT_EQ(thm2_prediction(T0 / 2, T0, 1.0).main("main_bracket"), thm3_prediction(T0 / 2, T0, 1.0).total);
}

TEST(FullRangePrediction, ConsistentWithThm4AtXEqualsT) {
  const auto t2 = thm2_prediction(T0, T0, 0.0);
  const auto t4 = thm4_prediction(T0, T0, 0.0);
  EXPECT_LE(std::abs(t2.total - t4.total), 0.02 * std::abs(t4.total) + t4.error_envelope);
}

TEST(FullRangePrediction, ApproachesThm4FarAboveT) {
  // The sinc factors tend to 1 as T/x → 0 and the series terms cancel.
  for (double h : {0.0, 1.0}) {
    const double x = std::pow(T0, 1.5);
    const double t2 = thm2_prediction(x, T0, h).total, t4 = thm4_prediction(x, T0, h).total;
    EXPECT_NEAR(t2, t4, 0.01 * std::abs(t4)) << h;
  }
}

TEST(FullRangePrediction, SeriesTermMatchesDirectSum) {
  // Σ_k 𝔖(k)/k² ∫₀¹ y cos(h log(kx/y)) sinc(Ty/x) dy with the integral done per k.
  const double T = T0, x = 3 * T, h = 1.0, a = T / x;
  quad::Options o;
  o.abs_tol = 1e-12;
  double direct = 0.0;
  for (arith::i64 k = 2; k <= 400; k += 2) {
    auto r = quad::integrate(
        [&](double y) {
          if (y == 0.0) return 0.0;
          return y * std::cos(h * std::log(k * x / y)) * special::sinc(a * y);
        },
        0.0, 1.0, o);
    direct += corr()->table().value(k) / (double(k) * k) * r.value;
  }
  Thm2Options opt;
  opt.k_cap = 400;
  EXPECT_NEAR(thm2_prediction(x, T, h, opt).integral("singular_series_sum").value, T / pi * direct, 1e-7 * T);
}

TEST(FullRangePrediction, TruncationGuard) {
  Thm2Options opt;
  opt.k_cap = 2;
  EXPECT_THROW(thm2_prediction(T0, T0, 0.0, opt), NumericalError);
}

// ---------------------------------------------------------------------------

TEST(FormFactorModel, Branches) {
  const double T = 1e4;
  EXPECT_DOUBLE_EQ(conj1_form_factor(0.0, T, 0.0), std::log(T));
  EXPECT_DOUBLE_EQ(conj1_form_factor(2.0, T, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(conj1_form_factor(-0.3, T, 1.0), conj1_form_factor(0.3, T, 1.0));
  const double left = conj1_form_factor(1.0, T, 0.7), right = conj1_form_factor(std::nextafter(1.0, 2.0), T, 0.7);
  EXPECT_NEAR(left - right, std::log(T) / (T * T), 1e-12);
}

TEST(FormFactorModel, FejerConvolution) {
  // ∫ F₀(α) sinc²(πα) dα = 2∫₀¹ (T^{−2α}log T + α) sinc² + 2∫₁^∞ sinc².
  const double T = 1e5;
  quad::Options o;
  o.abs_tol = 1e-11;
  auto inner = quad::integrate(
      [&](double a) { return (std::pow(T, -2 * a) * std::log(T) + a) * special::fejer(a); }, 0.0, 1.0, o,
      std::vector<double>{1e-3, 1e-2, 0.1});
  // ∫₀^1 sinc²(πu) du = (Si(2π) − sin²π/π)/π, and ∫₀^∞ = ½.
  const double head = special::sine_integral(2 * pi) / pi;
  const double ref = 2 * (inner.value + 0.5 - head);
  auto fejer_r = [](double u) { return std::max(1 - std::abs(u), 0.0); };
  auto r = conj1_convolved(fejer_r, [](double a) { return special::fejer(a); }, T, 0.0);
  EXPECT_NEAR(r.value, ref, 1e-9);
  // With a shift, the constant branch becomes (4/(4+h²))·r(h log T/2π).
  const double h = 0.5, c = h * std::log(T) / (2 * pi);
  auto shifted = conj1_convolved(fejer_r, [](double a) { return special::fejer(a); }, T, h);
  auto inner_h = quad::integrate(
      [&](double a) {
        return (std::pow(T, -2 * a) * std::log(T) + (a - 1) * 4 * std::cos(h * std::log(T) * a) / (4 + h * h)) *
               special::fejer(a);
      },
      0.0, 1.0, o, std::vector<double>{1e-3, 1e-2, 0.1});
  EXPECT_NEAR(shifted.value, 4 / (4 + h * h) * fejer_r(c) + 2 * inner_h.value, 1e-9);
}

TEST(SymmetricBandModel, ShiftZeroUnitBand) {
  // 2∫₀¹ 1 − sinc²(πu) du = 2 − 2 Si(2π)/π.
  const double ref = 2 - 2 * special::sine_integral(2 * pi) / pi;
  EXPECT_NEAR(conj2_density(1.0, 1e4, 0.0), ref, 1e-9);
  // Composite Simpson as a second opinion.
  const int n = 20000;
  double s = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double u = -1.0 + 2.0 * i / n;
    const double w = (i == 0 || i == n) ? 1 : (i % 2 ? 4 : 2);
    s += w * (1 - special::fejer(u));
  }
  EXPECT_NEAR(conj2_density(1.0, 1e4, 0.0), s * (2.0 / n) / 3, 1e-9);
}

TEST(SymmetricBandModel, CubicAtSmallWidth) {
  // 1 − sinc²(πu) ≈ π²u²/3, so the band integral ≈ 2π²α³/9.
  const double a = 1e-2;
  EXPECT_NEAR(conj2_density(a, 1e4, 0.0) / (2 * pi * pi * a * a * a / 9), 1.0, 1e-3);
  EXPECT_THROW(conj2_density(0.0, 1e4, 0.0), DomainError);
}

TEST(OneSidedBandModel, NarrowBandMeanValue) {
  const double T = 1e5, a = 0.7, d = 1e-5, lT = std::log(T);
  const double r = pi * a / lT;
  const double integrand = 1 - special::fejer(a) / (1 + r * r);
  EXPECT_NEAR(conj3_density(a, a + d, T) / d, integrand, 1e-4);
  std::string warn;
  conj3_density(0.5, 0.6 * lT, T, &warn);
  EXPECT_FALSE(warn.empty());
  EXPECT_THROW(conj3_density(0.5, 1.1 * lT, T), DomainError);
}
