#include <paircorr/arithfn.hpp>
#include <paircorr/quad.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace paircorr;
using namespace paircorr::arith;

namespace {

std::shared_ptr<const CorrectionState> corr() { return default_corrections(); }
const SingularSeriesTable& table() { return corr()->table(); }

}  // namespace

TEST(VonMangoldt, Values) {
  EXPECT_DOUBLE_EQ(von_mangoldt(8), std::log(2.0));
  EXPECT_EQ(von_mangoldt(12), 0.0);
  EXPECT_EQ(von_mangoldt(1), 0.0);
  EXPECT_DOUBLE_EQ(von_mangoldt(97), std::log(97.0));
  EXPECT_DOUBLE_EQ(von_mangoldt(3 * 3 * 3 * 3), std::log(3.0));
  EXPECT_THROW(von_mangoldt(0), DomainError);
}

TEST(VonMangoldt, DivisorSumIsLog) {
  const auto lam = von_mangoldt_table(10000);
  for (i64 n = 1; n <= 10000; ++n) {
    double s = 0.0;
    for (i64 d = 1; d * d <= n; ++d) {
      if (n % d) continue;
      s += lam[d];
      if (d != n / d) s += lam[n / d];
    }
    ASSERT_NEAR(s, std::log(static_cast<double>(n)), 1e-12) << n;
  }
}

TEST(VonMangoldt, TableMatchesPointwise) {
  const auto lam = von_mangoldt_table(5000);
  for (i64 n = 1; n <= 5000; ++n) ASSERT_EQ(lam[n], von_mangoldt(n)) << n;
}

TEST(Sieve, PrimeCounts) {
  EXPECT_EQ(primes_up_to(100).size(), 25u);
  EXPECT_EQ(primes_up_to(1'000'000).size(), 78498u);
  EXPECT_TRUE(primes_up_to(1).empty());
}

// ---------------------------------------------------------------------------

TEST(SingularSeries, TwinConstant) {
  // The truncated product sits above the true constant by at most the tail bound.
  const double exact = 1.32032363169373914785;
  EXPECT_GE(table().value(2), exact);
  EXPECT_LE(table().value(2) - exact, exact * table().twin_prime_tail_bound());
  EXPECT_EQ(table().value(2), table().twin_prime_product());
  EXPECT_LT(table().twin_prime_tail_bound(), 1.5e-8);
}

TEST(SingularSeries, OddVanishAndLocalFactors) {
  EXPECT_EQ(table().value(3), 0.0);
  EXPECT_EQ(singular_series(3, table().twin_prime_product()), 0.0);
  EXPECT_NEAR(table().value(6), 2.0 * table().value(2), 1e-15);
  const double c = table().twin_prime_product();
  for (i64 k = 1; k <= 20000; ++k) {
    ASSERT_GE(table().value(k), 0.0);
    if (k % 2) {
      ASSERT_EQ(table().value(k), 0.0);
    }
    ASSERT_NEAR(table().value(k), singular_series(k, c), 1e-13) << k;
  }
}

TEST(SingularSeries, SquarefreeMultiplicativity) {
  const double s2 = table().value(2);
  // m odd squarefree: 3·5·7, 11·13, 3·17·19.
  EXPECT_DOUBLE_EQ(table().value(2 * 105), s2 * 2.0 * (4.0 / 3.0) * (6.0 / 5.0));
  EXPECT_DOUBLE_EQ(table().value(2 * 143), s2 * (10.0 / 9.0) * (12.0 / 11.0));
  EXPECT_DOUBLE_EQ(table().value(2 * 969), s2 * 2.0 * (16.0 / 15.0) * (18.0 / 17.0));
}

TEST(SingularSeries, PartialSums) {
  EXPECT_EQ(table().partial_sum(1.5), 0.0);
  EXPECT_EQ(table().partial_sum(2.0), table().value(2));
  for (i64 n = 1; n < 1000; ++n) ASSERT_LE(table().partial_sum_at(n), table().partial_sum_at(n + 1));
  EXPECT_THROW(table().partial_sum(2e6), DomainError);
  const double y = 1e4;
  const double dev = std::abs(table().partial_sum(y) - y + 0.5 * std::log(y));
  EXPECT_LE(dev, 1.31 * std::pow(std::log(y), 2.0 / 3.0));
}

TEST(SingularSeries, CacheRoundTrip) {
  auto small = SingularSeriesTable::build(5000, 100000);
  const std::string path = std::string(PAIRCORR_TEST_DATA) + "/ss_roundtrip.bin";
  small.save(path);
  auto back = SingularSeriesTable::load(path, 5000, 100000);
  EXPECT_EQ(back.values(), small.values());
  EXPECT_EQ(back.twin_prime_product(), small.twin_prime_product());
  EXPECT_THROW(SingularSeriesTable::load(path, 5001, 100000), DataError);
}

// ---------------------------------------------------------------------------

TEST(Epsilon, Values) {
  EXPECT_NEAR(corr()->epsilon(0.5), 0.5 * std::log(0.5) - 0.5, 1e-15);
  EXPECT_NEAR(corr()->epsilon(1.0), -1.0, 1e-15);
  double direct = 0.0;
  for (i64 k = 1; k <= 100; ++k) direct += singular_series(k, table().twin_prime_product());
  EXPECT_NEAR(corr()->epsilon(100.0), direct - 100.0 + 0.5 * std::log(100.0), 1e-12);
  EXPECT_THROW(corr()->epsilon(0.0), DomainError);
}

TEST(Epsilon, JumpsBySingularSeries) {
  for (i64 k : {2, 3, 4, 30, 1000, 99999}) {
    const double kd = static_cast<double>(k);
    const double jump = corr()->epsilon(kd) - corr()->epsilon(std::nextafter(kd, 0.0));
    EXPECT_NEAR(jump, table().value(k), 1e-9) << k;
  }
  // Continuous off integers.
  EXPECT_NEAR(corr()->epsilon(10.5 + 1e-9), corr()->epsilon(10.5), 1e-8);
}

TEST(CorrectionConstants, B) {
  EXPECT_NEAR(CorrectionState::B, -std::numbers::egamma - std::log(2 * std::numbers::pi), 1e-15);
  EXPECT_NEAR(CorrectionState::B, -2.4150927313108782, 1e-12);
}

TEST(FFunction, SmallValues) {
  EXPECT_EQ(corr()->f(0.0), 0.0);
  EXPECT_NEAR(corr()->f(1.0), -1.0 - CorrectionState::B / 2, 1e-14);
  EXPECT_THROW(corr()->f(-1.0), DomainError);
}

TEST(FFunction, AgainstQuadrature) {
  for (double y : {1.0, 3.7, 50.0, 123.25}) {
    std::vector<double> bp;
    for (double k = 1; k < y; ++k) bp.push_back(k);
    quad::Options o;
    o.abs_tol = 1e-11;
    auto r = quad::integrate([&](double u) { return corr()->epsilon(u) - CorrectionState::B / 2; }, 1.0, y, o, bp);
    EXPECT_NEAR(corr()->f(y), corr()->f(1.0) + r.value, 1e-10) << y;
  }
  EXPECT_LE(std::abs(corr()->f(50.0)), 1.0 * std::pow(50.0, 0.6));
}

TEST(FFunction, DerivativeIsEpsilonShift) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(1.0, 1e5);
  for (int i = 0; i < 100; ++i) {
    double y = dist(rng);
    if (y - std::floor(y) < 1e-3 || std::ceil(y) - y < 1e-3) y += 0.5;
    const double d = 1e-5;
    const double num = (corr()->f(y + d) - corr()->f(y - d)) / (2 * d);
    EXPECT_NEAR(num, corr()->epsilon(y) - CorrectionState::B / 2, 1e-5 * (1 + std::abs(corr()->f(y)))) << y;
  }
}

TEST(FFunction, ContinuousAcrossIntegers) {
  for (i64 n : {1, 2, 7, 1000, 500000}) {
    const double nd = static_cast<double>(n);
    EXPECT_NEAR(corr()->f(std::nextafter(nd, 0.0)), corr()->f(nd), 1e-9);
    EXPECT_NEAR(corr()->f_at(n), corr()->f(nd), 1e-12);
  }
}

// ---------------------------------------------------------------------------

TEST(SAlpha, EmptySum) {
  const double y = 0.5, a = 2.0, h = 1.0, x = 10.0;
  quad::Options o;
  o.abs_tol = 1e-13;
  auto r = quad::integrate([&](double u) { return std::pow(u, a) * std::cos(h * std::log(u * x / y)); }, 0.0, y, o);
  EXPECT_NEAR(s_alpha_h(table(), y, a, h, x), -r.value, 1e-13);
}

TEST(SAlpha, ZeroOrderEnvelope) {
  const double y = 1e3;
  const double s0 = s_alpha_h(table(), y, 0.0, 0.0, 7.0);
  EXPECT_LE(std::abs(s0 + 0.5 * std::log(y)), 1.31 * std::pow(std::log(y), 2.0 / 3.0));
  EXPECT_NEAR(s0, corr()->epsilon(y) - 0.5 * std::log(y), 1e-9);
}

TEST(SAlpha, RejectsOverflow) { EXPECT_THROW(s_alpha_h(table(), 2e6, 0.0, 0.0, 1.0), DomainError); }

TEST(TAlpha, EmptyRangeIsPureIntegral) {
  const double y = 1000.0, a = 2.0, h = 1.0, x = 10.0;
  auto t = t_alpha_h(table(), y, a, h, x, 1000);
  const double L = std::log(x);
  const double integral = (1.0 / y) * ((a - 1) * std::cos(h * L) - h * std::sin(h * L)) / ((a - 1) * (a - 1) + h * h);
  EXPECT_NEAR(t.value, -integral, 1e-15);
}

TEST(TAlpha, TruncationWithinUncertainty) {
  const double y = 10.0, a = 2.0, h = 1.0, x = 10.0;
  auto full = t_alpha_h(table(), y, a, h, x, table().k_max());
  auto cut = t_alpha_h(table(), y, a, h, x, 10000);
  EXPECT_LE(std::abs(full.value - cut.value), cut.uncertainty);
  EXPECT_THROW(t_alpha_h(table(), y, 1.0, h, x, 100), DomainError);
  EXPECT_THROW(t_alpha_h(table(), y, 2.0, h, x, 5), DomainError);
}
