#pragma once

// Number-theoretic primitives: von Mangoldt Λ, the Hardy–Littlewood singular
// series 𝔖(k), the correction functions ε and f built on its partial sums, and
// the S_α^h / T_α^h partial-sum functionals.

#include <paircorr/error.hpp>
#include <paircorr/special.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

namespace paircorr::arith {

using i64 = std::int64_t;

/// Odd-only sieve of Eratosthenes; returns all primes ≤ n.
inline std::vector<i64> primes_up_to(i64 n) {
  std::vector<i64> out;
  if (n < 2) return out;
  out.push_back(2);
  const i64 half = (n - 1) / 2;  // index i ↔ 2i+1, i ≥ 1
  std::vector<std::uint8_t> composite(static_cast<std::size_t>(half + 1), 0);
  for (i64 i = 1; i <= half; ++i) {
    if (composite[i]) continue;
    const i64 p = 2 * i + 1;
    out.push_back(p);
    for (i64 j = (p * p - 1) / 2; j <= half; j += p) composite[j] = 1;
  }
  return out;
}

/// Smallest-prime-factor table for 0..n (spf[0] = spf[1] = 0).
inline std::vector<std::uint32_t> smallest_prime_factors(i64 n) {
  std::vector<std::uint32_t> spf(static_cast<std::size_t>(n + 1), 0);
  for (i64 i = 2; i <= n; ++i) {
    if (spf[i]) continue;
    spf[i] = static_cast<std::uint32_t>(i);
    if (i > n / i) continue;
    for (i64 j = i * i; j <= n; j += i)
      if (!spf[j]) spf[j] = static_cast<std::uint32_t>(i);
  }
  return spf;
}

/// Λ(n): log p when n = p^k, else 0.
inline double von_mangoldt(i64 n) {
  if (n < 1) throw DomainError("von_mangoldt: n must be >= 1");
  if (n == 1) return 0.0;
  i64 p = 0;
  if (n % 2 == 0) {
    p = 2;
  } else {
    for (i64 d = 3; d <= n / d; d += 2)
      if (n % d == 0) {
        p = d;
        break;
      }
    if (p == 0) p = n;
  }
  while (n % p == 0) n /= p;
  return n == 1 ? std::log(static_cast<double>(p)) : 0.0;
}

/// Λ(n) for 0 ≤ n ≤ limit (entry 0 unused).
inline std::vector<double> von_mangoldt_table(i64 limit) {
  std::vector<double> lam(static_cast<std::size_t>(limit + 1), 0.0);
  for (i64 p : primes_up_to(limit)) {
    const double lp = std::log(static_cast<double>(p));
    for (i64 q = p;; q *= p) {
      lam[q] = lp;
      if (q > limit / p) break;
    }
  }
  return lam;
}

/// 2∏_{2<p≤P}(1 − 1/(p−1)²) and a bound on the omitted tail factor:
/// ∏_{p>P}(1 − 1/(p−1)²) ∈ [1 − 2/(P log P), 1].
struct TwinPrimeProduct {
  double value;
  double tail_bound;  // relative: true value ∈ [value·(1 − tail_bound), value]
  i64 prime_bound;
};

inline TwinPrimeProduct twin_prime_product(i64 prime_bound) {
  if (prime_bound < 3) throw DomainError("twin_prime_product: prime bound must be >= 3");
  long double prod = 2.0L;
  for (i64 p : primes_up_to(prime_bound)) {
    if (p == 2) continue;
    const long double q = static_cast<long double>(p - 1);
    prod *= 1.0L - 1.0L / (q * q);
  }
  const double P = static_cast<double>(prime_bound);
  return {static_cast<double>(prod), 2.0 / (P * std::log(P)), prime_bound};
}

// ---------------------------------------------------------------------------

/// 𝔖(1..K_max) with running partial sums and the excess D_n = Σ_{k≤n}𝔖(k) − n.
class SingularSeriesTable {
 public:
  static constexpr std::uint32_t cache_version = 1;

  static SingularSeriesTable build(i64 k_max = 1'000'000, i64 prime_bound = 10'000'000) {
    if (k_max < 2) throw DomainError("SingularSeriesTable: k_max must be >= 2");
    const auto tp = arith::twin_prime_product(prime_bound);
    SingularSeriesTable t;
    t.k_max_ = k_max;
    t.prime_bound_ = prime_bound;
    t.twin_ = tp.value;
    t.twin_tail_ = tp.tail_bound;
    t.values_.assign(static_cast<std::size_t>(k_max + 1), 0.0);
    const auto spf = smallest_prime_factors(k_max);
    for (i64 k = 2; k <= k_max; k += 2) {
      double v = tp.value;
      i64 m = k;
      while (m > 1) {
        const i64 p = spf[m];
        if (p > 2) v *= static_cast<double>(p - 1) / static_cast<double>(p - 2);
        while (m % p == 0) m /= p;
      }
      t.values_[k] = v;
    }
    t.finish();
    return t;
  }

  i64 k_max() const { return k_max_; }
  i64 prime_bound() const { return prime_bound_; }
  double twin_prime_product() const { return twin_; }
  double twin_prime_tail_bound() const { return twin_tail_; }
  double max_value() const { return max_; }

  /// 𝔖(k) from the table, 1 ≤ k ≤ K_max.
  double value(i64 k) const {
    if (k < 1 || k > k_max_) throw DomainError("singular series: k outside table range");
    return values_[k];
  }

  /// Σ_{k≤n}𝔖(k) − n, accumulated without cancellation.
  double excess(i64 n) const {
    if (n < 0 || n > k_max_) throw DomainError("singular series: n outside table range");
    return excess_[n];
  }

  double partial_sum_at(i64 n) const {
    if (n < 0 || n > k_max_) throw DomainError("singular series: n outside table range");
    return partial_[n];
  }

  /// Σ_{k≤y} 𝔖(k).
  double partial_sum(double y) const {
    if (y < 0.0) throw DomainError("singular_series_partial_sum: y must be >= 0");
    if (y > static_cast<double>(k_max_)) throw DomainError("singular_series_partial_sum: y exceeds table range");
    return partial_[static_cast<i64>(std::floor(y))];
  }

  const std::vector<double>& values() const { return values_; }

  void save(const std::string& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw DataError("cannot write singular series cache: " + path);
    const char magic[4] = {'P', 'C', 'S', 'S'};
    os.write(magic, 4);
    write_pod(os, cache_version);
    write_pod(os, k_max_);
    write_pod(os, prime_bound_);
    write_pod(os, twin_);
    write_pod(os, twin_tail_);
    os.write(reinterpret_cast<const char*>(values_.data()),
             static_cast<std::streamsize>(values_.size() * sizeof(double)));
    if (!os) throw DataError("short write to singular series cache: " + path);
  }

  /// Load a cache written by save(); the key (K_max, prime bound) must match.
  static SingularSeriesTable load(const std::string& path, i64 k_max, i64 prime_bound) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw DataError("cannot read singular series cache: " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "PCSS", 4) != 0) throw DataError("not a singular series cache: " + path);
    SingularSeriesTable t;
    std::uint32_t version = 0;
    read_pod(is, version);
    if (version != cache_version) throw DataError("singular series cache version mismatch");
    read_pod(is, t.k_max_);
    read_pod(is, t.prime_bound_);
    if (t.k_max_ != k_max || t.prime_bound_ != prime_bound)
      throw DataError("singular series cache key mismatch");
    read_pod(is, t.twin_);
    read_pod(is, t.twin_tail_);
    t.values_.resize(static_cast<std::size_t>(t.k_max_ + 1));
    is.read(reinterpret_cast<char*>(t.values_.data()),
            static_cast<std::streamsize>(t.values_.size() * sizeof(double)));
    if (!is) throw DataError("truncated singular series cache: " + path);
    t.finish();
    return t;
  }

  /// Load from cache when present and matching, otherwise build and write it.
  static SingularSeriesTable cached(const std::string& path, i64 k_max, i64 prime_bound) {
    try {
      return load(path, k_max, prime_bound);
    } catch (const DataError&) {
      auto t = build(k_max, prime_bound);
      try {
        t.save(path);
      } catch (const DataError&) {
      }
      return t;
    }
  }

 private:
  template <class T>
  static void write_pod(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
  }
  template <class T>
  static void read_pod(std::istream& is, T& v) {
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
  }

  void finish() {
    partial_.assign(values_.size(), 0.0);
    excess_.assign(values_.size(), 0.0);
    long double s = 0.0L, e = 0.0L;
    max_ = 0.0;
    for (std::size_t k = 1; k < values_.size(); ++k) {
      s += values_[k];
      e += static_cast<long double>(values_[k]) - 1.0L;
      partial_[k] = static_cast<double>(s);
      excess_[k] = static_cast<double>(e);
      max_ = std::max(max_, values_[k]);
    }
  }

  i64 k_max_ = 0;
  i64 prime_bound_ = 0;
  double twin_ = 0.0;
  double twin_tail_ = 0.0;
  double max_ = 0.0;
  std::vector<double> values_;
  std::vector<double> partial_;
  std::vector<double> excess_;
};

/// 𝔖(d) for any d ≥ 1 by factoring d; `twin` is 2∏_{p>2}(1 − 1/(p−1)²).
inline double singular_series(i64 d, double twin) {
  if (d < 1) throw DomainError("singular_series: d must be >= 1");
  if (d % 2) return 0.0;
  double v = twin;
  i64 m = d;
  while (m % 2 == 0) m /= 2;
  for (i64 p = 3; p <= m / p; p += 2) {
    if (m % p) continue;
    v *= static_cast<double>(p - 1) / static_cast<double>(p - 2);
    while (m % p == 0) m /= p;
  }
  if (m > 1) v *= static_cast<double>(m - 1) / static_cast<double>(m - 2);
  return v;
}

// ---------------------------------------------------------------------------

/// B, C₀, ε(y) and f(y) = ∫₀^y ε(u) − B/2 du over a singular-series table.
class CorrectionState {
 public:
  explicit CorrectionState(std::shared_ptr<const SingularSeriesTable> table) : table_(std::move(table)) {
    if (!table_) throw DomainError("CorrectionState: null table");
    const i64 K = table_->k_max();
    f_int_.assign(static_cast<std::size_t>(K + 1), 0.0L);
    f_int_[1] = -1.0L - static_cast<long double>(B) / 2.0L;
    for (i64 n = 1; n < K; ++n) f_int_[n + 1] = f_int_[n] + unit_piece(n, 1.0);
  }

  static constexpr double euler_gamma = special::euler_gamma;
  static constexpr double B = -std::numbers::egamma - 1.8378770664093454836;  // −C₀ − log 2π

  const SingularSeriesTable& table() const { return *table_; }
  std::shared_ptr<const SingularSeriesTable> table_ptr() const { return table_; }
  double y_max() const { return static_cast<double>(table_->k_max()); }

  /// ε(y) = Σ_{k≤y}𝔖(k) − y + ½ log y, right-continuous at integers.
  double epsilon(double y) const {
    if (!(y > 0.0)) throw DomainError("epsilon_fn: y must be positive");
    if (y > y_max()) throw DomainError("epsilon_fn: y exceeds table range");
    const i64 n = static_cast<i64>(std::floor(y));
    return table_->excess(n) - (y - static_cast<double>(n)) + 0.5 * std::log(y);
  }

  /// f(y), exact piecewise integration of ε − B/2.
  double f(double y) const {
    if (y < 0.0) throw DomainError("f_fn: y must be >= 0");
    if (y > y_max()) throw DomainError("f_fn: y exceeds table range");
    if (y == 0.0) return 0.0;
    if (y <= 1.0) return 0.5 * y * std::log(y) - (0.5 + B / 2) * y - 0.5 * y * y;
    const i64 n = static_cast<i64>(std::floor(y));
    const double t = y - static_cast<double>(n);
    return static_cast<double>(f_int_[n] + unit_piece(n, t));
  }

  /// f at integer points, the cached grid.
  double f_at(i64 n) const {
    if (n < 0 || n > table_->k_max()) throw DomainError("f_fn: n outside table range");
    return n == 0 ? 0.0 : static_cast<double>(f_int_[n]);
  }

 private:
  // ∫_n^{n+t} ε(u) − B/2 du for n ≥ 1, 0 ≤ t ≤ 1.
  long double unit_piece(i64 n, double t) const {
    if (t == 0.0) return 0.0L;
    const double nd = static_cast<double>(n);
    const double y = nd + t;
    const long double d = table_->excess(n);
    const long double lin = (d - static_cast<long double>(B) / 2.0L) * t - 0.5L * t * t;
    const long double lg = 0.5L * (static_cast<long double>(t) * std::log(static_cast<long double>(y)) +
                                   nd * std::log1p(static_cast<long double>(t) / nd) - t);
    return lin + lg;
  }

  std::shared_ptr<const SingularSeriesTable> table_;
  std::vector<long double> f_int_;
};

/// Shared default table (K_max = 10⁶, primes ≤ 10⁷) and its corrections.
inline std::shared_ptr<const CorrectionState> default_corrections() {
  static const auto state = [] {
    auto table = std::make_shared<const SingularSeriesTable>(SingularSeriesTable::build());
    return std::make_shared<const CorrectionState>(table);
  }();
  return state;
}

// ---------------------------------------------------------------------------
// S_α^h and T_α^h.

/// S_α^h(y) = Σ_{k≤y}𝔖(k)k^α cos(h log(kx/y)) − ∫₀^y u^α cos(h log(ux/y)) du.
inline double s_alpha_h(const SingularSeriesTable& tab, double y, double alpha, double h, double x) {
  if (y < 0.0) throw DomainError("s_alpha_h: y must be >= 0");
  if (alpha < 0.0) throw DomainError("s_alpha_h: alpha must be >= 0");
  if (x < 1.0) throw DomainError("s_alpha_h: x must be >= 1");
  if (y > static_cast<double>(tab.k_max())) throw DomainError("s_alpha_h: table overflow");
  if (y == 0.0) return 0.0;
  const double L = std::log(x);
  const double ly = std::log(y);
  const i64 n = static_cast<i64>(std::floor(y));
  long double sum = 0.0L;
  for (i64 k = 2; k <= n; k += 2) {
    const double lk = std::log(static_cast<double>(k));
    sum += tab.value(k) * std::exp(alpha * lk) * std::cos(h * (lk + L - ly));
  }
  const double a1 = alpha + 1.0;
  const double integral = std::pow(y, a1) * (a1 * std::cos(h * L) + h * std::sin(h * L)) / (a1 * a1 + h * h);
  return static_cast<double>(sum - integral);
}

struct TailedValue {
  double value;
  double uncertainty;  // bound on |value − true|
};

/// T_α^h(y) = Σ_{k>y}𝔖(k)k^{−α} cos(h log(kx/y)) − ∫_y^∞ u^{−α} cos(h log(ux/y)) du,
/// with the sum cut at k_cap; the omitted terms are bounded by
/// max𝔖 · k_cap^{1−α}/(α−1).
inline TailedValue t_alpha_h(const SingularSeriesTable& tab, double y, double alpha, double h, double x,
                             i64 k_cap) {
  if (!(alpha > 1.0)) throw DomainError("t_alpha_h: alpha must exceed 1");
  if (!(y > 0.0)) throw DomainError("t_alpha_h: y must be positive");
  if (x < 1.0) throw DomainError("t_alpha_h: x must be >= 1");
  if (static_cast<double>(k_cap) < y) throw DomainError("t_alpha_h: k_cap must be >= y");
  if (k_cap > tab.k_max()) throw DomainError("t_alpha_h: table overflow");
  const double L = std::log(x);
  const double ly = std::log(y);
  long double sum = 0.0L;
  i64 k0 = static_cast<i64>(std::floor(y)) + 1;
  if (k0 % 2) ++k0;
  for (i64 k = k0; k <= k_cap; k += 2) {
    const double lk = std::log(static_cast<double>(k));
    sum += tab.value(k) * std::exp(-alpha * lk) * std::cos(h * (lk + L - ly));
  }
  const double am = alpha - 1.0;
  const double integral = std::pow(y, -am) * (am * std::cos(h * L) - h * std::sin(h * L)) / (am * am + h * h);
  const double K = static_cast<double>(k_cap);
  // Omitted terms: Σ_{k>K} 𝔖(k) k^{−α} ≤ max𝔖 · ∫_K^∞ u^{−α} du.
  const double tail = tab.max_value() * std::pow(K, -am) / am;
  return {static_cast<double>(sum - integral), tail};
}

}  // namespace paircorr::arith
