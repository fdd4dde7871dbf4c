#pragma once

// Zeta zero ordinates: a validated immutable table, text I/O in the
// one-ordinate-per-line convention, computation through the Hardy Z-function,
// and a counting-function integrity check.

#include <paircorr/error.hpp>

#include <boost/math/special_functions/bernoulli.hpp>
#include <boost/math/special_functions/lambert_w.hpp>
#include <boost/math/tools/toms748_solve.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <json.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

namespace paircorr {

class ZeroTable {
 public:
  ZeroTable() = default;

  /// Takes ownership of sorted ordinates; t_max is the height up to which the
  /// table is complete (every zero ≤ t_max is present).
  ZeroTable(std::vector<double> ordinates, double t_max, std::string source)
      : ordinates_(std::move(ordinates)), t_max_(t_max), source_(std::move(source)) {
    for (std::size_t i = 0; i < ordinates_.size(); ++i) {
      if (!(ordinates_[i] > 0.0) || !std::isfinite(ordinates_[i]))
        throw DataError("zero table: non-positive ordinate at index " + std::to_string(i));
      if (i > 0 && !(ordinates_[i] > ordinates_[i - 1]))
        throw DataError("zero table: ordinates not strictly increasing at index " + std::to_string(i));
    }
    if (!ordinates_.empty() && ordinates_.back() > t_max_)
      throw DataError("zero table: ordinate above declared t_max");
  }

  const std::vector<double>& ordinates() const { return ordinates_; }
  std::size_t count() const { return ordinates_.size(); }
  bool empty() const { return ordinates_.empty(); }
  double t_max() const { return t_max_; }
  const std::string& source() const { return source_; }
  double operator[](std::size_t i) const { return ordinates_[i]; }

  /// Number of ordinates ≤ T.
  std::size_t count_up_to(double T) const {
    return static_cast<std::size_t>(std::upper_bound(ordinates_.begin(), ordinates_.end(), T) - ordinates_.begin());
  }

  /// The first n ordinates as a table of their own.
  ZeroTable prefix(std::size_t n) const {
    n = std::min(n, ordinates_.size());
    std::vector<double> head(ordinates_.begin(), ordinates_.begin() + static_cast<std::ptrdiff_t>(n));
    const double tm = n == ordinates_.size() ? t_max_ : (n == 0 ? 0.0 : head.back());
    return ZeroTable(std::move(head), tm, source_);
  }

 private:
  std::vector<double> ordinates_;
  double t_max_ = 0.0;
  std::string source_;
};

/// Read ordinates ≤ t_max from a text file (one decimal per line, ascending;
/// blank lines and lines starting with '#' are skipped). Exact duplicates are
/// collapsed; any decrease is a corrupt dataset.
inline ZeroTable load_zeros(const std::string& path, double t_max = std::numeric_limits<double>::infinity()) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open zero file: " + path);
  std::vector<double> out;
  std::string line;
  std::size_t lineno = 0;
  bool truncated = false;
  bool any = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t\r");
    const char* b = line.data() + first;
    const char* e = line.data() + last + 1;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || ptr != e)
      throw DataError("zero file " + path + ": unparsable line " + std::to_string(lineno));
    if (!(v > 0.0)) throw DataError("zero file " + path + ": non-positive ordinate on line " + std::to_string(lineno));
    any = true;
    if (!out.empty() && v <= out.back()) {
      if (v == out.back()) continue;
      throw DataError("zero file " + path + ": ordinates not ascending at line " + std::to_string(lineno));
    }
    if (v > t_max) {
      truncated = true;
      break;
    }
    out.push_back(v);
  }
  if (!any) throw DataError("zero file " + path + ": no ordinates");
  const double coverage = truncated ? t_max : (out.empty() ? 0.0 : out.back());
  return ZeroTable(std::move(out), coverage, path);
}

/// Write ordinates one per line in shortest round-trip decimal form.
inline void export_zeros(const ZeroTable& table, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw DataError("cannot write zero file: " + path);
  char buf[64];
  for (double g : table.ordinates()) {
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, g);
    os.write(buf, ptr - buf);
    os.put('\n');
  }
  if (!os) throw DataError("short write to zero file: " + path);
}

// ---------------------------------------------------------------------------
// Hardy Z-function.

namespace zeta {

inline constexpr double pi = std::numbers::pi;

/// Riemann–Siegel theta, asymptotic series (accurate to ~1e-15 for t ≥ 5).
inline double theta(double t) {
  const double t2 = 1.0 / (t * t);
  const double corr =
      (1.0 / 48 + t2 * (7.0 / 5760 + t2 * (31.0 / 80640 + t2 * (127.0 / 430080 + t2 * 511.0 / 1216512)))) / t;
  return 0.5 * t * std::log(t / (2 * pi)) - 0.5 * t - pi / 8 + corr;
}

inline double theta_prime(double t) {
  return 0.5 * std::log(t / (2 * pi)) - 1.0 / (48 * t * t) - 7.0 / (1920 * std::pow(t, 4));
}

/// ζ(½ + it) by Euler–Maclaurin summation.
inline std::complex<double> zeta_em(double t) {
  using cd = std::complex<double>;
  const cd s(0.5, t);
  const int N = 20 + static_cast<int>(std::ceil(std::abs(t) / pi));
  constexpr int m = 20;
  cd sum = 0.0;
  for (int n = 1; n < N; ++n) {
    const double ln = std::log(static_cast<double>(n));
    sum += std::exp(-s * ln);
  }
  const double lN = std::log(static_cast<double>(N));
  const cd Ns = std::exp(-s * lN);  // N^{-s}
  sum += static_cast<double>(N) * Ns / (s - 1.0) + 0.5 * Ns;
  // Σ B_{2k}/(2k)! · s(s+1)…(s+2k−2) · N^{−s−2k+1}
  cd rising = s;          // s(s+1)…(s+2k−2)
  cd pw = Ns / static_cast<double>(N);  // N^{−s−1}
  double fact = 2.0;      // (2k)!
  for (int k = 1; k <= m; ++k) {
    sum += boost::math::bernoulli_b2n<double>(k) / fact * rising * pw;
    rising *= (s + static_cast<double>(2 * k - 1)) * (s + static_cast<double>(2 * k));
    pw /= static_cast<double>(N) * static_cast<double>(N);
    fact *= static_cast<double>((2 * k + 1) * (2 * k + 2));
  }
  return sum;
}

namespace detail {

// Taylor coefficients of Ψ(z) = −cos(2πz² − 5π/8)/cos(2πz) in z (odd entries
// zero), and for each derivative order j ≤ 12 the coefficients of Ψ^{(j)}.
struct PsiSeries {
  static constexpr int terms = 40;  // powers z^0 … z^{2·terms−2}
  static constexpr int degree = 2 * terms - 2;
  std::array<std::array<double, degree + 1>, 13> deriv{};

  PsiSeries() {
    // Division by the cos(2πz) series amplifies rounding by ~16^m (its zero at
    // z² = 1/16), so the coefficients are formed with 100 digits.
    using mp = boost::multiprecision::cpp_bin_float_100;
    const mp tpi = 2 * boost::math::constants::pi<mp>();
    const mp c58 = cos(5 * boost::math::constants::pi<mp>() / 8);
    const mp s58 = sin(5 * boost::math::constants::pi<mp>() / 8);
    // Series in w = z².
    std::vector<mp> num(terms), den(terms), q(terms);
    mp pw = 1, fact = 1;
    for (int m = 0; m < terms; ++m) {
      if (m > 0) {
        pw *= tpi;
        fact *= m;
      }
      const mp a = pw / fact;  // (2π)^m / m!
      // cos(2πw) and sin(2πw) contributions to w^m.
      const mp cosc = (m % 2 == 0) ? ((m / 2) % 2 ? -a : a) : mp(0);
      const mp sinc = (m % 2 == 1) ? (((m - 1) / 2) % 2 ? -a : a) : mp(0);
      num[m] = -(cosc * c58 + sinc * s58);
    }
    mp p2 = 1, f2 = 1;
    for (int k = 0; k < terms; ++k) {
      if (k > 0) {
        p2 *= tpi * tpi;
        f2 *= mp((2 * k - 1) * (2 * k));
      }
      den[k] = ((k % 2) ? -p2 : p2) / f2;  // cos(2πz) in w
    }
    for (int m = 0; m < terms; ++m) {
      mp acc = num[m];
      for (int j = 1; j <= m; ++j) acc -= den[j] * q[m - j];
      q[m] = acc / den[0];
    }
    std::array<mp, degree + 1> base{};
    for (int m = 0; m < terms; ++m) base[2 * m] = q[m];
    for (int j = 0; j <= 12; ++j) {
      for (int n = 0; n + j <= degree; ++n) {
        mp c = base[n + j];
        for (int r = 1; r <= j; ++r) c *= (n + r);
        deriv[j][n] = static_cast<double>(c);
      }
    }
  }

  double eval(int j, double z) const {
    const auto& c = deriv[j];
    double acc = 0.0;
    for (int n = degree - j; n >= 0; --n) acc = acc * z + c[n];
    return acc;
  }
};

inline const PsiSeries& psi_series() {
  static const PsiSeries s;
  return s;
}

}  // namespace detail

/// Riemann–Siegel correction terms C₀…C₄ at fractional part p.
inline std::array<double, 5> rs_corrections(double p) {
  const auto& ps = detail::psi_series();
  const double z = p - 0.5;
  double d[13];
  for (int j = 0; j <= 12; ++j) d[j] = ps.eval(j, z);
  const double p2 = pi * pi, p4 = p2 * p2, p6 = p4 * p2, p8 = p4 * p4;
  return {d[0],
          -d[3] / (96 * p2),
          d[2] / (64 * p2) + d[6] / (18432 * p4),
          -d[1] / (64 * p2) - d[5] / (3840 * p4) - d[9] / (5308416 * p6),
          d[0] / (128 * p2) + 19 * d[4] / (24576 * p4) + 11 * d[8] / (5898240 * p6) + d[12] / (2038431744 * p8)};
}

/// Z(t) by the Riemann–Siegel formula with four correction terms.
inline double z_riemann_siegel(double t) {
  const double a = std::sqrt(t / (2 * pi));
  const auto N = static_cast<std::int64_t>(std::floor(a));
  const long double th = static_cast<long double>(theta(t));
  const long double two_pi = 2.0L * std::numbers::pi_v<long double>;
  double sum = 0.0;
  for (std::int64_t n = 1; n <= N; ++n) {
    // Reduce the phase in extended precision; it reaches ~10⁶ radians.
    long double ph = th - static_cast<long double>(t) * std::log(static_cast<long double>(n));
    ph -= two_pi * std::nearbyint(ph / two_pi);
    sum += std::cos(static_cast<double>(ph)) / std::sqrt(static_cast<double>(n));
  }
  const auto c = rs_corrections(a - static_cast<double>(N));
  const double ia = 1.0 / a;
  const double rem = c[0] + ia * (c[1] + ia * (c[2] + ia * (c[3] + ia * c[4])));
  const double sign = (N % 2 == 1) ? 1.0 : -1.0;  // (−1)^{N−1}
  return 2.0 * sum + sign * rem / std::sqrt(a);
}

/// Below this height Z is evaluated through Euler–Maclaurin. The truncated
/// Riemann–Siegel series is off by ~3e-7 at t = 50 and ~7e-11 at t = 1000.
inline constexpr double em_switch = 1000.0;

/// Hardy Z(t) = e^{iθ(t)} ζ(½ + it), real for real t.
inline double hardy_z(double t) {
  if (t < em_switch) return (std::polar(1.0, theta(t)) * zeta_em(t)).real();
  return z_riemann_siegel(t);
}

/// Gram point g_n: θ(g_n) = nπ, n ≥ −1.
inline double gram_point(std::int64_t n, double guess = 0.0) {
  const double target = static_cast<double>(n) * pi;
  double g = guess;
  if (!(g > 0.0)) {
    // θ(t) ≈ (t/2) log(t/2πe) − π/8 inverts through Lambert W.
    const double v = (static_cast<double>(n) + 0.125) / std::numbers::e;
    g = v > 0.0 ? 2 * pi * (static_cast<double>(n) + 0.125) / boost::math::lambert_w0(v) : 10.0;
  }
  for (int i = 0; i < 60; ++i) {
    const double step = (theta(g) - target) / theta_prime(g);
    g -= step;
    if (std::abs(step) < 1e-13 * g) break;
  }
  return g;
}

}  // namespace zeta

// ---------------------------------------------------------------------------

/// Largest n accepted by compute_zeros without an explicit override.
inline constexpr std::size_t compute_zeros_cap = 100000;

namespace detail {

inline double refine_zero(double a, double b, double za, double zb) {
  std::uintmax_t iters = 200;
  auto tol = [](double lo, double hi) { return std::abs(hi - lo) <= 1e-11 * std::max(1.0, std::abs(lo)) / 64; };
  auto r = boost::math::tools::toms748_solve([](double t) { return zeta::hardy_z(t); }, a, b, za, zb, tol, iters);
  return 0.5 * (r.first + r.second);
}

// Sign changes of Z over the grid `pts` with values `zs`, refined to zeros.
inline void collect_zeros(const std::vector<double>& pts, const std::vector<double>& zs, std::vector<double>& out) {
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    if ((zs[i] < 0) != (zs[i + 1] < 0)) out.push_back(refine_zero(pts[i], pts[i + 1], zs[i], zs[i + 1]));
}

inline int count_sign_changes(const std::vector<double>& zs) {
  int c = 0;
  for (std::size_t i = 0; i + 1 < zs.size(); ++i) c += (zs[i] < 0) != (zs[i + 1] < 0);
  return c;
}

}  // namespace detail

/// The first n zero ordinates, located Gram block by Gram block: a block
/// between consecutive good Gram points g_j < g_k holds exactly k − j zeros
/// (Rosser's rule, valid throughout the supported range), and the block is
/// subdivided until that many sign changes of Z are seen.
inline ZeroTable compute_zeros(std::size_t n, std::size_t cap = compute_zeros_cap) {
  if (n > cap) throw DomainError("compute_zeros: n exceeds the configured cap");
  std::vector<double> zeros;
  zeros.reserve(n);
  if (n == 0) return ZeroTable({}, 0.0, "computed");

  std::int64_t j = -1;
  double gj = zeta::gram_point(-1);
  double zj = zeta::hardy_z(gj);
  if (!(zj < 0)) throw NumericalError("compute_zeros: g_{-1} is not a good Gram point");

  while (zeros.size() < n) {
    // Extend to the next good Gram point.
    std::vector<double> pts{gj}, zs{zj};
    std::int64_t k = j;
    double gk = gj;
    for (;;) {
      ++k;
      gk = zeta::gram_point(k, gk + 2 * zeta::pi / zeta::theta_prime(gk));
      const double zk = zeta::hardy_z(gk);
      pts.push_back(gk);
      zs.push_back(zk);
      if ((k % 2 == 0) ? zk > 0 : zk < 0) break;
      if (k - j > 64) throw NumericalError("compute_zeros: Gram block longer than 64 intervals");
    }
    const int want = static_cast<int>(k - j);
    int depth = 0;
    while (detail::count_sign_changes(zs) < want) {
      if (++depth > 12)
        throw NumericalError("compute_zeros: missing zero in Gram block starting at t=" + std::to_string(gj));
      std::vector<double> np, nz;
      for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        np.push_back(pts[i]);
        nz.push_back(zs[i]);
        const double m = 0.5 * (pts[i] + pts[i + 1]);
        np.push_back(m);
        nz.push_back(zeta::hardy_z(m));
      }
      np.push_back(pts.back());
      nz.push_back(zs.back());
      pts.swap(np);
      zs.swap(nz);
    }
    if (detail::count_sign_changes(zs) > want)
      throw NumericalError("compute_zeros: more sign changes than Rosser's rule allows near t=" + std::to_string(gj));
    detail::collect_zeros(pts, zs, zeros);
    j = k;
    gj = gk;
    zj = zs.back();
  }
  zeros.resize(n);
  const double tm = zeros.back();
  return ZeroTable(std::move(zeros), tm, "computed");
}

/// Load the first n zeros from `cache_path` if it holds at least n of them,
/// otherwise compute them and rewrite the cache.
inline ZeroTable cached_zeros(std::size_t n, const std::string& cache_path) {
  try {
    auto t = load_zeros(cache_path);
    if (t.count() >= n) {
      auto p = t.prefix(n);
      return ZeroTable(std::vector<double>(p.ordinates()), p.t_max(), "computed");
    }
  } catch (const DataError&) {
  }
  auto t = compute_zeros(n);
  try {
    export_zeros(t, cache_path);
  } catch (const DataError&) {
  }
  return t;
}

// ---------------------------------------------------------------------------

/// N(T) ≈ (T/2π) log(T/2πe) + 7/8.
inline double smooth_zero_count(double T) {
  if (!(T > 0.0)) return 0.0;
  return T / (2 * zeta::pi) * std::log(T / (2 * zeta::pi * std::numbers::e)) + 0.875;
}

struct CountReport {
  double t_max = 0.0;
  std::size_t count = 0;
  double expected = 0.0;
  double deviation = 0.0;
  double threshold = 2.0;
  bool ok = true;
  std::string source;

  nlohmann::json to_json() const {
    return {{"t_max", t_max}, {"count", count},         {"expected", expected}, {"deviation", deviation},
            {"threshold", threshold}, {"ok", ok}, {"source", source}};
  }
};

/// Compare the number of ordinates ≤ t_max with the smooth count.
/// Below γ₁ the smooth formula goes negative and is clamped at 0.
inline CountReport validate_count(const ZeroTable& table, double threshold = 2.0) {
  CountReport r;
  r.t_max = table.t_max();
  r.count = table.count_up_to(r.t_max);
  r.expected = std::max(0.0, smooth_zero_count(r.t_max));
  r.deviation = static_cast<double>(r.count) - r.expected;
  r.threshold = threshold;
  r.ok = std::abs(r.deviation) <= threshold;
  r.source = table.source();
  return r;
}

}  // namespace paircorr
