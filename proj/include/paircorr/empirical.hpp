#pragma once

// Empirical pair statistics over a zero table: F_h(x,T), the form factor,
// band pair counts and the kernel-convolved statistic.

#include <paircorr/error.hpp>
#include <paircorr/special.hpp>
#include <paircorr/zero_source.hpp>

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace paircorr::empirical {

inline double weight(double u) { return 4.0 / (4.0 + u * u); }

enum class Mode { exact, windowed };

struct PairCorrRequest {
  double x = 1.0;
  double T = 0.0;
  double h = 0.0;
  Mode mode = Mode::exact;
  double W = std::numeric_limits<double>::infinity();
  // log x when known exactly (e.g. α·log T); NaN means use log(x).
  double log_x = std::numeric_limits<double>::quiet_NaN();

  static PairCorrRequest exact(double x, double T, double h) { return {x, T, h, Mode::exact}; }
  static PairCorrRequest windowed(double x, double T, double h, double W) { return {x, T, h, Mode::windowed, W}; }

  double L() const { return std::isnan(log_x) ? std::log(x) : log_x; }
};

struct FhEstimate {
  double value = 0.0;
  std::int64_t pairs_used = 0;
  std::int64_t pairs_omitted = 0;
  double truncation_bound = 0.0;
  double h_tilde = 1.0;
  double diagonal = 0.0;  // the γ = γ′ subtotal
};

inline nlohmann::json to_json(const PairCorrRequest& req, const FhEstimate& e) {
  return {{"x", req.x},
          {"T", req.T},
          {"h", req.h},
          {"mode", req.mode == Mode::exact ? "exact" : "windowed"},
          {"window", req.mode == Mode::exact ? nlohmann::json(nullptr) : nlohmann::json(req.W)},
          {"value", e.value},
          {"pairs_used", e.pairs_used},
          {"truncation_bound", e.truncation_bound}};
}

/// Worker count for pair sweeps; results do not depend on it.
inline unsigned default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

namespace detail {

inline constexpr std::size_t rows_per_chunk = 512;

// Run body(i_begin, i_end) → double over fixed row chunks on `workers`
// threads, then add the chunk partials in index order. The chunking is fixed,
// so the result is bit-identical for every worker count.
template <class Body>
double chunked_sum(std::size_t n, unsigned workers, Body&& body, std::vector<std::int64_t>* counts = nullptr) {
  const std::size_t chunks = (n + rows_per_chunk - 1) / rows_per_chunk;
  std::vector<double> partial(chunks, 0.0);
  std::vector<std::int64_t> cnt(chunks, 0);
  auto run = [&](unsigned w) {
    for (std::size_t c = w; c < chunks; c += workers) {
      const std::size_t b = c * rows_per_chunk, e = std::min(n, b + rows_per_chunk);
      partial[c] = body(b, e, cnt[c]);
    }
  };
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(chunks, 1))));
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }
  // Pairwise tree over chunk partials.
  while (partial.size() > 1) {
    std::vector<double> next((partial.size() + 1) / 2);
    for (std::size_t i = 0; i < next.size(); ++i)
      next[i] = partial[2 * i] + (2 * i + 1 < partial.size() ? partial[2 * i + 1] : 0.0);
    partial.swap(next);
  }
  if (counts) *counts = cnt;
  return partial.empty() ? 0.0 : partial[0];
}

// Phase γ·L reduced to [−π, π] in extended precision.
inline void unit_phases(const std::vector<double>& g, std::size_t n, double L, std::vector<double>& c,
                        std::vector<double>& s) {
  const long double two_pi = 2.0L * std::numbers::pi_v<long double>;
  c.resize(n);
  s.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    long double ph = static_cast<long double>(g[i]) * static_cast<long double>(L);
    ph -= two_pi * std::nearbyint(ph / two_pi);
    c[i] = std::cos(static_cast<double>(ph));
    s[i] = std::sin(static_cast<double>(ph));
  }
}

}  // namespace detail

/// The pair sweep behind both modes. Each unordered pair i > j contributes
/// its two orderings, d = γ_i − γ_j > 0 and −d:
///   cos((d−h)L)w(d−h) + cos((−d−h)L)w(d+h)
///     = (A+B)w(d−h) + (A−B)w(d+h),  A = cos(dL)cos(hL), B = sin(dL)sin(hL),
/// and the two orderings are added as one commutative pair so that h ↦ −h
/// reproduces the same floating-point value. An ordering is kept when its
/// shifted difference lies within W.
inline FhEstimate fh_sweep(const ZeroTable& zeros, const PairCorrRequest& req, unsigned workers = default_workers()) {
  if (!(req.T > 0.0)) throw DomainError("fh: T must be positive");
  if (req.x < 1.0 && std::isnan(req.log_x)) throw DomainError("fh: x must be >= 1");
  if (req.T > zeros.t_max()) throw DomainError("fh: T exceeds table coverage");
  const std::size_t n = zeros.count_up_to(req.T);
  const auto& g = zeros.ordinates();
  const double L = req.L();
  const double h = req.h;
  const double W = req.mode == Mode::exact ? std::numeric_limits<double>::infinity() : req.W;
  const double reach = W + std::abs(h);
  const double ch = std::cos(h * L), sh = std::sin(h * L);

  std::vector<double> c, s;
  detail::unit_phases(g, n, L, c, s);

  FhEstimate est;
  est.h_tilde = std::abs(h) + 1.0;
  const bool diag_in = std::abs(h) <= W;
  est.diagonal = diag_in ? static_cast<double>(n) * ch * weight(h) : 0.0;

  std::vector<std::int64_t> counts;
  const bool full = !std::isfinite(W);
  auto body = [&](std::size_t b, std::size_t e, std::int64_t& used) -> double {
    double acc = 0.0;
    std::size_t lo = 0;
    if (!full) lo = static_cast<std::size_t>(std::lower_bound(g.begin(), g.begin() + b, g[b] - reach) - g.begin());
    for (std::size_t i = b; i < e; ++i) {
      if (!full)
        while (lo < i && g[i] - g[lo] > reach) ++lo;
      const double gi = g[i], ci = c[i], si = s[i];
      double row = 0.0;
      if (full) {
        for (std::size_t j = 0; j < i; ++j) {
          const double d = gi - g[j];
          const double A = (ci * c[j] + si * s[j]) * ch;
          const double B = (si * c[j] - ci * s[j]) * sh;
          const double um = d - h, up = d + h;
          row += (A + B) * (4.0 / (4.0 + um * um)) + (A - B) * (4.0 / (4.0 + up * up));
        }
        used += 2 * static_cast<std::int64_t>(i);
      } else {
        for (std::size_t j = lo; j < i; ++j) {
          const double d = gi - g[j];
          const double A = (ci * c[j] + si * s[j]) * ch;
          const double B = (si * c[j] - ci * s[j]) * sh;
          const double um = d - h, up = d + h;
          const bool km = std::abs(um) <= W, kp = std::abs(up) <= W;
          const double tm = km ? (A + B) * (4.0 / (4.0 + um * um)) : 0.0;
          const double tp = kp ? (A - B) * (4.0 / (4.0 + up * up)) : 0.0;
          row += tm + tp;
          used += km + kp;
        }
      }
      acc += row;
    }
    return acc;
  };
  const double off = detail::chunked_sum(n, workers, body, &counts);
  std::int64_t used = 0;
  for (auto v : counts) used += v;
  const auto nn = static_cast<std::int64_t>(n);
  est.value = est.diagonal + off;
  est.pairs_used = used + (diag_in ? nn : 0);
  est.pairs_omitted = nn * nn - est.pairs_used;
  // Every omitted ordering has |γ − γ′ − h| > W, so its weight is below 4/(4+W²).
  est.truncation_bound = full ? 0.0 : static_cast<double>(est.pairs_omitted) * weight(W);
  return est;
}

/// Full ordered double sum over zeros ≤ T, diagonal included.
inline FhEstimate fh_exact(const ZeroTable& zeros, PairCorrRequest req, unsigned workers = default_workers()) {
  if (req.mode != Mode::exact) throw DomainError("fh_exact: request is not in exact mode");
  return fh_sweep(zeros, req, workers);
}

/// Pairs with |γ − γ′ − h| ≤ W only, with a certified bound on the rest.
inline FhEstimate fh_windowed(const ZeroTable& zeros, const PairCorrRequest& req, unsigned workers = default_workers()) {
  if (req.mode != Mode::windowed) throw DomainError("fh_windowed: request is not in windowed mode");
  if (!(req.W > std::abs(req.h) + 2.0)) throw DomainError("fh_windowed: window must exceed |h| + 2");
  return fh_sweep(zeros, req, workers);
}

inline FhEstimate fh(const ZeroTable& zeros, const PairCorrRequest& req, unsigned workers = default_workers()) {
  return req.mode == Mode::exact ? fh_exact(zeros, req, workers) : fh_windowed(zeros, req, workers);
}

/// (T/2π · log T)⁻¹ F_h(T^α, T), computed with log x = |α| log T. A finite
/// window selects the windowed sweep.
inline double form_factor(const ZeroTable& zeros, double alpha, double T, double h,
                          double window = std::numeric_limits<double>::infinity(),
                          unsigned workers = default_workers()) {
  if (zeros.empty() || zeros.count_up_to(T) == 0) throw DomainError("form_factor: no zeros up to T");
  const double lT = std::log(T);
  PairCorrRequest req{std::exp(std::abs(alpha) * lT), T, h, std::isfinite(window) ? Mode::windowed : Mode::exact, window};
  req.log_x = std::abs(alpha) * lT;
  const auto e = fh(zeros, req, workers);
  return e.value / (T / (2 * std::numbers::pi) * lT);
}

// ---------------------------------------------------------------------------

/// Ordered pairs γ ≠ γ′ ≤ T whose shifted difference, in units of 2π/log T,
/// falls in a band, normalized by (T/2π) log T. Without β the band is
/// |γ − γ′ − h| ≤ 2πα/log T; with β it is 2πα/log T ≤ γ − γ′ − h ≤ 2πβ/log T.
inline double band_pair_count(const ZeroTable& zeros, double T, double h, double alpha,
                              std::optional<double> beta = std::nullopt) {
  if (zeros.empty()) throw DomainError("band_pair_count: empty table");
  if (!(alpha > 0.0)) throw DomainError("band_pair_count: alpha must be positive");
  if (beta && !(*beta > alpha)) throw DomainError("band_pair_count: beta must exceed alpha");
  const double lT = std::log(T);
  const double unit = 2 * std::numbers::pi / lT;
  const std::size_t n = zeros.count_up_to(T);
  const auto first = zeros.ordinates().begin();
  const auto last = first + static_cast<std::ptrdiff_t>(n);
  std::int64_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double gi = zeros[i];
    // γ′ range for this γ.
    double lo, hi;
    if (beta) {
      lo = gi - h - *beta * unit;
      hi = gi - h - alpha * unit;
    } else {
      lo = gi - h - alpha * unit;
      hi = gi - h + alpha * unit;
    }
    const auto a = std::lower_bound(first, last, lo);
    const auto b = std::upper_bound(first, last, hi);
    count += b - a;
    if (gi >= lo && gi <= hi) --count;  // γ′ = γ
  }
  return static_cast<double>(count) / (T / (2 * std::numbers::pi) * lT);
}

// ---------------------------------------------------------------------------

/// An even test function r with its transform r̂(α) = ∫ r(u)e^{−2πiαu} du.
/// `support` bounds |u| where r may be nonzero (infinity if unbounded).
struct Kernel {
  std::function<double(double)> r;
  std::function<double(double)> r_hat;
  double support = std::numeric_limits<double>::infinity();
  std::string name;
};

/// r(u) = max(1 − |u|, 0), r̂(α) = (sin πα/πα)².
inline Kernel fejer_kernel() {
  return {[](double u) { return std::max(1.0 - std::abs(u), 0.0); }, [](double a) { return special::fejer(a); }, 1.0,
          "fejer"};
}

inline Kernel zero_kernel() {
  return {[](double) { return 0.0; }, [](double) { return 0.0; }, 0.0, "zero"};
}

/// Reject kernels that are not even on a sample grid.
inline void check_even(const Kernel& k) {
  const double span = std::isfinite(k.support) ? std::max(k.support, 1e-3) * 1.25 : 10.0;
  for (int i = 1; i <= 200; ++i) {
    const double u = span * i / 200.0;
    const double a = k.r(u), b = k.r(-u);
    if (std::abs(a - b) > 1e-12 * std::max({1.0, std::abs(a), std::abs(b)}))
      throw DomainError("convolved_statistic: kernel '" + k.name + "' is not even");
  }
}

/// (T/2π log T)⁻¹ Σ_{γ,γ′ ≤ T} r((γ−γ′−h) log T/2π) w(γ−γ′−h), diagonal included.
inline double convolved_statistic(const ZeroTable& zeros, double T, double h, const Kernel& k) {
  check_even(k);
  if (zeros.empty()) throw DomainError("convolved_statistic: empty table");
  const double lT = std::log(T);
  const double scale = lT / (2 * std::numbers::pi);
  const std::size_t n = zeros.count_up_to(T);
  const auto first = zeros.ordinates().begin();
  const auto last = first + static_cast<std::ptrdiff_t>(n);
  const double reach = std::isfinite(k.support) ? k.support / scale : std::numeric_limits<double>::infinity();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double gi = zeros[i];
    auto a = first, b = last;
    if (std::isfinite(reach)) {
      a = std::lower_bound(first, last, gi - h - reach);
      b = std::upper_bound(first, last, gi - h + reach);
    }
    double row = 0.0;
    for (auto it = a; it != b; ++it) {
      const double d = gi - *it - h;
      row += k.r(d * scale) * weight(d);
    }
    total += row;
  }
  return total / (T / (2 * std::numbers::pi) * lT);
}

}  // namespace paircorr::empirical
