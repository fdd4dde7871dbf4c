#pragma once

// Globally adaptive Gauss–Kronrod (21/10) quadrature with a subdivision
// budget and a mandatory error estimate.

#include <paircorr/error.hpp>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <span>
#include <string>
#include <vector>

namespace paircorr::quad {

struct Result {
  double value = 0.0;
  double error = 0.0;
  long evaluations = 0;
};

struct Options {
  double abs_tol = 1e-10;
  double rel_tol = 0.0;
  // Bisections allowed on top of the initial panels.
  long max_subdivisions = 4000;
};

namespace detail {

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel gk21(F& f, double a, double b) {
  using boost::math::quadrature::gauss;
  using boost::math::quadrature::gauss_kronrod;
  static const auto& kx = gauss_kronrod<double, 21>::abscissa();
  static const auto& kw = gauss_kronrod<double, 21>::weights();
  static const auto& gw = gauss<double, 10>::weights();

  const double c = 0.5 * (a + b);
  const double r = 0.5 * (b - a);
  // Kronrod node 0 is the centre; Gauss nodes sit at odd Kronrod indices.
  const double fc = f(c);
  double k = kw[0] * fc;
  double g = 0.0;
  for (std::size_t i = 1; i < kx.size(); ++i) {
    const double dx = r * kx[i];
    const double s = f(c - dx) + f(c + dx);
    k += kw[i] * s;
    if (i % 2 == 1) g += gw[i / 2] * s;
  }
  k *= r;
  g *= r;
  double err = std::abs(k - g);
  // Round-off floor: a panel can never be resolved below its magnitude's ulp.
  err = std::max(err, 2.0 * std::numeric_limits<double>::epsilon() * std::abs(k));
  return {a, b, k, err};
}

}  // namespace detail

/// Integrate f over [a, b]; `breakpoints` (inside (a, b), any order) seed
/// the initial panels so kinks and jumps of f fall on panel edges.
template <class F>
Result integrate(F&& f, double a, double b, const Options& opt = {},
                 std::span<const double> breakpoints = {}) {
  if (!(std::isfinite(a) && std::isfinite(b)))
    throw DomainError("quad::integrate: finite limits required");
  if (a == b) return {};
  const double sign = b < a ? -1.0 : 1.0;
  if (b < a) std::swap(a, b);

  std::vector<double> edges{a};
  for (double p : breakpoints)
    if (p > a && p < b) edges.push_back(p);
  edges.push_back(b);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  std::priority_queue<detail::Panel> heap;
  double total = 0.0, err = 0.0, mag = 0.0;
  long evals = 0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    auto p = detail::gk21(f, edges[i], edges[i + 1]);
    evals += 21;
    total += p.value;
    err += p.error;
    mag += std::abs(p.value);
    heap.push(p);
  }

  constexpr double eps = std::numeric_limits<double>::epsilon();
  auto target = [&] {
    return std::max({opt.abs_tol, opt.rel_tol * std::abs(total), 16.0 * eps * mag});
  };
  long splits = 0;
  while (err > target()) {
    if (splits >= opt.max_subdivisions)
      throw NumericalError("quad::integrate: tolerance " + std::to_string(target()) +
                           " not reached within subdivision budget (error estimate " +
                           std::to_string(err) + ")");
    auto worst = heap.top();
    heap.pop();
    const double m = 0.5 * (worst.a + worst.b);
    if (!(m > worst.a && m < worst.b)) {
      // Panel too narrow to split; its error is irreducible.
      throw NumericalError("quad::integrate: interval collapsed before tolerance was met");
    }
    auto l = detail::gk21(f, worst.a, m);
    auto r = detail::gk21(f, m, worst.b);
    evals += 42;
    total += l.value + r.value - worst.value;
    err += l.error + r.error - worst.error;
    mag += std::abs(l.value) + std::abs(r.value) - std::abs(worst.value);
    heap.push(l);
    heap.push(r);
    ++splits;
  }
  // Recompute the sums from the surviving panels to shed drift.
  total = 0.0;
  err = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  return {sign * total, err, evals};
}

/// Integrate over [a, inf). `tail_bound(X)` must bound |∫_X^∞ f| from above;
/// the upper limit is pushed out geometrically until the bound drops below
/// tol/2, and the remaining half of the tolerance goes to [a, X].
template <class F, class Tail>
Result integrate_to_infinity(F&& f, double a, Tail&& tail_bound, const Options& opt = {},
                             std::span<const double> breakpoints = {}) {
  double X = std::max(2.0 * std::abs(a), a + 1.0);
  const double budget = 0.5 * opt.abs_tol;
  int grow = 0;
  while (tail_bound(X) > budget) {
    X *= 2.0;
    if (++grow > 200) throw NumericalError("quad::integrate_to_infinity: tail envelope never drops below tolerance");
  }
  // Geometric panels keep algebraically decaying integrands resolved.
  std::vector<double> bp(breakpoints.begin(), breakpoints.end());
  for (double e = std::max(a, 1.0) * 2.0; e < X; e *= 2.0) bp.push_back(e);
  Options inner = opt;
  inner.abs_tol = budget;
  auto r = integrate(f, a, X, inner, bp);
  r.error += tail_bound(X);
  return r;
}

/// ∫_a^b f(u) du after the substitution u = e^v; integrands oscillating
/// like cos(h log u) become trigonometric in v.
template <class F>
Result integrate_log(F&& f, double a, double b, const Options& opt = {},
                     std::span<const double> breakpoints = {}) {
  if (!(a > 0.0 && b > 0.0)) throw DomainError("quad::integrate_log: limits must be positive");
  std::vector<double> vb;
  vb.reserve(breakpoints.size());
  for (double p : breakpoints)
    if (p > 0.0) vb.push_back(std::log(p));
  auto g = [&](double v) {
    const double u = std::exp(v);
    return f(u) * u;
  };
  return integrate(g, std::log(a), std::log(b), opt, vb);
}

}  // namespace paircorr::quad
