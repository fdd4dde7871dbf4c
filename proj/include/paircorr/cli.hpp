#pragma once

// Command implementations behind tools/paircorr. Argument parsing lives in
// the tool; everything here takes a RunConfig and writes to streams so the
// commands can be driven from tests.

#include <paircorr/empirical.hpp>
#include <paircorr/error.hpp>
#include <paircorr/oracle.hpp>
#include <paircorr/theory.hpp>
#include <paircorr/zero_source.hpp>

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace paircorr::cli {

using nlohmann::json;

enum class Command { zeros, fh, spacing, verify };
enum class Format { csv, json };

inline constexpr int exit_ok = 0;
inline constexpr int exit_failed = 1;   // failed check, validation, bad input
inline constexpr int exit_no_data = 2;  // missing or unreadable zero file

inline constexpr const char* fh_schema = "# paircorr fh csv v1";
inline constexpr const char* spacing_schema = "# paircorr spacing csv v1";
inline constexpr const char* verify_schema = "# paircorr verify csv v1";

struct RunConfig {
  Command command = Command::fh;
  std::string zeros_path;         // --zeros
  std::size_t compute_n = 0;      // --compute
  std::string cache_path;         // reuse computed zeros across runs
  std::optional<double> x;        // --x
  std::optional<double> alpha;    // --alpha, x = T^alpha
  std::string T = "max";          // real or "max"
  std::vector<double> h_list;
  std::optional<double> window;
  std::string theorem = "auto";   // auto | T1 | T2 | T3 | T4
  arith::i64 k_cap = 100000;
  double y_cap = 0.0;             // 0: theory default
  double tol_scale = 1.0;
  std::uint64_t seed = oracle::CheckOptions{}.seed;
  std::vector<std::string> checks;
  double bin_width = 0.1;         // spacing bins, in mean-spacing units
  int bins = 30;
  std::string out;
  Format format = Format::csv;

  /// Throws DomainError describing the first violated invariant.
  void validate() const {
    const bool has_file = !zeros_path.empty(), has_compute = compute_n > 0;
    if (has_file && has_compute) throw DomainError("give either --zeros or --compute, not both");
    if (command == Command::zeros && !has_file && !has_compute) throw DomainError("zeros: need --zeros or --compute");
    if (command == Command::fh || command == Command::spacing) {
      if (!has_file && !has_compute) throw DomainError("need --zeros or --compute");
      if (h_list.empty()) throw DomainError("--h must list at least one shift");
    }
    if (command == Command::fh) {
      if (x.has_value() == alpha.has_value()) throw DomainError("fh: give exactly one of --x and --alpha");
      if (theorem != "auto" && theorem != "T1" && theorem != "T2" && theorem != "T3" && theorem != "T4")
        throw DomainError("unknown theorem '" + theorem + "'");
    }
    if (command == Command::spacing && (!(bin_width > 0.0) || bins < 1))
      throw DomainError("spacing: need a positive bin width and bin count");
    if (!(tol_scale >= 0.0)) throw DomainError("tolerance scale must be >= 0");
  }
};

namespace detail {

inline std::string num(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline ZeroTable load_source(const RunConfig& cfg) {
  if (!cfg.zeros_path.empty()) return load_zeros(cfg.zeros_path);
  if (!cfg.cache_path.empty()) return cached_zeros(cfg.compute_n, cfg.cache_path);
  return compute_zeros(cfg.compute_n);
}

inline double resolve_T(const RunConfig& cfg, const ZeroTable& z) {
  if (cfg.T == "max") return z.t_max();
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(cfg.T, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != cfg.T.size()) throw DomainError("--T must be a number or 'max', got '" + cfg.T + "'");
  return v;
}

// Output goes to --out when set, else to the provided stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw DataError("cannot write " + path);
      os_ = &file_;
    }
  }
  std::ostream& operator*() { return *os_; }

 private:
  std::ofstream file_;
  std::ostream* os_;
};

}  // namespace detail

/// Prediction whose x-range contains x: T1 for x ≤ T/log T, T3 for x ≤ T,
/// T4 for x ≤ T², none beyond.
inline std::optional<theory::TheoremId> select_theorem(double x, double T) {
  using theory::TheoremId;
  if (x <= T / std::log(T)) return TheoremId::T1;
  if (x <= T) return TheoremId::T3;
  if (x <= T * T) return TheoremId::T4;
  return std::nullopt;
}

inline theory::TheoryBreakdown predict(theory::TheoremId id, double x, double T, double h, const RunConfig& cfg) {
  using theory::TheoremId;
  switch (id) {
    case TheoremId::T1: return theory::thm1_prediction(x, T, h);
    case TheoremId::T3: return theory::thm3_prediction(x, T, h);
    case TheoremId::T4: return theory::thm4_prediction(x, T, h);
    case TheoremId::T2: {
      theory::Thm2Options o;
      o.k_cap = cfg.k_cap;
      o.y_cap = cfg.y_cap;
      return theory::thm2_prediction(x, T, h, o);
    }
    default: throw DomainError("no F_h prediction for " + theory::to_string(id));
  }
}

inline int cmd_zeros(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  cfg.validate();
  const ZeroTable z = detail::load_source(cfg);
  const auto rep = validate_count(z);
  if (!cfg.out.empty()) export_zeros(z, cfg.out);
  json j = rep.to_json();
  j["first"] = z.empty() ? json(nullptr) : json(z[0]);
  j["last"] = z.empty() ? json(nullptr) : json(z.ordinates().back());
  out << j.dump(2) << '\n';
  if (!rep.ok) err << "zero count deviates from the smooth count by " << rep.deviation << '\n';
  return rep.ok ? exit_ok : exit_failed;
}

struct FhRow {
  double h;
  double x;
  double T;
  empirical::PairCorrRequest request;
  empirical::FhEstimate estimate;
  std::optional<theory::TheoryBreakdown> theory;
  double rel_dev = NAN;
  std::vector<std::string> warnings;
};

inline std::vector<FhRow> compute_fh_rows(const RunConfig& cfg, const ZeroTable& z) {
  const double T = detail::resolve_T(cfg, z);
  if (!(T > 1.0)) throw DomainError("fh: T must exceed 1");
  const double x = cfg.x ? *cfg.x : std::pow(T, *cfg.alpha);
  std::vector<FhRow> rows;
  for (double h : cfg.h_list) {
    FhRow r{h, x, T, {}, {}, std::nullopt, NAN, {}};
    r.request = cfg.window ? empirical::PairCorrRequest::windowed(x, T, h, *cfg.window)
                           : empirical::PairCorrRequest::exact(x, T, h);
    if (cfg.alpha) r.request.log_x = *cfg.alpha * std::log(T);
    r.estimate = empirical::fh(z, r.request);

    std::optional<theory::TheoremId> id;
    const auto in_range = select_theorem(x, T);
    if (cfg.theorem == "auto") {
      id = in_range;
      if (!id) r.warnings.push_back("x is beyond T^2; no theorem covers it");
    } else {
      for (auto t : {theory::TheoremId::T1, theory::TheoremId::T2, theory::TheoremId::T3, theory::TheoremId::T4})
        if (theory::to_string(t) == cfg.theorem) id = t;
      const bool ok = in_range && (*in_range == *id || (*id == theory::TheoremId::T2 && *in_range == theory::TheoremId::T4));
      if (!ok) r.warnings.push_back(cfg.theorem + " requested outside its x-range");
    }
    if (id) {
      r.theory = predict(*id, x, T, h, cfg);
      for (const auto& w : r.theory->warnings) r.warnings.push_back(w);
      r.rel_dev = std::abs(r.estimate.value - r.theory->total) / std::abs(r.theory->total);
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

inline int cmd_fh(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  cfg.validate();
  const ZeroTable z = detail::load_source(cfg);
  const auto rows = compute_fh_rows(cfg, z);
  detail::Sink sink(cfg.out, out);
  for (const auto& r : rows)
    for (const auto& w : r.warnings) err << "warning (h=" << r.h << "): " << w << '\n';
  if (cfg.format == Format::json) {
    json arr = json::array();
    for (const auto& r : rows) {
      json j{{"h", r.h}, {"x", r.x}, {"T", r.T}, {"empirical", empirical::to_json(r.request, r.estimate)}};
      j["theory"] = r.theory ? r.theory->to_json() : json(nullptr);
      j["rel_dev"] = std::isnan(r.rel_dev) ? json(nullptr) : json(r.rel_dev);
      j["warnings"] = r.warnings;
      arr.push_back(std::move(j));
    }
    *sink << arr.dump(2) << '\n';
    return exit_ok;
  }
  *sink << fh_schema << '\n'
        << "h,x,T,empirical_value,pairs_used,truncation_bound,theorem_id,prediction,rel_dev,error_envelope\n";
  for (const auto& r : rows) {
    using detail::num;
    *sink << num(r.h) << ',' << num(r.x) << ',' << num(r.T) << ',' << num(r.estimate.value) << ','
          << r.estimate.pairs_used << ',' << num(r.estimate.truncation_bound) << ','
          << (r.theory ? theory::to_string(r.theory->theorem_id) : "") << ','
          << (r.theory ? num(r.theory->total) : "") << ',' << num(r.rel_dev) << ','
          << (r.theory ? num(r.theory->error_envelope) : "") << '\n';
  }
  return exit_ok;
}

/// Annulus bins a ≤ |u − c| ≤ b in mean-spacing units u around the shift c.
/// The symmetric-band model (conj2) gives each bin as a difference of band
/// masses; for h = 0 the one-sided model (conj3), doubled, is added.
inline int cmd_spacing(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  cfg.validate();
  const ZeroTable z = detail::load_source(cfg);
  const double T = detail::resolve_T(cfg, z);
  if (T > z.t_max()) throw DomainError("spacing: T exceeds table coverage");
  detail::Sink sink(cfg.out, out);
  struct Row {
    double h, lo, hi, empirical, conj2, conj3;
  };
  std::vector<Row> rows;
  bool warned = false;
  for (double h : cfg.h_list) {
    auto band = [&](double a) { return a == 0.0 ? 0.0 : empirical::band_pair_count(z, T, h, a); };
    auto c2 = [&](double a) { return a == 0.0 ? 0.0 : theory::conj2_density(a, T, h); };
    for (int k = 0; k < cfg.bins; ++k) {
      const double lo = k * cfg.bin_width, hi = (k + 1) * cfg.bin_width;
      Row r{h, lo, hi, band(hi) - band(lo), c2(hi) - c2(lo), NAN};
      if (h == 0.0 && hi <= std::log(T)) {
        std::string w;
        // The integrand vanishes like u² at 0, so a tiny lower edge is exact to rounding.
        r.conj3 = 2 * theory::conj3_density(std::max(lo, 1e-12), hi, T, &w);
        if (!w.empty() && !warned) {
          err << "warning: " << w << '\n';
          warned = true;
        }
      }
      rows.push_back(r);
    }
  }
  if (cfg.format == Format::json) {
    json arr = json::array();
    for (const auto& r : rows)
      arr.push_back({{"h", r.h},
                     {"alpha_lo", r.lo},
                     {"alpha_hi", r.hi},
                     {"empirical", r.empirical},
                     {"conj2", r.conj2},
                     {"conj3", std::isnan(r.conj3) ? json(nullptr) : json(r.conj3)}});
    *sink << json{{"T", T}, {"bins", arr}}.dump(2) << '\n';
    return exit_ok;
  }
  using detail::num;
  *sink << spacing_schema << '\n' << "h,T,alpha_lo,alpha_hi,empirical,conj2,conj3\n";
  for (const auto& r : rows)
    *sink << num(r.h) << ',' << num(T) << ',' << num(r.lo) << ',' << num(r.hi) << ',' << num(r.empirical) << ','
          << num(r.conj2) << ',' << num(r.conj3) << '\n';
  return exit_ok;
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  cfg.validate();
  const std::vector<std::string> ids = cfg.checks.empty() ? oracle::check_ids() : cfg.checks;
  for (const auto& id : ids)
    if (std::find(oracle::check_ids().begin(), oracle::check_ids().end(), id) == oracle::check_ids().end())
      throw DomainError("unknown check id '" + id + "'");
  std::optional<ZeroTable> z;
  if (std::find(ids.begin(), ids.end(), "windowed_vs_exact") != ids.end()) {
    if (!cfg.zeros_path.empty() || cfg.compute_n > 0)
      z = detail::load_source(cfg);
    else
      z = compute_zeros(2000);
  }
  oracle::CheckOptions o;
  o.seed = cfg.seed;
  o.tol_scale = cfg.tol_scale;
  const auto reports = oracle::run_checks(ids, z ? &*z : nullptr, o);
  bool all = true;
  for (const auto& r : reports) {
    all = all && r.passed;
    if (!r.passed) err << "check failed: " << r.check_id << '\n';
  }
  detail::Sink sink(cfg.out, out);
  if (cfg.format == Format::json) {
    json arr = json::array();
    for (const auto& r : reports) arr.push_back(r.to_json());
    *sink << json{{"passed", all}, {"reports", arr}}.dump(2) << '\n';
  } else {
    *sink << verify_schema << '\n' << "check_id,passed,points,worst_diff_over_tolerance\n";
    for (const auto& r : reports) {
      double worst = 0.0;
      for (const auto& p : r.points) worst = std::max(worst, p.tolerance > 0 ? p.diff / p.tolerance : INFINITY);
      *sink << r.check_id << ',' << (r.passed ? "true" : "false") << ',' << r.points.size() << ','
            << detail::num(worst) << '\n';
    }
  }
  return all ? exit_ok : exit_failed;
}

/// Dispatch with the exit-code policy: data errors → 2, other errors → 1.
inline int run(const RunConfig& cfg, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  try {
    switch (cfg.command) {
      case Command::zeros: return cmd_zeros(cfg, out, err);
      case Command::fh: return cmd_fh(cfg, out, err);
      case Command::spacing: return cmd_spacing(cfg, out, err);
      case Command::verify: return cmd_verify(cfg, out, err);
    }
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return exit_no_data;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_failed;
  }
  return exit_failed;
}

}  // namespace paircorr::cli
