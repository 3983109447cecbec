#ifndef CONCENTRA_INEQUALITIES_HPP
#define CONCENTRA_INEQUALITIES_HPP

// Verifiers for the inequality suite around Brezis-Lieb type splittings:
//   (1+t)^p >= 1 + |t|^p + p|t|^{p-2}t + pt          (p >= 3)
//   int |u_k|^p >= int |u|^p + int |u_k - u|^p + o(1) (p >= 3, u_k weak and Delta -> u)
//   ||u_k|| >= ||u_k - u|| + delta(||u||)             (u_k Delta -> u, ||u_k|| <= 1)
//   ||u_k|| >= ||u|| + delta(||u_k - u||) + o(1)      (u_k weakly -> u)
//   ||u_k||^2 = ||u_k - u||^2 + ||u||^2 + o(1)        (p = 2)
// Integrals are exact on the piecewise-constant representation.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "concentra/convergence.hpp"
#include "concentra/corpus.hpp"
#include "concentra/modulus.hpp"

namespace concentra {

enum class Branch { Plus, Minus };

/// f+(t) = (1+t)^p - 1 - t^p - p t^{p-1} - p t         (t >= 0)
/// f-(t) = (1-t)^p - 1 - t^p + p t^{p-1} + p t         (t in [0, 1])
inline double elementary_f(double p, double t, Branch branch) {
  if (!(p > 1.0)) throw std::domain_error("elementary_f: p must exceed 1");
  if (branch == Branch::Plus) {
    if (!(t >= 0.0)) throw std::domain_error("elementary_f: t must be >= 0 for the plus branch");
    return std::pow(1.0 + t, p) - 1.0 - std::pow(t, p) - p * std::pow(t, p - 1.0) - p * t;
  }
  if (!(t >= 0.0 && t <= 1.0))
    throw std::domain_error("elementary_f: t must lie in [0, 1] for the minus branch");
  return std::pow(1.0 - t, p) - 1.0 - std::pow(t, p) + p * std::pow(t, p - 1.0) + p * t;
}

struct ScanResult {
  double min_value = 0.0;
  double argmin = 0.0;
  std::size_t points = 0;
};

/// Minimum of f on the grid {0, step, 2 step, ..., t_max}.
inline ScanResult elementary_scan(double p, Branch branch, double t_max, double step) {
  if (!(step > 0.0) || !(t_max >= 0.0)) throw std::invalid_argument("elementary_scan: bad grid");
  ScanResult r{std::numeric_limits<double>::infinity(), 0.0, 0};
  const auto n = static_cast<std::size_t>(std::floor(t_max / step + 1e-9));
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = std::min(t_max, static_cast<double>(i) * step);
    const double f = elementary_f(p, t, branch);
    if (f < r.min_value) {
      r.min_value = f;
      r.argmin = t;
    }
    ++r.points;
  }
  return r;
}

struct InequalityReport {
  double lhs = 0.0;     // at the last stored index
  double rhs = 0.0;
  double margin = 0.0;  // lhs - rhs at the last stored index
  double worst_margin = 0.0;  // min over the tail
  bool holds = false;
  std::vector<double> trend;  // margins over the tail
  std::vector<std::string> warnings;
};

struct InequalityOptions {
  double tol = 1e-6;
  std::optional<TestDictionary> dict;  // enables the weak / Delta hypothesis checks
  TrendOptions trend;
};

namespace detail {

inline void require_same_space(const Seq& seq, const Element& u, const char* who) {
  if (!(seq.space() == u.space())) throw std::invalid_argument(std::string(who) + ": space mismatch");
}

inline void require_normalized(const Seq& seq, const char* who) {
  if (tail_sup_norm(seq) > 1.0 + 1e-12)
    throw std::invalid_argument(std::string(who) + ": unnormalized input, need ||u_k|| <= 1 on the tail");
}

template <class F>
InequalityReport tail_report(const Seq& seq, double tol, F&& terms) {
  InequalityReport r;
  r.worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t k = seq.tail_start(); k < seq.size(); ++k) {
    const auto [lhs, rhs] = terms(seq[k]);
    r.trend.push_back(lhs - rhs);
    r.lhs = lhs;
    r.rhs = rhs;
    r.worst_margin = std::min(r.worst_margin, lhs - rhs);
  }
  r.margin = r.lhs - r.rhs;
  r.holds = r.worst_margin >= -tol;
  return r;
}

inline void check_hypotheses(const Seq& seq, const Element& u, const InequalityOptions& opt,
                             bool weak, bool delta, InequalityReport& r) {
  if (!opt.dict) {
    r.warnings.push_back("hypotheses not checked: no test dictionary given");
    return;
  }
  if (weak) {
    const auto w = weak_limit_estimate(seq, *opt.dict, opt.trend);
    if (distance(w.limit, restrict_to(u, opt.dict->window())) > 1e-3 * std::max(1.0, norm(u)))
      r.warnings.push_back("u is not the weak-limit estimate of the sequence");
  }
  if (delta && !delta_limit_dual(seq, u, *opt.dict, opt.trend).delta_convergent)
    r.warnings.push_back("u is not certified as Delta-limit of the sequence");
}

inline double pth_power_integral(const Element& x) { return std::pow(norm(x), x.space().p()); }

}  // namespace detail

/// Margins int|u_k|^p - int|u|^p - int|u_k - u|^p over the tail.
inline InequalityReport bl_lower_bound(const Seq& seq, const Element& u,
                                       const InequalityOptions& opt = {}) {
  detail::require_same_space(seq, u, "bl_lower_bound");
  const double up = detail::pth_power_integral(u);
  auto r = detail::tail_report(seq, opt.tol, [&](const Element& x) {
    return std::pair{detail::pth_power_integral(x), up + detail::pth_power_integral(x - u)};
  });
  if (seq.space().p() < 3.0) r.warnings.push_back("p < 3: the lower bound is not guaranteed");
  detail::check_hypotheses(seq, u, opt, true, true, r);
  return r;
}

/// Margins ||u_k|| - ||u_k - u|| - delta(||u||) over the tail.
inline InequalityReport delta_energy_bound(const Seq& seq, const Element& u,
                                           const InequalityOptions& opt = {}) {
  detail::require_same_space(seq, u, "delta_energy_bound");
  detail::require_normalized(seq, "delta_energy_bound");
  const double nu = norm(u);
  if (!(nu < 2.0)) throw std::invalid_argument("delta_energy_bound: ||u|| must be < 2");
  const double d = modulus_of_convexity(seq.space(), nu);
  auto r = detail::tail_report(seq, opt.tol, [&](const Element& x) {
    return std::pair{norm(x), distance(x, u) + d};
  });
  detail::check_hypotheses(seq, u, opt, false, true, r);
  return r;
}

/// Margins ||u_k|| - ||u|| - delta(||u_k - u||) over the tail.
inline InequalityReport weak_lsc_bound(const Seq& seq, const Element& u,
                                       const InequalityOptions& opt = {}) {
  detail::require_same_space(seq, u, "weak_lsc_bound");
  detail::require_normalized(seq, "weak_lsc_bound");
  const double nu = norm(u);
  auto r = detail::tail_report(seq, opt.tol, [&](const Element& x) {
    return std::pair{norm(x),
                     nu + modulus_of_convexity(seq.space(), std::min(2.0, distance(x, u)))};
  });
  detail::check_hypotheses(seq, u, opt, true, false, r);
  return r;
}

/// ||u_k||^2 against ||u_k - u||^2 + ||u||^2 (p = 2); holds when the
/// two-sided defect decays on the tail.
inline InequalityReport hilbert_identity(const Seq& seq, const Element& u,
                                         const InequalityOptions& opt = {}) {
  detail::require_same_space(seq, u, "hilbert_identity");
  if (seq.space().p() != 2.0) throw std::invalid_argument("hilbert_identity: requires p = 2");
  const double uu = norm(u) * norm(u);
  auto r = detail::tail_report(seq, opt.tol, [&](const Element& x) {
    const double d = distance(x, u);
    return std::pair{norm(x) * norm(x), d * d + uu};
  });
  r.holds = detail::tail_decays(r.trend, opt.tol, opt.trend.decay_ratio);
  detail::check_hypotheses(seq, u, opt, true, false, r);
  return r;
}

// ---------------------------------------------------------------------------
// non-additivity of Delta-limits

/// Pointwise signed power sign(x)|x|^q.
inline Element signed_power(const Element& x, double q) {
  Element out = x;
  for (double& c : out.coeffs()) c = detail::sign(c) * detail::abs_pow(c, q);
  return out;
}

struct NonAdditivityReport {
  std::vector<double> scales;
  std::vector<double> mean_x3;    // (1/9) int x_n^3
  std::vector<double> mean_y3;
  std::vector<double> mean_sum3;  // (1/9) int (x_n + y_n)^3
  std::vector<double> cell_x3;    // max over dictionary cells of |avg x_n^3|
  std::vector<double> cell_y3;
  double limit_constant = 0.0;    // exact mean of (x0 + y0)^3 over one period
  std::string derivation;
  bool x3_null = false;
  bool y3_null = false;
  bool sum_nonzero = false;
};

/// x_n^3 and y_n^3 tend weakly to 0 while (x_n + y_n)^3 tends to a nonzero
/// constant, so x_n, y_n Delta -> 0 but x_n + y_n does not.
inline NonAdditivityReport nonadditivity_demo(const std::vector<double>& scales = {8, 16, 32, 64},
                                              int dict_depth = 3) {
  if (scales.empty()) throw std::invalid_argument("nonadditivity_demo: no scales");
  const double top = *std::max_element(scales.begin(), scales.end());
  const Space s = detail::nonadditive_space(4.0, top);
  const auto dict = TestDictionary::dyadic(s, dict_depth);
  NonAdditivityReport r;
  r.scales = scales;
  auto max_cell = [&](const Element& f) {
    double m = 0.0;
    for (const auto& c : dict.cells()) m = std::max(m, std::fabs(TestDictionary::average(f, c)));
    return m;
  };
  for (double n : scales) {
    const Element x = detail::nonadditive_x(s, n);
    const Element y = detail::nonadditive_y(s, n);
    const Element x3 = signed_power(x, 3.0);
    const Element y3 = signed_power(y, 3.0);
    const Element s3 = signed_power(x + y, 3.0);
    r.mean_x3.push_back(x3.integral(s.window()) / 9.0);
    r.mean_y3.push_back(y3.integral(s.window()) / 9.0);
    r.mean_sum3.push_back(s3.integral(s.window()) / 9.0);
    r.cell_x3.push_back(max_cell(x3));
    r.cell_y3.push_back(max_cell(y3));
  }
  // one period: (0,1]: 2 - 1 = 1; (1,4.5]: -1 - 1 = -2; (4.5,9]: -1 + 1 = 0
  r.limit_constant = (1.0 * 1.0 + std::pow(-2.0, 3) * 3.5 + 0.0 * 4.5) / 9.0;
  r.derivation =
      "(x0+y0) = 1 on (0,1], -2 on (1,4.5], 0 on (4.5,9]; "
      "mean of the cube = (1 - 8*3.5 + 0)/9 = -3";
  const TrendOptions t;
  r.x3_null = detail::tail_decays(r.cell_x3, 1e-12, t.decay_ratio);
  r.y3_null = detail::tail_decays(r.cell_y3, 1e-12, t.decay_ratio);
  r.sum_nonzero = std::fabs(r.mean_sum3.back()) > 0.1;
  return r;
}

}  // namespace concentra

#endif  // CONCENTRA_INEQUALITIES_HPP
