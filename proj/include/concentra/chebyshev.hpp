#ifndef CONCENTRA_CHEBYSHEV_HPP
#define CONCENTRA_CHEBYSHEV_HPP

// Chebyshev center of a finite set in l^p / L^p:
//   argmin_y max_i ||x_i - y||.
//
// Solved through the dual  max_{lambda in simplex} min_y sum_i lambda_i ||x_i - y||^p.
// For fixed lambda the inner problem splits into independent 1-D convex
// problems per cell, and the dual gradient is the vector of distances^p, so
// projected gradient ascent gives a certified duality gap at every step.

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "concentra/space.hpp"

namespace concentra {

struct ChebyshevOptions {
  int max_iterations = 20000;
  double gap_tol = 1e-13;     // relative duality gap that counts as converged
  double accept_gap = 1e-6;   // relative gap still returned when iterations run out
};

struct ChebyshevResult {
  Element center;
  double radius = 0.0;
  int iterations = 0;
  double relative_gap = 0.0;
};

/// Raised when the solver stops with a duality gap above accept_gap; the
/// best iterate found is attached.
class ChebyshevNonConvergence : public std::runtime_error {
 public:
  ChebyshevNonConvergence(ChebyshevResult best, const std::string& what)
      : std::runtime_error(what), best_(std::move(best)) {}
  const ChebyshevResult& best() const { return best_; }

 private:
  ChebyshevResult best_;
};

namespace detail {

/// The points as distinct value columns: cells on which every point takes
/// the same tuple of values share one column (weighted by total measure).
struct ColumnModel {
  std::size_t points = 0;
  int level = 0;
  std::vector<std::vector<double>> columns;
  std::vector<double> weight;
  std::vector<bool> constant;
  std::vector<std::size_t> cell_column;

  explicit ColumnModel(const std::vector<Element>& xs) : points(xs.size()) {
    const Space& s = xs.front().space();
    for (const auto& x : xs) {
      if (!x.space().same_geometry(s) || x.space().p() != s.p())
        throw std::invalid_argument("chebyshev_center: points in different spaces");
      level = std::max(level, x.level());
    }
    const std::size_t n = s.cells(level);
    std::vector<std::size_t> factor(points);
    for (std::size_t i = 0; i < points; ++i)
      factor[i] = std::size_t{1} << (level - xs[i].level());
    const double mu = s.cell_measure(level);
    std::map<std::vector<double>, std::size_t> index;
    cell_column.resize(n);
    std::vector<double> key(points);
    for (std::size_t c = 0; c < n; ++c) {
      for (std::size_t i = 0; i < points; ++i) key[i] = xs[i].coeffs()[c / factor[i]];
      auto [it, fresh] = index.try_emplace(key, columns.size());
      if (fresh) {
        columns.push_back(key);
        weight.push_back(0.0);
        const auto [lo, hi] = std::minmax_element(key.begin(), key.end());
        constant.push_back(*lo == *hi);
      }
      weight[it->second] += mu;
      cell_column[c] = it->second;
    }
  }
};

/// argmin_t sum_i lambda_i |v_i - t|^p: Newton on the monotone derivative,
/// safeguarded by bisection. `active` lists the indices with lambda_i > 0.
inline double weighted_lp_point(const std::vector<double>& v, const std::vector<double>& lambda,
                                const std::vector<std::size_t>& active, double p) {
  if (active.empty()) return 0.0;
  double lo = v[active.front()];
  double hi = lo;
  for (auto i : active) {
    lo = std::min(lo, v[i]);
    hi = std::max(hi, v[i]);
  }
  if (lo == hi) return lo;
  auto eval = [&](double t, double& curv) {
    double acc = 0.0;
    curv = 0.0;
    for (auto i : active) {
      const double d = t - v[i];
      const double a = std::fabs(d);
      if (a == 0.0) continue;
      const double q = std::pow(a, p - 2.0);
      acc += lambda[i] * d * q;
      curv += lambda[i] * q;
    }
    curv *= p - 1.0;
    return acc;
  };
  double t = 0.0;
  for (auto i : active) t += lambda[i] * v[i];
  t = std::clamp(t, lo, hi);
  const double resolution = 1e-15 * std::max({1.0, std::fabs(lo), std::fabs(hi)});
  for (int it = 0; it < 200 && hi - lo > resolution; ++it) {
    double curv = 0.0;
    const double g = eval(t, curv);
    if (g == 0.0) return t;
    (g < 0.0 ? lo : hi) = t;
    double next = curv > 0.0 ? t - g / curv : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::fabs(next - t) <= resolution) return next;
    t = next;
  }
  return t;
}

/// Same, with every index where lambda_i > 0 active.
inline double weighted_lp_point(const std::vector<double>& v, const std::vector<double>& lambda,
                                double p) {
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < lambda.size(); ++i)
    if (lambda[i] > 0.0) active.push_back(i);
  return weighted_lp_point(v, lambda, active, p);
}

/// Euclidean projection onto the probability simplex.
inline std::vector<double> project_simplex(std::vector<double> v) {
  std::vector<double> u = v;
  std::sort(u.begin(), u.end(), std::greater<>());
  double cum = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cum += u[j];
    const double t = (cum - 1.0) / static_cast<double>(j + 1);
    if (u[j] - t > 0.0) theta = t;
  }
  for (double& x : v) x = std::max(0.0, x - theta);
  return v;
}

struct DualState {
  std::vector<double> lambda;
  std::vector<double> t;     // inner minimizer per column
  std::vector<double> dist;  // ||x_i - y||^p
  double value = 0.0;        // g(lambda)
  double max_dist = 0.0;
};

inline DualState evaluate_dual(const ColumnModel& m, std::vector<double> lambda, double p) {
  DualState s;
  s.lambda = std::move(lambda);
  s.t.resize(m.columns.size());
  s.dist.assign(m.points, 0.0);
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < m.points; ++i)
    if (s.lambda[i] > 0.0) active.push_back(i);
  for (std::size_t j = 0; j < m.columns.size(); ++j) {
    const auto& col = m.columns[j];
    if (m.constant[j]) {
      s.t[j] = col.front();
      continue;
    }
    s.t[j] = weighted_lp_point(col, s.lambda, active, p);
    for (std::size_t i = 0; i < m.points; ++i)
      s.dist[i] += m.weight[j] * abs_pow(col[i] - s.t[j], p);
  }
  s.value = std::inner_product(s.lambda.begin(), s.lambda.end(), s.dist.begin(), 0.0);
  s.max_dist = *std::max_element(s.dist.begin(), s.dist.end());
  return s;
}

inline Element assemble(const ColumnModel& m, const Space& space, const std::vector<double>& t) {
  std::vector<double> c(m.cell_column.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = t[m.cell_column[i]];
  Element y(space, m.level, std::move(c));
  y.coarsen();
  return y;
}

}  // namespace detail

/// Chebyshev center and radius of a nonempty finite set.
inline ChebyshevResult chebyshev_center(const std::vector<Element>& points,
                                        const ChebyshevOptions& opt = {}) {
  if (points.empty()) throw std::invalid_argument("chebyshev_center: empty set");
  const Space& space = points.front().space();
  const double p = space.p();
  const detail::ColumnModel model(points);
  const std::size_t n = points.size();

  auto finish = [&](const detail::DualState& s, int iterations) {
    ChebyshevResult r{detail::assemble(model, space, s.t), std::pow(s.max_dist, 1.0 / p),
                      iterations, 0.0};
    r.relative_gap = s.max_dist > 0.0 ? (s.max_dist - s.value) / s.max_dist : 0.0;
    return r;
  };

  // Distances^p below this are roundoff: the points coincide.
  double scale = 0.0;
  for (const auto& x : points) scale = std::max(scale, norm(x));
  const double floor = std::pow(1e-12 * scale, p);

  detail::DualState cur =
      detail::evaluate_dual(model, std::vector<double>(n, 1.0 / static_cast<double>(n)), p);
  if (cur.max_dist <= floor) {
    ChebyshevResult r = finish(cur, 0);
    r.relative_gap = 0.0;
    return r;
  }
  detail::DualState best_primal = cur;

  // Projected gradient ascent with Armijo backtracking, in units of the
  // initial objective so the step is scale free.
  const double unit = cur.max_dist;
  double step = 1.0;
  int it = 0;
  bool stalled = false;
  for (; it < opt.max_iterations && !stalled; ++it) {
    const double gap = cur.max_dist - cur.value;
    if (gap <= std::max(opt.gap_tol * cur.max_dist, floor)) break;
    for (;;) {
      std::vector<double> trial(n);
      for (std::size_t i = 0; i < n; ++i) trial[i] = cur.lambda[i] + step * cur.dist[i] / unit;
      trial = detail::project_simplex(std::move(trial));
      double lin = 0.0;
      double sq = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double d = trial[i] - cur.lambda[i];
        lin += cur.dist[i] / unit * d;
        sq += d * d;
      }
      if (sq == 0.0) {
        stalled = true;  // lambda is a fixed point of the projected step
        break;
      }
      detail::DualState next = detail::evaluate_dual(model, std::move(trial), p);
      if (next.max_dist < best_primal.max_dist) best_primal = next;
      if (next.value / unit >= cur.value / unit + lin - sq / (2.0 * step)) {
        cur = std::move(next);
        step *= 1.5;
        break;
      }
      step *= 0.5;
      if (step < 1e-20) {
        stalled = true;
        break;
      }
    }
  }
  if (cur.max_dist < best_primal.max_dist) best_primal = cur;

  // Weak duality: g(lambda) <= optimal value <= max_dist of any primal iterate.
  ChebyshevResult r = finish(best_primal, it);
  const double final_gap = best_primal.max_dist - cur.value;
  r.relative_gap = final_gap <= floor ? 0.0 : final_gap / best_primal.max_dist;
  if (r.relative_gap > opt.accept_gap)
    throw ChebyshevNonConvergence(r, "chebyshev_center: no convergence, relative gap " +
                                         std::to_string(r.relative_gap));
  return r;
}

}  // namespace concentra

#endif  // CONCENTRA_CHEBYSHEV_HPP
