#ifndef CONCENTRA_CONVERGENCE_HPP
#define CONCENTRA_CONVERGENCE_HPP

// Weak limits, asymptotic centers, Delta-limits and the Opial gap on
// finite sequences. Limits are tail trends: liminf/limsup become tail
// min/max over indices >= tail_start.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "concentra/chebyshev.hpp"
#include "concentra/sequence.hpp"
#include "concentra/space.hpp"

namespace concentra {

struct TrendOptions {
  double decay_threshold = 1e-3;  // a tail series below this has decayed
  double decay_ratio = 0.2;       // last-quarter max / first-quarter max
  double norm_tol = 1e-3;         // ||x_k - x|| below this on the last quarter => x_k -> x
};

// ---------------------------------------------------------------------------
// weak limits

struct WeakLimitReport {
  Element limit;
  std::vector<double> residual;  // per tail index: max_c |avg_c(x_k) - avg_c(limit)|
  bool residual_decays = false;
};

/// Tail-mean of local averages on the finest dictionary cells; zero outside
/// the dictionary window.
inline WeakLimitReport weak_limit_estimate(const Seq& seq, const TestDictionary& dict,
                                           const TrendOptions& opt = {}) {
  const Space& space = seq.space();
  if (!dict.space().same_geometry(space))
    throw std::invalid_argument("weak_limit_estimate: dictionary lives on another space");
  const auto finest = dict.finest_cells();
  std::vector<double> mean(finest.size(), 0.0);
  for (std::size_t k = seq.tail_start(); k < seq.size(); ++k)
    for (std::size_t c = 0; c < finest.size(); ++c)
      mean[c] += TestDictionary::average(seq[k], finest[c]);
  const auto n = static_cast<double>(seq.tail_length());

  Element limit(space);
  for (std::size_t c = 0; c < finest.size(); ++c)
    if (mean[c] != 0.0) limit += Element::indicator(space, finest[c], mean[c] / n);
  limit.coarsen();

  WeakLimitReport r{limit, {}, false};
  for (std::size_t k = seq.tail_start(); k < seq.size(); ++k) {
    double worst = 0.0;
    for (const auto& c : dict.cells())
      worst = std::max(worst, std::fabs(TestDictionary::average(seq[k], c) -
                                        TestDictionary::average(limit, c)));
    r.residual.push_back(worst);
  }
  r.residual_decays = detail::tail_decays(r.residual, opt.decay_threshold, opt.decay_ratio);
  return r;
}

// ---------------------------------------------------------------------------
// asymptotic centers

struct AsymptoticCenterOptions {
  std::optional<Interval> window;  // observe the tail through this window only
  double stab_tol = 1e-3;          // relative to max(1, tail sup norm)
  ChebyshevOptions solver;
};

struct AsymptoticCenterResult {
  Element center;
  double radius = 0.0;     // limsup surrogate of ||x_k - center||
  double movement = 0.0;   // ||y_late - y_full|| between the two tail centers
};

class InsufficientTail : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::vector<Element> observed(const std::vector<Element>& xs,
                                     const std::optional<Interval>& window) {
  if (!window) return xs;
  std::vector<Element> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(restrict_to(x, *window));
  return out;
}

}  // namespace detail

/// Center of the whole stored tail A_N and of its second half A_N'
/// (N' > N). The limit is accepted once the two agree within stab_tol;
/// the later center is returned.
inline AsymptoticCenterResult asymptotic_center(const Seq& seq,
                                                const AsymptoticCenterOptions& opt = {}) {
  if (seq.tail_length() < 4)
    throw std::invalid_argument("asymptotic_center: tail length must be at least 4");
  const auto tail = detail::observed(seq.tail(), opt.window);
  const std::vector<Element> late(tail.begin() + static_cast<std::ptrdiff_t>(tail.size() / 2),
                                  tail.end());
  const auto full = chebyshev_center(tail, opt.solver);
  const auto half = chebyshev_center(late, opt.solver);
  double scale = 1.0;
  for (const auto& x : tail) scale = std::max(scale, norm(x));
  const double movement = distance(full.center, half.center);
  if (movement > opt.stab_tol * scale)
    throw InsufficientTail("insufficient tail: tail centers moved by " +
                           std::to_string(movement));
  return {half.center, half.radius, movement};
}

// ---------------------------------------------------------------------------
// Delta-limits

struct DeltaVerdict {
  bool norm_convergent = false;     // ||x_k - x|| -> 0 on the tail
  bool delta_convergent = false;    // certified x_k Delta-> x
  std::vector<double> distances;    // ||x_k - x|| over the tail
  std::vector<double> max_pairing;  // max over the dictionary, per tail index
  std::size_t failing_functions = 0;
  std::string verdict;
};

/// Pairs the conjugates (x_k - x)* with the dictionary cells scaled to unit
/// L^p norm and certifies x_k Delta-> x when every pairing decays on the tail.
inline DeltaVerdict delta_limit_dual(const Seq& seq, const Element& x,
                                     const TestDictionary& dict, const TrendOptions& opt = {}) {
  const Space& space = seq.space();
  if (!(x.space() == space)) throw std::invalid_argument("delta_limit_dual: space mismatch");
  DeltaVerdict v;
  double scale = 1.0;
  for (std::size_t k = seq.tail_start(); k < seq.size(); ++k) {
    v.distances.push_back(distance(seq[k], x));
    scale = std::max(scale, norm(seq[k]));
  }
  const double zero = 1e-12 * scale;
  if (detail::last_quarter_max(v.distances) <= opt.norm_tol * scale) {
    v.norm_convergent = true;
    v.delta_convergent = true;
    v.max_pairing.assign(v.distances.size(), 0.0);
    v.verdict = "norm-convergent";
    return v;
  }

  const double p = space.p();
  const auto& cells = dict.cells();
  std::vector<std::vector<double>> series(cells.size());
  for (std::size_t j = 0; j < v.distances.size(); ++j) {
    const std::size_t k = seq.tail_start() + j;
    double worst = 0.0;
    if (v.distances[j] <= zero) {
      for (auto& s : series) s.push_back(0.0);
    } else {
      const Element conj = as_primal(duality_conjugate(seq[k] - x), space);
      for (std::size_t c = 0; c < cells.size(); ++c) {
        const double val = conj.integral(cells[c]) / std::pow(cells[c].length(), 1.0 / p);
        series[c].push_back(val);
        worst = std::max(worst, std::fabs(val));
      }
    }
    v.max_pairing.push_back(worst);
  }
  for (const auto& s : series)
    if (!detail::tail_decays(s, opt.decay_threshold, opt.decay_ratio)) ++v.failing_functions;
  v.delta_convergent = v.failing_functions == 0;
  v.verdict = v.delta_convergent ? "delta-convergent" : "not delta-convergent";
  return v;
}

/// min over candidates of [liminf ||x_n - x|| - liminf ||x_n - x0||], with
/// liminf taken as the tail min. Negative values witness a failure of the
/// Opial condition at x0.
inline double opial_gap(const Seq& seq, const Element& x0, const std::vector<Element>& candidates) {
  if (candidates.empty()) throw std::invalid_argument("opial_gap: no candidates");
  auto tail_min = [&](const Element& y) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t k = seq.tail_start(); k < seq.size(); ++k) m = std::min(m, distance(seq[k], y));
    return m;
  };
  const double base = tail_min(x0);
  double gap = std::numeric_limits<double>::infinity();
  for (const auto& x : candidates) gap = std::min(gap, tail_min(x) - base);
  return gap;
}

// ---------------------------------------------------------------------------
// regular subsequences

struct RegularSubsequence {
  std::vector<std::size_t> indices;
  double radius = 0.0;
};

namespace detail {

/// Asymptotic radius surrogate: Chebyshev radius of the last `count` terms.
inline double tail_radius(const Seq& seq, const std::vector<std::size_t>& idx, std::size_t count,
                          const std::optional<Interval>& window, const ChebyshevOptions& solver) {
  std::vector<Element> pts;
  for (std::size_t j = idx.size() - count; j < idx.size(); ++j) pts.push_back(seq[idx[j]]);
  pts = observed(pts, window);
  try {
    return chebyshev_center(pts, solver).radius;
  } catch (const ChebyshevNonConvergence& e) {
    return e.best().radius;
  }
}

}  // namespace detail

/// Diagonal ladder over arithmetic-progression subsequences: at stage i the
/// current subsequence is replaced by the progression inside it whose last
/// m terms have the smallest radius, if that beats the last m terms of the
/// current one by more than eps_i = 2^-(i+1) * 1e-3 * max(1, sup norm).
/// Radii are compared at equal cardinality since dropping points alone
/// can only shrink a Chebyshev radius.
inline RegularSubsequence regular_subsequence(const Seq& seq,
                                              const std::optional<Interval>& window = std::nullopt,
                                              const ChebyshevOptions& solver = {}) {
  if (seq.size() < 8) throw std::invalid_argument("regular_subsequence: need at least 8 terms");
  const double base_eps = 1e-3 * std::max(1.0, sup_norm(seq));
  std::vector<std::size_t> current(seq.size());
  for (std::size_t k = 0; k < seq.size(); ++k) current[k] = k;

  for (int stage = 0; stage < 8; ++stage) {
    std::vector<std::size_t> best;
    double best_gain = 0.0;
    for (std::size_t step = 2; step <= 4; ++step) {
      for (std::size_t offset = 0; offset < step; ++offset) {
        std::vector<std::size_t> cand;
        for (std::size_t j = offset; j < current.size(); j += step) cand.push_back(current[j]);
        if (cand.size() < 8) continue;
        const std::size_t m = cand.size() / 2;
        const double gain = detail::tail_radius(seq, current, m, window, solver) -
                            detail::tail_radius(seq, cand, m, window, solver);
        if (gain > best_gain + 1e-12) {
          best_gain = gain;
          best = std::move(cand);
        }
      }
    }
    if (best.empty() || best_gain <= std::ldexp(base_eps, -(stage + 1))) break;
    current = std::move(best);
  }
  return {current, detail::tail_radius(seq, current, current.size() / 2, window, solver)};
}

}  // namespace concentra

#endif  // CONCENTRA_CONVERGENCE_HPP
