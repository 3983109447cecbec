#ifndef CONCENTRA_DISLOCATION_HPP
#define CONCENTRA_DISLOCATION_HPP

// Shift / dyadic-dilation isometries acting on grid and sequence elements.
//
// A Dislocation g = (m, y) acts by (g u)(x) = 2^{m/p} u(2^m x - y) on grids
// and by the index shift (g u)_i = u_{i - y} on sequences (m = 0 there).

#include <cmath>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <vector>

#include "concentra/space.hpp"

namespace concentra {

struct Dislocation {
  int scale = 0;       // dyadic dilation exponent m
  double shift = 0.0;  // y, dyadic rational (integer for sequences)

  bool operator==(const Dislocation&) const = default;
  bool is_identity() const { return scale == 0 && shift == 0.0; }
};

using DislocationPath = std::vector<Dislocation>;

/// compose(g, h) acts as g after h: apply(compose(g, h), u) == apply(g, apply(h, u)).
inline Dislocation compose(const Dislocation& g, const Dislocation& h) {
  return {g.scale + h.scale, std::ldexp(g.shift, h.scale) + h.shift};
}

inline Dislocation inverse(const Dislocation& g) {
  return {-g.scale, -std::ldexp(g.shift, -g.scale)};
}

/// Parameter size of g: max(|m|, |y| 2^-m). Diverges iff g_k -> 0 weakly.
inline double escape_magnitude(const Dislocation& g) {
  return std::max(static_cast<double>(std::abs(g.scale)),
                  std::fabs(std::ldexp(g.shift, -g.scale)));
}

namespace detail {

inline Element apply_impl(const Dislocation& g, const Element& u,
                          const std::optional<Interval>& clip) {
  const Space& space = u.space();
  if (!space.is_grid()) {
    if (g.scale != 0) throw std::invalid_argument("sequence spaces admit shifts only");
    if (g.shift != std::floor(g.shift))
      throw std::invalid_argument("sequence shifts must be integers");
  }
  const double factor = space.is_grid() ? std::exp2(g.scale / space.p()) : 1.0;
  const double offset = std::ldexp(space.lo() + g.shift, -g.scale) - space.lo();

  int level = space.base_level();
  if (space.is_grid()) {
    level = std::max({level, u.level() + g.scale, dyadic_level(offset) });
    if (clip) {
      const Interval w = intersect(*clip, space.window());
      level = std::max({level, dyadic_level(w.lo - space.lo()),
                        dyadic_level(w.hi - space.lo())});
    }
    if (level > space.max_level()) {
      if (!clip)
        throw std::out_of_range("resolution overflow: dislocated element needs level " +
                                std::to_string(level));
      level = space.max_level();  // windowed images keep cell averages only
    }
  }
  const Interval target = clip ? intersect(*clip, space.window()) : space.window();

  Element out(space, level, std::vector<double>(space.cells(level), 0.0));
  auto oc = out.coeffs();
  const double h_in = u.cell_width();
  const double h_out = out.cell_width();
  const auto uc = u.coeffs();
  for (std::size_t i = 0; i < uc.size(); ++i) {
    if (uc[i] == 0.0) continue;
    double a = std::ldexp(u.cell_lo(i) + g.shift, -g.scale);
    double b = a + std::ldexp(h_in, -g.scale);
    if (!clip && (a < space.lo() || b > space.hi()))
      throw std::out_of_range("window overflow: dislocated support leaves the space");
    a = std::max(a, target.lo);
    b = std::min(b, target.hi);
    if (b <= a) continue;
    const auto first = static_cast<std::size_t>(std::floor((a - space.lo()) / h_out));
    const auto last = std::min(oc.size(), static_cast<std::size_t>(std::ceil((b - space.lo()) / h_out)));
    for (std::size_t j = first; j < last; ++j) {
      const double lo = out.cell_lo(j);
      const double overlap = std::min(b, lo + h_out) - std::max(a, lo);
      if (overlap > 0.0) oc[j] += factor * uc[i] * (overlap / h_out);
    }
  }
  out.coarsen();
  return out;
}

}  // namespace detail

/// Isometric image g u. Throws std::out_of_range("window overflow") when the
/// image support leaves the ambient window.
inline Element apply(const Dislocation& g, const Element& u) {
  return detail::apply_impl(g, u, std::nullopt);
}

/// (g u) restricted to `window`; mass leaving the ambient window is dropped
/// instead of raising, and detail finer than the space resolution is
/// replaced by its cell averages.
inline Element apply_windowed(const Dislocation& g, const Element& u,
                              const Interval& window) {
  return detail::apply_impl(g, u, window);
}

struct WeakNullOptions {
  double tail_fraction = 0.5;     // tail = last max(2, fraction * length) indices
  double escape_threshold = 1.0;  // diameter of the unit reference window
};

/// Finite-tail witness of g_k -> 0 weakly: on the tail every parameter size
/// exceeds the threshold and the sizes grow from the first to the last tail
/// index (a stationary path never converges weakly to zero).
inline bool path_weak_null(const DislocationPath& path, const WeakNullOptions& opt = {}) {
  if (path.empty()) throw std::invalid_argument("path_weak_null: empty path");
  if (path.size() < 2) return false;
  const std::size_t tail = std::max<std::size_t>(
      2, static_cast<std::size_t>(opt.tail_fraction * static_cast<double>(path.size())));
  const std::size_t start = path.size() - std::min(tail, path.size());
  for (std::size_t k = start; k < path.size(); ++k)
    if (escape_magnitude(path[k]) <= opt.escape_threshold) return false;
  return escape_magnitude(path.back()) > escape_magnitude(path[start]);
}

/// k -> inverse(a_k) o b_k; decoupling of a and b is path_weak_null of this.
inline DislocationPath relative_path(const DislocationPath& a, const DislocationPath& b) {
  if (a.size() != b.size()) throw std::invalid_argument("relative_path: length mismatch");
  DislocationPath out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = compose(inverse(a[k]), b[k]);
  return out;
}

/// Scales m in [-max_scale, max_scale] and integer shifts at each scale.
/// The profile frame is the observation window [-obs_radius, 1 + obs_radius)
/// around the unit reference window [0, 1).
struct SearchGrid {
  int max_scale = 0;
  double obs_radius = 1.0;
  int dict_depth = 2;

  static SearchGrid for_space(const Space& s) {
    SearchGrid g;
    g.max_scale = s.is_grid() ? s.depth() : 0;
    return g;
  }
  Interval observation_window() const { return {-obs_radius, 1.0 + obs_radius}; }
};

namespace detail {

/// Primitive of |u| for O(1) interval integrals.
class AbsPrimitive {
 public:
  explicit AbsPrimitive(const Element& u)
      : lo_(u.space().lo()), h_(u.cell_width()), abs_(u.size()), prefix_(u.size() + 1, 0.0) {
    const auto c = u.coeffs();
    for (std::size_t i = 0; i < c.size(); ++i) {
      abs_[i] = std::fabs(c[i]);
      prefix_[i + 1] = prefix_[i] + abs_[i] * h_;
    }
  }
  double at(double x) const {
    const double t = (x - lo_) / h_;
    if (t <= 0.0) return 0.0;
    const auto i = static_cast<std::size_t>(std::floor(t));
    if (i >= abs_.size()) return prefix_.back();
    return prefix_[i] + abs_[i] * (x - (lo_ + static_cast<double>(i) * h_));
  }
  double integral(double a, double b) const { return at(b) - at(a); }

 private:
  double lo_;
  double h_;
  std::vector<double> abs_;
  std::vector<double> prefix_;
};

}  // namespace detail

/// Locates the dislocation g whose recentered image g^{-1} u carries the
/// largest local average int_{[0,1)} |g^{-1} u| on the reference window.
/// Ties go to the smallest |m|, then the smallest |y|.
inline Dislocation concentration_locator(const Element& u, const SearchGrid& grid) {
  if (u.is_zero()) throw std::domain_error("concentration_locator: zero element");
  const Space& s = u.space();
  const detail::AbsPrimitive prim(u);
  const double p = s.p();
  Dislocation best;
  double best_score = -1.0;
  auto consider = [&](int m, long y, double score) {
    const double tol = 1e-12 * std::max(best_score, 0.0);
    bool take = score > best_score + tol;
    if (!take && std::fabs(score - best_score) <= tol) {
      if (std::abs(m) < std::abs(best.scale)) take = true;
      else if (std::abs(m) == std::abs(best.scale) &&
               std::fabs(static_cast<double>(y)) < std::fabs(best.shift))
        take = true;
    }
    if (take) {
      best_score = std::max(score, best_score);
      best = {m, static_cast<double>(y)};
    }
  };
  const int max_scale = s.is_grid() ? grid.max_scale : 0;
  for (int m = -max_scale; m <= max_scale; ++m) {
    const double width = std::ldexp(1.0, -m);
    const double weight = std::exp2(m * (1.0 - 1.0 / p));
    const auto y_first = static_cast<long>(std::ceil(std::ldexp(s.lo(), m)));
    const auto y_last = static_cast<long>(std::floor(std::ldexp(s.hi(), m))) - 1;
    for (long y = y_first; y <= y_last; ++y) {
      const double a = static_cast<double>(y) * width;
      const double score = weight * prim.integral(a, a + width);
      consider(m, y, score);
    }
  }
  return best;
}

}  // namespace concentra

#endif  // CONCENTRA_DISLOCATION_HPP
