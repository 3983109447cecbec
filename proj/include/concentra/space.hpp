#ifndef CONCENTRA_SPACE_HPP
#define CONCENTRA_SPACE_HPP

// Discretized l^p / L^p ambients and the elements living in them.
//
// A GridSpace is an interval [lo, hi) of the real line whose elements are
// piecewise constant on dyadic cells of width 2^-level. A SeqSpace is an
// index window [i_min, i_max] of Z; it is stored as the interval
// [i_min, i_max + 1) with unit cells, so the same cell machinery serves both
// (cell measure is 1 for sequences).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace concentra {

enum class SpaceKind { Seq, Grid };

/// Half-open interval [lo, hi).
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  bool contains(const Interval& o) const { return o.lo >= lo && o.hi <= hi; }
  bool operator==(const Interval&) const = default;
};

inline Interval intersect(const Interval& a, const Interval& b) {
  Interval r{std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
  if (r.hi < r.lo) r.hi = r.lo;
  return r;
}

namespace detail {

constexpr int kMaxDyadicLevel = 40;

/// Smallest L >= 0 with x * 2^L an integer; throws for non-dyadic input.
inline int dyadic_level(double x) {
  double v = x;
  for (int level = 0; level <= kMaxDyadicLevel; ++level) {
    if (v == std::floor(v)) return level;
    v *= 2.0;
  }
  std::ostringstream msg;
  msg << "value " << x << " is not a dyadic rational of depth <= "
      << kMaxDyadicLevel;
  throw std::invalid_argument(msg.str());
}

/// |t|^p with the t = 0 guard.
inline double abs_pow(double t, double p) {
  const double a = std::fabs(t);
  return a == 0.0 ? 0.0 : std::pow(a, p);
}

inline double sign(double t) { return t > 0.0 ? 1.0 : (t < 0.0 ? -1.0 : 0.0); }

}  // namespace detail

class Space {
 public:
  /// l^p on the index window [i_min, i_max].
  static Space sequence(double p, long i_min, long i_max) {
    if (i_max < i_min) throw std::invalid_argument("empty index window");
    return Space(SpaceKind::Seq, p, static_cast<double>(i_min),
                 static_cast<double>(i_max) + 1.0, 0, 0);
  }

  /// L^p on [lo, hi) with base level `base_level` and `depth` further
  /// refinements available to elements.
  static Space grid(double p, double lo, double hi, int base_level, int depth) {
    if (!(hi > lo)) throw std::invalid_argument("empty grid window");
    if (base_level < 0 || depth < 0)
      throw std::invalid_argument("negative grid level");
    Space s(SpaceKind::Grid, p, lo, hi, base_level, depth);
    if (detail::dyadic_level(lo) > base_level ||
        detail::dyadic_level(hi) > base_level)
      throw std::invalid_argument(
          "grid window endpoints must lie on the base-level dyadic grid");
    return s;
  }

  SpaceKind kind() const { return kind_; }
  bool is_grid() const { return kind_ == SpaceKind::Grid; }
  double p() const { return p_; }
  double dual_exponent() const { return p_ / (p_ - 1.0); }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  Interval window() const { return {lo_, hi_}; }
  int base_level() const { return base_level_; }
  int depth() const { return depth_; }
  int max_level() const { return base_level_ + depth_; }

  std::size_t cells(int level) const {
    return static_cast<std::size_t>(std::llround((hi_ - lo_) * std::ldexp(1.0, level)));
  }
  double cell_width(int level) const { return std::ldexp(1.0, -level); }
  /// Measure of one cell: 1 for sequences, the cell width for grids.
  double cell_measure(int level) const {
    return kind_ == SpaceKind::Seq ? 1.0 : cell_width(level);
  }

  /// Same ambient geometry; the exponent may differ (dual elements).
  bool same_geometry(const Space& o) const {
    return kind_ == o.kind_ && lo_ == o.lo_ && hi_ == o.hi_ &&
           base_level_ == o.base_level_ && depth_ == o.depth_;
  }
  bool operator==(const Space& o) const { return same_geometry(o) && p_ == o.p_; }

  /// Space with the same geometry and exponent p' = p / (p - 1).
  Space dual() const {
    Space d = *this;
    d.p_ = dual_exponent();
    return d;
  }

 private:
  Space(SpaceKind kind, double p, double lo, double hi, int base, int depth)
      : kind_(kind), p_(p), lo_(lo), hi_(hi), base_level_(base), depth_(depth) {
    if (!(p > 1.0) || !std::isfinite(p))
      throw std::invalid_argument("exponent p must lie in (1, inf)");
  }

  SpaceKind kind_;
  double p_;
  double lo_;
  double hi_;
  int base_level_;
  int depth_;
};

namespace detail {

/// Coefficients on the dyadic cells of one level of a Space.
class CellFunction {
 public:
  explicit CellFunction(Space space)
      : space_(std::move(space)), level_(space_.base_level()),
        coeffs_(space_.cells(level_), 0.0) {}

  CellFunction(Space space, int level, std::vector<double> coeffs)
      : space_(std::move(space)), level_(level), coeffs_(std::move(coeffs)) {
    if (level_ < space_.base_level() || level_ > space_.max_level())
      throw std::invalid_argument("element level outside the space's range");
    if (coeffs_.size() != space_.cells(level_))
      throw std::invalid_argument("coefficient count does not match level");
  }

  const Space& space() const { return space_; }
  int level() const { return level_; }
  std::span<const double> coeffs() const { return coeffs_; }
  std::span<double> coeffs() { return coeffs_; }
  std::size_t size() const { return coeffs_.size(); }
  double cell_measure() const { return space_.cell_measure(level_); }
  double cell_width() const { return space_.cell_width(level_); }
  /// Left endpoint of cell i.
  double cell_lo(std::size_t i) const {
    return space_.lo() + static_cast<double>(i) * cell_width();
  }

  bool is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(),
                       [](double c) { return c == 0.0; });
  }

  /// Refines to `level`, duplicating coefficients; the function is unchanged.
  void refine_to(int level) {
    if (level == level_) return;
    if (level < level_) throw std::invalid_argument("cannot refine downwards");
    if (level > space_.max_level())
      throw std::out_of_range("resolution overflow: level beyond space depth");
    const std::size_t factor = std::size_t{1} << (level - level_);
    std::vector<double> out(coeffs_.size() * factor);
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
      std::fill_n(out.begin() + static_cast<std::ptrdiff_t>(i * factor), factor,
                  coeffs_[i]);
    coeffs_ = std::move(out);
    level_ = level;
  }

  /// Merges equal sibling cells while the function stays representable.
  void coarsen() {
    while (level_ > space_.base_level()) {
      bool mergeable = true;
      for (std::size_t i = 0; i + 1 < coeffs_.size(); i += 2) {
        if (coeffs_[i] != coeffs_[i + 1]) {
          mergeable = false;
          break;
        }
      }
      if (!mergeable) return;
      std::vector<double> out(coeffs_.size() / 2);
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = coeffs_[2 * i];
      coeffs_ = std::move(out);
      --level_;
    }
  }

  /// Exact integral of the function over `iv` (clipped to the window).
  double integral(const Interval& iv) const { return integral_impl(iv, false); }
  /// Exact integral of |f| over `iv`.
  double abs_integral(const Interval& iv) const { return integral_impl(iv, true); }

 protected:
  void check_compatible(const CellFunction& o) const {
    if (!space_.same_geometry(o.space_))
      throw std::invalid_argument("mismatched space geometry");
  }

  Space space_;
  int level_;
  std::vector<double> coeffs_;

 private:
  double integral_impl(const Interval& iv, bool absolute) const {
    const Interval w = intersect(iv, space_.window());
    if (w.length() <= 0.0) return 0.0;
    const double h = cell_width();
    auto first = static_cast<std::size_t>(std::floor((w.lo - space_.lo()) / h));
    auto last = static_cast<std::size_t>(std::ceil((w.hi - space_.lo()) / h));
    last = std::min(last, coeffs_.size());
    double acc = 0.0;
    for (std::size_t i = first; i < last; ++i) {
      const double a = std::max(w.lo, cell_lo(i));
      const double b = std::min(w.hi, cell_lo(i) + h);
      if (b <= a) continue;
      const double c = absolute ? std::fabs(coeffs_[i]) : coeffs_[i];
      // sequence cells have unit width, so width == measure for both kinds
      acc += c * (b - a);
    }
    return acc;
  }
};

}  // namespace detail

class DualElement;

/// Element of the ambient l^p / L^p space.
class Element : public detail::CellFunction {
 public:
  using CellFunction::CellFunction;

  /// value * indicator of `iv`; endpoints must be dyadic.
  static Element indicator(const Space& space, const Interval& iv,
                           double value = 1.0) {
    if (!space.window().contains(iv))
      throw std::out_of_range("window overflow: indicator outside the space");
    int level = space.base_level();
    if (space.is_grid()) {
      level = std::max({level, detail::dyadic_level(iv.lo - space.lo()),
                        detail::dyadic_level(iv.hi - space.lo())});
    } else if (iv.lo != std::floor(iv.lo) || iv.hi != std::floor(iv.hi)) {
      throw std::invalid_argument("sequence indicators need integer endpoints");
    }
    if (level > space.max_level())
      throw std::out_of_range("resolution overflow: indicator too fine");
    Element e(space, level, std::vector<double>(space.cells(level), 0.0));
    const double h = e.cell_width();
    const auto first = static_cast<std::size_t>(std::llround((iv.lo - space.lo()) / h));
    const auto last = static_cast<std::size_t>(std::llround((iv.hi - space.lo()) / h));
    for (std::size_t i = first; i < last; ++i) e.coeffs_[i] = value;
    return e;
  }

  /// Unit vector e_i of a sequence space.
  static Element basis(const Space& space, long index, double value = 1.0) {
    return indicator(space, {static_cast<double>(index),
                             static_cast<double>(index) + 1.0}, value);
  }

  /// Coefficients at `level`, a copy refined as needed.
  Element at_level(int level) const {
    Element e = *this;
    e.refine_to(level);
    return e;
  }

  Element& operator+=(const Element& o) { return combine(o, 1.0); }
  Element& operator-=(const Element& o) { return combine(o, -1.0); }
  Element& operator*=(double s) {
    for (double& c : coeffs_) c *= s;
    return *this;
  }
  friend Element operator+(Element a, const Element& b) { return a += b; }
  friend Element operator-(Element a, const Element& b) { return a -= b; }
  friend Element operator*(double s, Element a) { return a *= s; }
  friend Element operator*(Element a, double s) { return a *= s; }
  Element operator-() const { return -1.0 * *this; }

  /// this += s * o.
  Element& axpy(double s, const Element& o) { return combine(o, s); }

 private:
  Element& combine(const Element& o, double s) {
    check_compatible(o);
    if (o.level_ > level_) refine_to(o.level_);
    if (o.level_ == level_) {
      for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += s * o.coeffs_[i];
      return *this;
    }
    const std::size_t factor = std::size_t{1} << (level_ - o.level_);
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
      coeffs_[i] += s * o.coeffs_[i / factor];
    return *this;
  }
};

/// Element of the dual space l^{p'} / L^{p'}; its Space carries p'.
class DualElement : public detail::CellFunction {
 public:
  using CellFunction::CellFunction;
};

/// l^inf / L^inf norm of the coefficient array.
inline double sup_norm(const detail::CellFunction& x) {
  double m = 0.0;
  for (double c : x.coeffs()) m = std::max(m, std::fabs(c));
  return m;
}

/// (sum |c_i|^q mu_i)^{1/q}, computed with max-scaling.
inline double lp_norm(const detail::CellFunction& x, double q) {
  const double m = sup_norm(x);
  if (m == 0.0) return 0.0;
  double acc = 0.0;
  for (double c : x.coeffs()) acc += detail::abs_pow(c / m, q);
  return m * std::pow(acc * x.cell_measure(), 1.0 / q);
}

inline double norm(const Element& x) { return lp_norm(x, x.space().p()); }
inline double norm(const DualElement& v) { return lp_norm(v, v.space().p()); }

/// <v, x> = sum v_i x_i mu_i at the common refinement level.
inline double pairing(const DualElement& v, const Element& x) {
  if (!v.space().same_geometry(x.space()))
    throw std::invalid_argument("pairing: mismatched space geometry");
  const int level = std::max(v.level(), x.level());
  const std::size_t fv = std::size_t{1} << (level - v.level());
  const std::size_t fx = std::size_t{1} << (level - x.level());
  const auto vc = v.coeffs();
  const auto xc = x.coeffs();
  const std::size_t n = x.space().cells(level);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += vc[i / fv] * xc[i / fx];
  return acc * x.space().cell_measure(level);
}

/// The unique x* with ||x*||_{p'} = 1 and <x*, x> = ||x||:
/// sign(x)|x|^{p-1} / ||x||^{p-1}.
inline DualElement duality_conjugate(const Element& x) {
  const double nx = norm(x);
  if (nx == 0.0)
    throw std::domain_error("duality conjugate of the zero element is undefined");
  const double p = x.space().p();
  std::vector<double> out(x.size());
  const auto xc = x.coeffs();
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = detail::sign(xc[i]) * detail::abs_pow(xc[i] / nx, p - 1.0);
  return DualElement(x.space().dual(), x.level(), std::move(out));
}

/// Reinterprets a dual element as a primal one on the same cells (used to
/// pair conjugates against dictionary functions viewed in X*).
inline Element as_primal(const DualElement& v, const Space& primal) {
  if (!v.space().same_geometry(primal))
    throw std::invalid_argument("as_primal: mismatched geometry");
  const auto c = v.coeffs();
  return Element(primal, v.level(), std::vector<double>(c.begin(), c.end()));
}

/// Restriction of x to the interval `iv` (zero outside); `iv` must be
/// representable at x's level or finer.
inline Element restrict_to(const Element& x, const Interval& iv) {
  const Space& s = x.space();
  int level = x.level();
  if (s.is_grid())
    level = std::max({level, detail::dyadic_level(std::max(iv.lo, s.lo()) - s.lo()),
                      detail::dyadic_level(std::min(iv.hi, s.hi()) - s.lo())});
  Element out = x.at_level(level);
  auto c = out.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double a = out.cell_lo(i);
    if (a < iv.lo || a + out.cell_width() > iv.hi) c[i] = 0.0;
  }
  out.coarsen();
  return out;
}

inline double distance(const Element& a, const Element& b) { return norm(a - b); }

}  // namespace concentra

#endif  // CONCENTRA_SPACE_HPP
