#ifndef CONCENTRA_SEQUENCE_HPP
#define CONCENTRA_SEQUENCE_HPP

// Finite sequences with a marked asymptotic tail, tail statistics, and the
// finite test dictionary standing in for "pair against every functional".

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "concentra/space.hpp"

namespace concentra {

/// x_0 .. x_{K-1}; indices >= tail_start form the asymptotic regime.
class Seq {
 public:
  Seq(std::vector<Element> elements, std::size_t tail_start)
      : elements_(std::move(elements)), tail_start_(tail_start) {
    if (elements_.empty()) throw std::invalid_argument("Seq: no elements");
    if (tail_start_ >= elements_.size())
      throw std::invalid_argument("Seq: tail_start must index a stored element");
    for (const auto& e : elements_)
      if (!(e.space() == elements_.front().space()))
        throw std::invalid_argument("Seq: elements live in different spaces");
  }

  const Space& space() const { return elements_.front().space(); }
  std::size_t size() const { return elements_.size(); }
  std::size_t tail_start() const { return tail_start_; }
  std::size_t tail_length() const { return elements_.size() - tail_start_; }
  const Element& operator[](std::size_t k) const { return elements_[k]; }
  Element& operator[](std::size_t k) { return elements_[k]; }
  const std::vector<Element>& elements() const { return elements_; }
  auto begin() const { return elements_.begin(); }
  auto end() const { return elements_.end(); }

  std::vector<Element> tail() const {
    return {elements_.begin() + static_cast<std::ptrdiff_t>(tail_start_), elements_.end()};
  }

  /// Subsequence along increasing `indices`; the tail starts at the first
  /// chosen index inside the original tail (or at the last chosen index).
  Seq subsequence(const std::vector<std::size_t>& indices) const {
    if (indices.empty()) throw std::invalid_argument("Seq: empty subsequence");
    std::vector<Element> out;
    std::size_t ts = indices.size() - 1;
    bool found = false;
    for (std::size_t j = 0; j < indices.size(); ++j) {
      if (indices[j] >= elements_.size() || (j > 0 && indices[j] <= indices[j - 1]))
        throw std::invalid_argument("Seq: subsequence indices must increase");
      if (!found && indices[j] >= tail_start_) {
        ts = j;
        found = true;
      }
      out.push_back(elements_[indices[j]]);
    }
    return Seq(std::move(out), ts);
  }

 private:
  std::vector<Element> elements_;
  std::size_t tail_start_;
};

inline double sup_norm(const Seq& s) {
  double m = 0.0;
  for (const auto& e : s) m = std::max(m, norm(e));
  return m;
}

/// limsup surrogate: max of ||x_k|| over the tail.
inline double tail_sup_norm(const Seq& s) {
  double m = 0.0;
  for (std::size_t k = s.tail_start(); k < s.size(); ++k) m = std::max(m, norm(s[k]));
  return m;
}

namespace detail {

/// Quarter-tail decay rule shared by all trend verdicts: a tail series
/// decays when its last-quarter max is below `threshold` or below
/// `ratio` times its first-quarter max.
inline bool tail_decays(const std::vector<double>& series, double threshold, double ratio) {
  if (series.empty()) return true;
  const std::size_t q = std::max<std::size_t>(1, series.size() / 4);
  double first = 0.0;
  double last = 0.0;
  for (std::size_t i = 0; i < q; ++i) first = std::max(first, std::fabs(series[i]));
  for (std::size_t i = series.size() - q; i < series.size(); ++i)
    last = std::max(last, std::fabs(series[i]));
  return last <= threshold || last < ratio * first;
}

inline double last_quarter_max(const std::vector<double>& series) {
  const std::size_t q = std::max<std::size_t>(1, series.size() / 4);
  double m = 0.0;
  for (std::size_t i = series.size() - std::min(q, series.size()); i < series.size(); ++i)
    m = std::max(m, std::fabs(series[i]));
  return m;
}

}  // namespace detail

/// Indicators of the dyadic subdivisions of `window` down to `depth`
/// (grid spaces), or unit vectors of the window's sites (sequence spaces).
class TestDictionary {
 public:
  static TestDictionary dyadic(const Space& space, const Interval& window, int depth) {
    if (depth < 0) throw std::invalid_argument("TestDictionary: negative depth");
    const Interval w = intersect(window, space.window());
    if (w.length() <= 0.0) throw std::invalid_argument("TestDictionary: empty window");
    TestDictionary d(space, w);
    if (space.is_grid()) {
      for (int t = 0; t <= depth; ++t) {
        const double n = std::ldexp(1.0, t);
        for (long j = 0; j < static_cast<long>(n); ++j)
          d.cells_.push_back({w.lo + w.length() * static_cast<double>(j) / n,
                              w.lo + w.length() * static_cast<double>(j + 1) / n});
      }
      d.finest_ = depth;
      if (!(w == space.window())) d.cells_.push_back(space.window());
    } else {
      const auto a = static_cast<long>(std::ceil(w.lo));
      const auto b = static_cast<long>(std::floor(w.hi));
      for (long i = a; i < b; ++i)
        d.cells_.push_back({static_cast<double>(i), static_cast<double>(i + 1)});
      d.finest_ = 0;
    }
    for (const auto& c : d.cells_)
      d.functions_.emplace_back(dual_indicator(space, c));
    return d;
  }

  /// Dictionary over the whole space.
  static TestDictionary dyadic(const Space& space, int depth) {
    return dyadic(space, space.window(), depth);
  }

  const Space& space() const { return space_; }
  const Interval& window() const { return window_; }
  const std::vector<Interval>& cells() const { return cells_; }
  const std::vector<DualElement>& functions() const { return functions_; }
  std::size_t size() const { return cells_.size(); }

  /// The cells of the finest subdivision (a partition of the window).
  std::vector<Interval> finest_cells() const {
    if (!space_.is_grid()) return cells_;
    const std::size_t n = std::size_t{1} << finest_;
    const std::size_t first = n - 1;  // 1 + 2 + ... + 2^{finest-1}
    return {cells_.begin() + static_cast<std::ptrdiff_t>(first),
            cells_.begin() + static_cast<std::ptrdiff_t>(first + n)};
  }

  /// Local average (1/|c|) int_c x, the pairing that reconstructs weak limits.
  static double average(const Element& x, const Interval& c) {
    return x.integral(c) / c.length();
  }

 private:
  TestDictionary(Space space, Interval window)
      : space_(std::move(space)), window_(window) {}

  static DualElement dual_indicator(const Space& space, const Interval& c) {
    const Element e = Element::indicator(space, c);
    const auto v = e.coeffs();
    return DualElement(space.dual(), e.level(), std::vector<double>(v.begin(), v.end()));
  }

  Space space_;
  Interval window_;
  int finest_ = 0;
  std::vector<Interval> cells_;
  std::vector<DualElement> functions_;
};

}  // namespace concentra

#endif  // CONCENTRA_SEQUENCE_HPP
