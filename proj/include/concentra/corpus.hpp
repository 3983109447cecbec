#ifndef CONCENTRA_CORPUS_HPP
#define CONCENTRA_CORPUS_HPP

// Deterministic generators for the worked examples and synthetic families.
//
//   bl-strict-03    L^p(0,3): values 1, 2, 0 on interleaved cells of width 1/k
//   nonadditive-09  L^4(0,9): x_n = x0(n t) periodized, companion y_n
//   nonlsc-L4       L^4(0,9): u_k = 1 - t v_k with int v0^3 = 0, int v0 > 0
//   linf-dyadic     intervals of every length j/2^k, pairwise far apart
//   spreading-lp    l^p: k^{-1/p} on k sites
//   Linfty-mass     dense pieces of shrinking dyadic intervals at moving places
//   bubbles         three decoupled concentrations plus oscillating noise

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "concentra/dislocation.hpp"
#include "concentra/sequence.hpp"

namespace concentra {

using Params = std::map<std::string, double>;

struct Expectation {
  std::string quantity;
  double value = 0.0;
  std::string basis;  // how the value is known: "closed form", "exact integration", ...
};

struct GeneratedExample {
  std::string name;
  Params params;  // effective parameters (defaults filled in)
  Seq seq;
  std::vector<Expectation> expected;
  std::string window_note;
  std::vector<double> scales;           // the k (or n) of each stored term
  std::vector<Element> companion;       // second sequence where the example has one
  std::vector<DislocationPath> paths;   // planted paths (bubbles)
  std::vector<Element> profiles;        // planted profiles (bubbles)
  std::vector<std::vector<double>> anchors;  // interval starts per term (linf-dyadic)
};

inline const std::vector<std::string>& example_names() {
  static const std::vector<std::string> names{"bl-strict-03", "nonadditive-09", "nonlsc-L4",
                                              "linf-dyadic",  "spreading-lp",   "Linfty-mass",
                                              "bubbles"};
  return names;
}

namespace detail {

inline double param(Params& ps, const std::string& key, double fallback) {
  auto [it, fresh] = ps.try_emplace(key, fallback);
  return it->second;
}

inline int log2_exact(double v, const char* what) {
  const int e = static_cast<int>(std::lround(std::log2(v)));
  if (v < 1 || std::ldexp(1.0, e) != v)
    throw std::invalid_argument(std::string(what) + " must be a power of two");
  return e;
}

/// Step function on [0, period) given by breakpoints/values, tiled over
/// the window [lo, hi) of `space` with n copies per unit of `period`.
inline Element periodized(const Space& space, double period, const std::vector<double>& breaks,
                          const std::vector<double>& values, double n) {
  const double scaled = period / n;
  Element out(space);
  const auto copies = static_cast<long>(std::llround(space.window().length() / scaled));
  for (long c = 0; c < copies; ++c) {
    const double base = space.lo() + static_cast<double>(c) * scaled;
    double a = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double b = breaks[i];
      if (values[i] != 0.0)
        out += Element::indicator(space, {base + a / n, base + b / n}, values[i]);
      a = b;
    }
  }
  out.coarsen();
  return out;
}

inline Element bubble_shape(const Space& space, double norm_target) {
  // 1 on [0, 1/2), 3/4 on [1/2, 1); its unit-interval average is unique to [0, 1).
  Element w = Element::indicator(space, {0.0, 0.5}, 1.0) +
              Element::indicator(space, {0.5, 1.0}, 0.75);
  return (norm_target / norm(w)) * w;
}

inline GeneratedExample bl_strict(Params ps) {
  const double kmax = param(ps, "k", 64);
  const double p = param(ps, "p", 4);
  const int levels = log2_exact(kmax, "bl-strict-03: k");
  const Space s = Space::grid(p, 0.0, 3.0, 0, levels);
  std::vector<Element> xs;
  std::vector<double> scales;
  for (int j = 0; j <= levels; ++j) {
    const double k = std::ldexp(1.0, j);
    Element u(s);
    for (long m = 1; m <= static_cast<long>(3 * k); ++m) {
      const double a[3] = {0.0, 1.0, 2.0};  // rem(m,3) = 0, 1, 2
      const double v = a[m % 3];
      if (v != 0.0) u += Element::indicator(s, {(m - 1) / k, m / k}, v);
    }
    u.coarsen();
    xs.push_back(std::move(u));
    scales.push_back(k);
  }
  const auto ts = static_cast<std::size_t>(param(ps, "tail_start", static_cast<double>(xs.size() / 2)));
  GeneratedExample g{"bl-strict-03", ps, Seq(std::move(xs), ts), {}, "window (0,3)", scales,
                     {}, {}, {}, {}};
  g.expected = {{"weak limit", 1.0, "cell averages (1+2+0)/3"},
                {"int (u_k - 1)^2", 2.0, "exact integration: (0 + 1 + 1) on each unit"},
                {"p=4 Brezis-Lieb margin", 12.0, "6 * int u^2 (u_k - u)^2 = 6 * 2"}};
  return g;
}

/// x0 = 2 on (0,1], -1 on (1,9];  y0 = -1 on (0,4.5], 1 on (4.5,9].
inline Element nonadditive_x(const Space& s, double n) {
  return periodized(s, 9.0, {1.0, 9.0}, {2.0, -1.0}, n);
}
inline Element nonadditive_y(const Space& s, double n) {
  return periodized(s, 9.0, {4.5, 9.0}, {-1.0, 1.0}, n);
}

inline Space nonadditive_space(double p, double nmax) {
  return Space::grid(p, 0.0, 9.0, 0, log2_exact(nmax, "n") + 1);
}

inline GeneratedExample nonadditive(Params ps) {
  const double nmax = param(ps, "n", 64);
  const double p = param(ps, "p", 4);
  const int top = log2_exact(nmax, "nonadditive-09: n");
  const Space s = nonadditive_space(p, nmax);
  std::vector<Element> xs;
  std::vector<Element> ys;
  std::vector<double> scales;
  for (int j = 0; j <= top; ++j) {
    const double n = std::ldexp(1.0, j);
    xs.push_back(nonadditive_x(s, n));
    ys.push_back(nonadditive_y(s, n));
    scales.push_back(n);
  }
  // tail: n >= 8 by default
  const auto ts = static_cast<std::size_t>(param(ps, "tail_start", std::min(3.0, static_cast<double>(top))));
  GeneratedExample g{"nonadditive-09", ps, Seq(std::move(xs), ts), {}, "window (0,9)", scales,
                     std::move(ys), {}, {}, {}};
  g.expected = {{"weak limit", -2.0 / 3.0, "mean of x0: (2 - 8) / 9"},
                {"Delta limit", 0.0, "int x0^3 = 8 - 8 = 0"},
                {"||x_n||^4", 24.0, "16 + 8"},
                {"||x_n + 2/3||^4", 4096.0 / 81.0 + 8.0 / 81.0, "(8/3)^4 + 8 (1/3)^4"},
                {"mean of (x0 + y0)^3", -3.0, "(1 - 28 + 0) / 9"}};
  return g;
}

inline GeneratedExample nonlsc(Params ps) {
  const double kmax = param(ps, "k", 64);
  const double t = param(ps, "t", 0.1);
  const int top = log2_exact(kmax, "nonlsc-L4: k");
  const Space s = nonadditive_space(4.0, kmax);
  const Element one = Element::indicator(s, s.window(), 1.0);
  const double v_norm = std::pow(24.0, 0.25);
  std::vector<Element> xs;
  std::vector<double> scales;
  for (int j = 0; j <= top; ++j) {
    const double k = std::ldexp(1.0, j);
    // v0 = -x0: 1 on measure 8, -2 on measure 1; normalized in L^4
    Element v = (-1.0 / v_norm) * nonadditive_x(s, k);
    xs.push_back(one - t * v);
    scales.push_back(k);
  }
  const auto ts = static_cast<std::size_t>(param(ps, "tail_start", std::min(3.0, static_cast<double>(top))));
  GeneratedExample g{"nonlsc-L4", ps, Seq(std::move(xs), ts), {}, "window (0,9), u = 1",
                     scales, {one}, {}, {}, {}};
  const double a = (2.0 / 3.0) / v_norm;  // weak limit of v_k
  const double c2 = (8.0 + 4.0) / 9.0 / std::sqrt(24.0);  // mean of v_k^2
  const double drop = 9.0 * (4 * t * a - 6 * t * t * c2) - std::pow(t, 4) * 1.0;
  g.expected = {{"Delta limit", 1.0, "int v0^3 = 0"},
                {"||u||^4 - ||u_k||^4", drop, "expansion with int v_k^3 = 0 per period"}};
  return g;
}

inline GeneratedExample linf_dyadic(Params ps) {
  const int d = static_cast<int>(param(ps, "d", 5));
  const double p = param(ps, "p", 2);
  if (d < 1 || d > 8) throw std::invalid_argument("linf-dyadic: d must lie in [1, 8]");
  std::vector<std::vector<double>> anchors(static_cast<std::size_t>(d));
  double extent = 0.0;
  for (int k = 1; k <= d; ++k) {
    double pos = 0.0;
    for (long j = 1; j <= (1L << k); ++j) {
      anchors[static_cast<std::size_t>(k - 1)].push_back(pos);
      pos += std::ceil(static_cast<double>(j) / std::ldexp(1.0, k)) + k + 1;
    }
    extent = std::max(extent, pos);
  }
  const double hi = std::ldexp(1.0, static_cast<int>(std::ceil(std::log2(extent))));
  const Space s = Space::grid(p, 0.0, hi, 0, d);
  std::vector<Element> xs;
  std::vector<double> scales;
  for (int k = 1; k <= d; ++k) {
    Element x(s);
    const auto& an = anchors[static_cast<std::size_t>(k - 1)];
    for (std::size_t j = 0; j < an.size(); ++j)
      x += Element::indicator(s, {an[j], an[j] + static_cast<double>(j + 1) / std::ldexp(1.0, k)});
    x.coarsen();
    xs.push_back(std::move(x));
    scales.push_back(k);
  }
  const auto ts = static_cast<std::size_t>(param(ps, "tail_start", static_cast<double>(xs.size() / 2)));
  GeneratedExample g{"linf-dyadic", ps, Seq(std::move(xs), ts), {},
                     "window [0," + std::to_string(static_cast<long>(hi)) + "), integer anchors",
                     scales, {}, {}, {}, std::move(anchors)};
  g.expected = {{"distinct shift profiles at k = d", std::ldexp(1.0, d),
                 "one indicator (0, j/2^d) per interval"},
                {"sup norm", 1.0, "indicator"}};
  return g;
}

inline GeneratedExample spreading(Params ps) {
  const auto kmax = static_cast<long>(param(ps, "k", 64));
  const double p = param(ps, "p", 2);
  if (kmax < 1) throw std::invalid_argument("spreading-lp: k must be positive");
  const Space s = Space::sequence(p, 0, kmax - 1);
  std::vector<Element> xs;
  std::vector<double> scales;
  for (long k = 1; k <= kmax; ++k) {
    xs.push_back(Element::indicator(s, {0.0, static_cast<double>(k)},
                                    std::pow(static_cast<double>(k), -1.0 / p)));
    scales.push_back(static_cast<double>(k));
  }
  const auto ts = static_cast<std::size_t>(param(ps, "tail_start", static_cast<double>(xs.size() / 2)));
  GeneratedExample g{"spreading-lp", ps, Seq(std::move(xs), ts), {},
                     "sites [0," + std::to_string(kmax) + ")", scales, {}, {}, {}, {}};
  g.expected = {{"l^p norm", 1.0, "k * (k^{-1/p})^p = 1"},
                {"l^inf norm at k", std::pow(static_cast<double>(kmax), -1.0 / p), "k^{-1/p}"}};
  return g;
}

inline GeneratedExample linfty_mass(Params ps) {
  const int kmax = static_cast<int>(param(ps, "k", 8));
  const double p = param(ps, "p", 2);
  if (kmax < 1 || kmax > 16) throw std::invalid_argument("Linfty-mass: k must lie in [1, 16]");
  const Space s = Space::grid(p, 0.0, std::ldexp(1.0, static_cast<int>(std::ceil(std::log2(kmax + 1.0)))),
                              0, kmax + 2);
  std::vector<Element> xs;
  std::vector<double> scales;
  for (int k = 0; k < kmax; ++k) {
    // three of the four quarters of [k, k + 2^-k): density 3/4 at every k
    const double h = std::ldexp(1.0, -k - 2);
    Element x(s);
    for (int q : {0, 1, 3}) x += Element::indicator(s, {k + q * h, k + (q + 1) * h});
    x.coarsen();
    xs.push_back(std::move(x));
    scales.push_back(k);
  }
  const auto ts = static_cast<std::size_t>(param(ps, "tail_start", static_cast<double>(xs.size() / 2)));
  GeneratedExample g{"Linfty-mass", ps, Seq(std::move(xs), ts), {},
                     "window [0," + std::to_string(static_cast<long>(s.hi())) + ")", scales,
                     {}, {}, {}, {}};
  g.expected = {{"sup norm", 1.0, "indicator"},
                {"recentered unit-window average", 0.75, "density of the kept quarters"}};
  return g;
}

inline GeneratedExample bubbles(Params ps) {
  const double p = param(ps, "p", 4);
  const auto count = static_cast<int>(param(ps, "k", 9));
  const double noise = param(ps, "noise", 0.02);
  const double n1 = param(ps, "norm1", 0.5);
  const double n2 = param(ps, "norm2", 0.4);
  const double n3 = param(ps, "norm3", 0.3);
  const int depth = static_cast<int>(param(ps, "depth", 10));
  if (count < 4 || count + 1 > depth) throw std::invalid_argument("bubbles: need 4 <= k < depth");
  const Space s = Space::grid(p, -16.0, 32.0, 0, depth);
  const std::vector<Element> w{bubble_shape(s, n1), bubble_shape(s, n2), bubble_shape(s, n3)};
  std::vector<DislocationPath> paths(3);
  std::vector<Element> xs;
  std::vector<double> scales;
  // k starts at 1 so that the three bubbles never overlap
  for (int k = 1; k <= count; ++k) {
    paths[0].push_back({0, static_cast<double>(k)});
    paths[1].push_back({0, -static_cast<double>(k)});
    paths[2].push_back({k, 0.0});
    Element x(s);
    for (int b = 0; b < 3; ++b) x += apply(paths[b].back(), w[b]);
    // Rademacher oscillation of frequency 2^k on [12, 20): weakly null
    if (noise != 0.0) {
      Element r(s, k, std::vector<double>(s.cells(k), 0.0));
      auto c = r.coeffs();
      const auto first = static_cast<std::size_t>(std::ldexp(12.0 - s.lo(), k));
      const auto last = static_cast<std::size_t>(std::ldexp(20.0 - s.lo(), k));
      for (std::size_t i = first; i < last; ++i) c[i] = ((i - first) % 2 == 0) ? noise : -noise;
      x += r;
    }
    x.coarsen();
    xs.push_back(std::move(x));
    scales.push_back(k);
  }
  const auto ts = static_cast<std::size_t>(param(ps, "tail_start", count / 2));
  GeneratedExample g{"bubbles", ps, Seq(std::move(xs), ts), {},
                     "window [-16,32): bubbles within [-9,10), noise on [12,20)", scales,
                     {}, std::move(paths), w, {}};
  g.expected = {{"profiles", 3.0, "planted"},
                {"profile norm 1", n1, "planted"},
                {"profile norm 2", n2, "planted"},
                {"profile norm 3", n3, "planted"},
                {"remainder norm", noise * std::pow(8.0, 1.0 / p), "noise amplitude on measure 8"}};
  return g;
}

}  // namespace detail

/// Builds the named example. Unknown names raise std::invalid_argument
/// listing the available ones.
inline GeneratedExample generate(const std::string& name, const Params& params = {}) {
  if (name == "bl-strict-03") return detail::bl_strict(params);
  if (name == "nonadditive-09") return detail::nonadditive(params);
  if (name == "nonlsc-L4") return detail::nonlsc(params);
  if (name == "linf-dyadic") return detail::linf_dyadic(params);
  if (name == "spreading-lp") return detail::spreading(params);
  if (name == "Linfty-mass") return detail::linfty_mass(params);
  if (name == "bubbles") return detail::bubbles(params);
  std::string list;
  for (const auto& n : example_names()) list += (list.empty() ? "" : ", ") + n;
  throw std::invalid_argument("unknown example '" + name + "'; available: " + list);
}

}  // namespace concentra

#endif  // CONCENTRA_CORPUS_HPP
