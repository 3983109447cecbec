#ifndef CONCENTRA_MODULUS_HPP
#define CONCENTRA_MODULUS_HPP

// Modulus of convexity of L^p and the midpoint inequalities built on it.

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "concentra/space.hpp"

namespace concentra {

namespace detail {

inline void check_eps(double eps) {
  if (!(eps >= 0.0 && eps <= 2.0))
    throw std::domain_error("modulus of convexity: eps must lie in [0, 2]");
}

inline double norm2d(double a, double b, double p) {
  return std::pow(abs_pow(a, p) + abs_pow(b, p), 1.0 / p);
}

}  // namespace detail

/// delta(eps) of L^p (equivalently l^p, both share the two-atom extremals).
///
/// p >= 2: 1 - (1 - (eps/2)^p)^{1/p}. For 1 < p < 2 the extremal pair is
/// x = (s + eps/2, s - eps/2), y = (s - eps/2, s + eps/2) on two atoms of
/// equal weight, with s = 1 - delta fixed by ||x|| = 1; s is found by
/// bisection to round-off.
inline double modulus_of_convexity(double p, double eps) {
  detail::check_eps(eps);
  if (!(p > 1.0)) throw std::domain_error("modulus of convexity: p must exceed 1");
  if (eps == 0.0) return 0.0;
  if (eps == 2.0) return 1.0;
  const double half = eps / 2.0;
  if (p >= 2.0) return 1.0 - std::pow(1.0 - std::pow(half, p), 1.0 / p);

  // (s + half)^p + |s - half|^p is increasing in s >= 0; solve for value 2.
  auto lhs = [&](double s) {
    return detail::abs_pow(s + half, p) + detail::abs_pow(s - half, p);
  };
  double lo = 0.0;
  double hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    (lhs(mid) < 2.0 ? lo : hi) = mid;
  }
  return 1.0 - 0.5 * (lo + hi);
}

inline double modulus_of_convexity(const Space& space, double eps) {
  return modulus_of_convexity(space.p(), eps);
}

/// Independent route to delta(eps): search all unit pairs of l^p_2 at
/// distance eps and minimize 1 - ||(x + y)/2||. Used as a cross-check.
inline double modulus_by_extremal_search(double p, double eps, int samples = 2000) {
  detail::check_eps(eps);
  if (eps == 0.0) return 0.0;
  auto unit = [p](double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    const double n = detail::norm2d(c, s, p);
    return std::array<double, 2>{c / n, s / n};
  };
  // For fixed x at angle phi, find y counter-clockwise with ||x - y|| = eps.
  // Near the antipode ||x - y|| is flat to fourth order for p = 4, so the
  // bisection cannot resolve eps = 2; strict convexity forces y = -x there.
  auto gap_at = [&](double phi) {
    const auto x = unit(phi);
    if (eps == 2.0) return 1.0 - detail::norm2d(0.5 * (x[0] - x[0]), 0.5 * (x[1] - x[1]), p);
    double lo = phi;
    double hi = phi + std::numbers::pi;
    for (int it = 0; it < 100; ++it) {
      const double mid = 0.5 * (lo + hi);
      const auto y = unit(mid);
      (detail::norm2d(x[0] - y[0], x[1] - y[1], p) < eps ? lo : hi) = mid;
    }
    const auto y = unit(0.5 * (lo + hi));
    return 1.0 - detail::norm2d(0.5 * (x[0] + y[0]), 0.5 * (x[1] + y[1]), p);
  };

  // l^p_2 is invariant under quarter turns, so phi in [0, pi/2) suffices.
  const double span = std::numbers::pi / 2.0;
  double best = 2.0;
  double best_phi = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double phi = span * i / samples;
    const double g = gap_at(phi);
    if (g < best) {
      best = g;
      best_phi = phi;
    }
  }
  // golden-section polish around the best sample
  double a = best_phi - span / samples;
  double b = best_phi + span / samples;
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double gc = gap_at(c);
  double gd = gap_at(d);
  for (int it = 0; it < 80; ++it) {
    if (gc < gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - invphi * (b - a);
      gc = gap_at(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + invphi * (b - a);
      gd = gap_at(d);
    }
  }
  return std::min({best, gc, gd});
}

struct MidpointGapReport {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

/// Checks ||(u + v)/2|| <= C1 - C2 delta(||u - v|| / C2) for
/// C1, C2 >= max(||u||, ||v||).
inline MidpointGapReport midpoint_gap_check(const Element& u, const Element& v,
                                            double c1, double c2) {
  const double nu = norm(u);
  const double nv = norm(v);
  const double m = std::max(nu, nv);
  if (m == 0.0) throw std::invalid_argument("midpoint gap: u and v are both zero");
  const double slack = 1e-12 * m;
  if (c1 < m - slack || c2 < m - slack)
    throw std::invalid_argument("midpoint gap: C1 and C2 must be >= max(||u||, ||v||)");
  MidpointGapReport r;
  r.lhs = norm(0.5 * (u + v));
  const double eps = std::min(2.0, norm(u - v) / c2);
  r.rhs = c1 - c2 * modulus_of_convexity(u.space(), eps);
  r.holds = r.lhs <= r.rhs + 1e-10 * std::max(1.0, c1);
  return r;
}

}  // namespace concentra

#endif  // CONCENTRA_MODULUS_HPP
