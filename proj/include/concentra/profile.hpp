#ifndef CONCENTRA_PROFILE_HPP
#define CONCENTRA_PROFILE_HPP

// Profile search: recenter a sequence along a dislocation path, estimate
// the Delta-limit of the recentered tail, and keep it only when the
// Delta-certificate passes. p_functional is the largest certified profile
// norm over the candidate paths (a lower estimate, never a certified sup).

#include <optional>
#include <string>
#include <vector>

#include "concentra/convergence.hpp"
#include "concentra/dislocation.hpp"

namespace concentra {

struct ProfileOptions {
  double tol = 1e-3;  // profiles with smaller norm count as zero
  TrendOptions trend;
  AsymptoticCenterOptions center;
};

struct ProfileCandidate {
  std::string source;                 // "identity" or "locator"
  DislocationPath path;               // one dislocation per stored index
  Element profile;                    // Delta-limit of the recentered tail
  double norm = 0.0;
  std::vector<std::size_t> index_map; // subsequence used, empty when none
  DeltaVerdict verdict;
};

struct PFunctionalResult {
  double value = 0.0;
  std::optional<ProfileCandidate> best;  // the witness of `value`
  std::optional<ProfileCandidate> identity;
  std::optional<ProfileCandidate> located;
};

/// Path from concentration_locator at every stored index (identity on zero terms).
inline DislocationPath locator_path(const Seq& seq, const SearchGrid& grid) {
  DislocationPath path;
  path.reserve(seq.size());
  for (const auto& x : seq)
    path.push_back(x.is_zero() ? Dislocation{} : concentration_locator(x, grid));
  return path;
}

/// g_k^{-1} x_k seen through the observation window.
inline Seq recenter(const Seq& seq, const DislocationPath& path, const Interval& window) {
  if (path.size() != seq.size()) throw std::invalid_argument("recenter: path length mismatch");
  std::vector<Element> out;
  out.reserve(seq.size());
  for (std::size_t k = 0; k < seq.size(); ++k)
    out.push_back(apply_windowed(inverse(path[k]), seq[k], window));
  return Seq(std::move(out), seq.tail_start());
}

inline Interval observation_window(const Space& space, const SearchGrid& grid) {
  return intersect(grid.observation_window(), space.window());
}

inline TestDictionary observation_dictionary(const Space& space, const SearchGrid& grid) {
  return TestDictionary::dyadic(space, observation_window(space, grid), grid.dict_depth);
}

/// Certified profile along `path`, if any.
inline std::optional<ProfileCandidate> profile_along(const Seq& seq, const DislocationPath& path,
                                                     const SearchGrid& grid,
                                                     const ProfileOptions& opt = {},
                                                     std::string source = "path") {
  const Interval window = observation_window(seq.space(), grid);
  const Seq recentered = recenter(seq, path, window);
  bool all_zero = true;
  for (std::size_t k = recentered.tail_start(); k < recentered.size(); ++k)
    all_zero = all_zero && recentered[k].is_zero();
  if (all_zero || recentered.tail_length() < 4) return std::nullopt;
  const TestDictionary dict = observation_dictionary(seq.space(), grid);

  auto certify = [&](const Seq& s, std::vector<std::size_t> index_map)
      -> std::optional<ProfileCandidate> {
    try {
      const auto c = asymptotic_center(s, opt.center);
      const double n = norm(c.center);
      if (n < opt.tol) return std::nullopt;
      DeltaVerdict v = delta_limit_dual(s, c.center, dict, opt.trend);
      if (!v.delta_convergent) return std::nullopt;
      DislocationPath p = path;
      if (!index_map.empty()) {
        p.clear();
        for (auto k : index_map) p.push_back(path[k]);
      }
      return ProfileCandidate{source, std::move(p), c.center, n, std::move(index_map),
                              std::move(v)};
    } catch (const InsufficientTail&) {
      return std::nullopt;
    } catch (const ChebyshevNonConvergence&) {
      return std::nullopt;
    }
  };

  if (auto c = certify(recentered, {})) return c;
  if (recentered.size() < 8) return std::nullopt;
  const auto sub = regular_subsequence(recentered, window, opt.center.solver);
  if (sub.indices.size() == recentered.size()) return std::nullopt;
  const Seq s = recentered.subsequence(sub.indices);
  if (s.tail_length() < 4) return std::nullopt;
  return certify(s, sub.indices);
}

/// Largest certified profile norm over the identity path and the locator path.
inline PFunctionalResult p_functional(const Seq& seq, const SearchGrid& grid,
                                      const ProfileOptions& opt = {}) {
  PFunctionalResult r;
  r.identity = profile_along(seq, DislocationPath(seq.size()), grid, opt, "identity");
  bool nonzero = false;
  for (const auto& x : seq) nonzero = nonzero || !x.is_zero();
  if (nonzero) {
    const auto path = locator_path(seq, grid);
    if (path != DislocationPath(seq.size()))
      r.located = profile_along(seq, path, grid, opt, "locator");
  }
  for (const auto* c : {&r.identity, &r.located})
    if (*c && (*c)->norm > r.value) {
      r.value = (*c)->norm;
      r.best = **c;
    }
  return r;
}

struct WeakNullReport {
  bool weak_null = false;
  double value = 0.0;
  std::optional<DislocationPath> witness;
};

/// True iff no dislocation path extracts a profile of norm >= tol.
inline WeakNullReport d_weak_null_check(const Seq& seq, const SearchGrid& grid,
                                        const ProfileOptions& opt = {}) {
  const auto r = p_functional(seq, grid, opt);
  WeakNullReport w;
  w.value = r.value;
  w.weak_null = r.value < opt.tol;
  if (r.best) w.witness = r.best->path;
  return w;
}

}  // namespace concentra

#endif  // CONCENTRA_PROFILE_HPP
