#ifndef CONCENTRA_DECOMPOSITION_HPP
#define CONCENTRA_DECOMPOSITION_HPP

// Iterative profile extraction: u_k = sum_n g_k^(n) w^(n) + r_k.
//
// Greedy realization: each step takes the identity profile when the
// sequence itself has a certified nonzero Delta-limit, otherwise the
// largest certified profile, and subtracts g_k w from every stored term.
// The sigma functional is traced as a diagnostic only.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "concentra/modulus.hpp"
#include "concentra/profile.hpp"

namespace concentra {

struct DecompositionOptions {
  std::size_t max_profiles = 16;
  double budget_tol = 1e-2;
  double drop_slack = 1e-6;  // allowed shortfall in the per-step energy drop
  ProfileOptions profile;
};

struct Profile {
  std::string source;
  DislocationPath path;  // indexed like the final (renumbered) sequence
  Element w;
  double norm = 0.0;
};

struct StepReport {
  double sup_before = 0.0;  // tail sup of the sequence entering the step
  double sup_after = 0.0;
  double drop = 0.0;
  double delta = 0.0;       // modulus of convexity at ||w||
  bool drop_ok = false;     // drop >= delta - drop_slack
  bool subsequence = false; // the step renumbered the sequence
};

struct SigmaEntry {
  double sup_norm = 0.0;  // tail sup before extraction j (the last entry: remainder)
  double sigma = 0.0;     // greedy lower bound: min of later sup norms
};

struct LadderCluster {
  int stage = 0;                    // j: cluster bound 2^-j (stage -1: bound 2)
  std::vector<std::size_t> members; // profile indices
  double tail_norm = 0.0;           // tail max of ||sum_{n in J} g_k w_n||
  double bound = 0.0;
  bool holds = false;
};

struct EnergyReport {
  double limsup_remainder = 0.0;
  double sum_delta_profiles = 0.0;
  double lhs = 0.0;
  bool budget_ok = false;
  std::vector<bool> tail_lemma;  // delta(||w_j||) <= sup_j - sigma_j + slack
  std::vector<LadderCluster> ladder;
};

struct ProfileDecomposition {
  std::vector<Profile> profiles;
  Seq source;                        // the input, renumbered by index_map
  Seq remainder;
  std::vector<std::size_t> index_map;  // stored index -> original index
  std::vector<StepReport> steps;
  std::vector<SigmaEntry> sigma_trace;
  EnergyReport energy;
  bool stopped_by_tolerance = false;
};

class EnergyBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// g w as it appears in the ambient window (mass leaving the window is cut).
inline Element place(const Dislocation& g, const Element& w) {
  return apply_windowed(g, w, w.space().window());
}

struct ExtractionStep {
  ProfileCandidate candidate;
  Seq next;  // y_k = x_k - g_k w along the (possibly renumbered) sequence
};

/// One greedy extraction, or nullopt when no certified profile exceeds tol.
inline std::optional<ExtractionStep> extract_profile_step(const Seq& seq, const SearchGrid& grid,
                                                          const ProfileOptions& opt = {}) {
  const auto r = p_functional(seq, grid, opt);
  if (!r.best) return std::nullopt;
  ProfileCandidate c = r.identity ? *r.identity : *r.best;
  const Seq base = c.index_map.empty() ? seq : seq.subsequence(c.index_map);
  std::vector<Element> next;
  next.reserve(base.size());
  for (std::size_t k = 0; k < base.size(); ++k) next.push_back(base[k] - place(c.path[k], c.profile));
  return ExtractionStep{std::move(c), Seq(std::move(next), base.tail_start())};
}

/// k-th term of sum_n g_k^(n) w^(n) + r_k, for checking reconstruction.
inline Element reconstruct(const ProfileDecomposition& d, std::size_t k) {
  Element acc = d.remainder[k];
  for (const auto& p : d.profiles) acc += place(p.path[k], p.w);
  return acc;
}

inline std::vector<std::vector<bool>> decoupling_check(const ProfileDecomposition& d,
                                                       const WeakNullOptions& opt = {}) {
  const std::size_t n = d.profiles.size();
  std::vector<std::vector<bool>> m(n, std::vector<bool>(n, false));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      m[a][b] = path_weak_null(relative_path(d.profiles[a].path, d.profiles[b].path), opt);
  return m;
}

/// limsup ||r_k|| + sum delta(||w||), tail-lemma checks and the 2^-j ladder.
inline EnergyReport energy_budget(const ProfileDecomposition& d, double budget_tol = 1e-2,
                                  double slack = 1e-6) {
  const Space& space = d.remainder.space();
  EnergyReport e;
  e.limsup_remainder = tail_sup_norm(d.remainder);
  for (const auto& p : d.profiles) e.sum_delta_profiles += modulus_of_convexity(space, std::min(p.norm, 2.0));
  e.lhs = e.limsup_remainder + e.sum_delta_profiles;
  e.budget_ok = e.lhs <= 1.0 + budget_tol;

  // Stage of step j: the largest j' with sup_j - sigma_j < delta(2^-j').
  std::vector<int> stage(d.profiles.size(), -1);
  for (std::size_t j = 0; j < d.profiles.size(); ++j) {
    const double gap = d.sigma_trace[j].sup_norm - d.sigma_trace[j].sigma;
    e.tail_lemma.push_back(modulus_of_convexity(space, std::min(d.profiles[j].norm, 2.0)) <=
                           gap + slack);
    for (int s = 0; s < 60 && gap < modulus_of_convexity(space, std::ldexp(1.0, -s)); ++s)
      stage[j] = s;
  }
  for (int s = -1; s < 60; ++s) {
    LadderCluster c;
    c.stage = s;
    for (std::size_t j = 0; j < stage.size(); ++j)
      if (stage[j] == s) c.members.push_back(j);
    if (c.members.empty()) continue;
    c.bound = s < 0 ? 2.0 : std::ldexp(1.0, -s);
    for (std::size_t k = d.remainder.tail_start(); k < d.remainder.size(); ++k) {
      Element sum(space);
      for (auto j : c.members) sum += place(d.profiles[j].path[k], d.profiles[j].w);
      c.tail_norm = std::max(c.tail_norm, norm(sum));
    }
    c.holds = c.tail_norm <= c.bound + slack;
    e.ladder.push_back(std::move(c));
  }
  return e;
}

/// Greedy profile decomposition of a sequence with sup ||u_k|| <= 1.
/// Throws EnergyBudgetExceeded when limsup ||r_k|| + sum delta(||w||)
/// exceeds 1 + budget_tol.
inline ProfileDecomposition profile_decomposition(const Seq& seq, const SearchGrid& grid,
                                                  const DecompositionOptions& opt = {}) {
  if (sup_norm(seq) > 1.0 + 1e-12)
    throw std::invalid_argument("profile_decomposition: normalize so that sup ||u_k|| <= 1");
  ProfileDecomposition d{{}, seq, seq, {}, {}, {}, {}, false};
  d.index_map.resize(seq.size());
  for (std::size_t k = 0; k < seq.size(); ++k) d.index_map[k] = k;

  std::vector<double> sups;
  while (true) {
    const double before = tail_sup_norm(d.remainder);
    if (d.profiles.size() >= opt.max_profiles) {
      sups.push_back(before);
      break;
    }
    auto step = extract_profile_step(d.remainder, grid, opt.profile);
    if (!step) {
      d.stopped_by_tolerance = true;
      sups.push_back(before);
      break;
    }
    auto& c = step->candidate;
    if (c.norm > 2.0 + 1e-9)
      throw std::logic_error("profile_decomposition: profile norm exceeds 2");
    StepReport s;
    s.sup_before = before;
    if (!c.index_map.empty()) {
      s.subsequence = true;
      // renumber everything recorded so far; `before` is re-read on the subsequence
      std::vector<std::size_t> global;
      for (auto k : c.index_map) global.push_back(d.index_map[k]);
      d.index_map = std::move(global);
      d.source = d.source.subsequence(c.index_map);
      for (auto& p : d.profiles) {
        DislocationPath q;
        for (auto k : c.index_map) q.push_back(p.path[k]);
        p.path = std::move(q);
      }
      s.sup_before = tail_sup_norm(d.remainder.subsequence(c.index_map));
    }
    sups.push_back(s.sup_before);
    d.remainder = std::move(step->next);
    s.sup_after = tail_sup_norm(d.remainder);
    s.drop = s.sup_before - s.sup_after;
    s.delta = modulus_of_convexity(seq.space(), std::min(c.norm, 2.0));
    s.drop_ok = s.drop >= s.delta - opt.drop_slack;
    d.steps.push_back(s);
    d.profiles.push_back({c.source, std::move(c.path), std::move(c.profile), c.norm});
  }

  for (std::size_t j = 0; j < sups.size(); ++j) {
    double sigma = sups[j];
    for (std::size_t i = j; i < sups.size(); ++i) sigma = std::min(sigma, sups[i]);
    d.sigma_trace.push_back({sups[j], sigma});
  }
  d.energy = energy_budget(d, opt.budget_tol, opt.drop_slack);
  if (!d.energy.budget_ok)
    throw EnergyBudgetExceeded("energy budget exceeded: " + std::to_string(d.energy.lhs));
  return d;
}

}  // namespace concentra

#endif  // CONCENTRA_DECOMPOSITION_HPP
