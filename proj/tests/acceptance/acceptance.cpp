// Acceptance suite: one PASS/FAIL line per criterion, tolerances pinned here.
// usage: acceptance <concentra binary> <run directory>

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "concentra/concentra.hpp"
#include "../oracles.hpp"

using namespace concentra;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string g_cli;
fs::path g_runs;

// ---------------------------------------------------------------------------

Outcome duality() {
  constexpr double kTol = 1e-10;
  constexpr double kSeconds = 5.0;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  double worst = 0.0;
  const auto t0 = Clock::now();
  for (double p : {1.5, 2.0, 3.0, 4.0}) {
    const Space s = Space::grid(p, 0.0, 4.0, 0, 4);
    for (int i = 0; i < 1000; ++i) {
      std::vector<double> c(s.cells(4));
      for (double& v : c) v = u(rng);
      const Element x(s, 4, c);
      const DualElement xs = duality_conjugate(x);
      worst = std::max({worst, std::fabs(pairing(xs, x) - norm(x)) / norm(x), std::fabs(norm(xs) - 1.0)});
    }
  }
  const double t = seconds_since(t0);
  return {worst <= kTol && t < kSeconds,
          "4000 elements, worst relative error " + fmt("%.2e", worst) + ", " + fmt("%.2f", t) + " s"};
}

Outcome modulus() {
  constexpr double kTol = 1e-4;
  double worst = 0.0;
  for (double p : {2.0, 3.0, 4.0})
    for (double eps : {0.25, 0.5, 1.0, 1.5, 2.0})
      worst = std::max(worst, std::fabs(modulus_by_extremal_search(p, eps) - oracle::modulus_closed_form(p, eps)));
  return {worst <= kTol, "max |search - closed form| = " + fmt("%.2e", worst)};
}

Outcome chebyshev() {
  constexpr double kTol = 1e-4;
  constexpr double kSeconds = 1.0;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> count(2, 8);
  const double ps[] = {1.5, 2.0, 3.0, 4.0};
  double worst = 0.0, slowest = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double p = ps[i % 4];
    const Space s = Space::sequence(p, 0, 1);
    std::vector<Element> pts;
    std::vector<std::array<double, 2>> raw;
    for (int j = count(rng); j > 0; --j) {
      raw.push_back({u(rng), u(rng)});
      pts.emplace_back(s, 0, std::vector<double>{raw.back()[0], raw.back()[1]});
    }
    const auto t0 = Clock::now();
    const auto r = chebyshev_center(pts);
    slowest = std::max(slowest, seconds_since(t0));
    const auto ref = oracle::chebyshev_2d(raw, p);
    worst = std::max({worst, std::fabs(r.center.coeffs()[0] - ref[0]), std::fabs(r.center.coeffs()[1] - ref[1])});
  }
  return {worst <= kTol && slowest < kSeconds,
          "20 instances, max center deviation " + fmt("%.2e", worst) + ", slowest " + fmt("%.3f", slowest) + " s"};
}

/// u + c (escaping bump) + 1e-7 (-1)^k v / (k+1), observed on [0, 8).
Seq escaping(const Space& s, std::mt19937_64& rng, Element* u_out) {
  const int level = 0;
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const std::size_t n = 40;
  std::vector<double> base(s.cells(level), 0.0), wiggle(s.cells(level), 0.0);
  Element probe(s, level, base);
  for (std::size_t i = 0; i < base.size(); ++i) {
    const double lo = probe.cell_lo(i);
    if (lo < 4.0) base[i] = u(rng);
    if (lo < 8.0) wiggle[i] = u(rng);
  }
  const Element ue(s, level, base), ve(s, level, wiggle);
  const double c = 0.5 + std::fabs(u(rng));
  std::vector<Element> xs;
  for (std::size_t k = 0; k < n; ++k) {
    const double at = 8.0 + static_cast<double>(k);
    xs.push_back(ue + Element::basis(s, static_cast<long>(at), c) + ((k % 2 ? -1e-7 : 1e-7) / static_cast<double>(k + 1)) * ve);
  }
  *u_out = ue;
  return Seq(std::move(xs), n / 2);
}

Outcome lp_agreement() {
  constexpr double kTol = 1e-6;
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> pd(1.5, 4.0);
  const Interval window{0, 8};
  double worst = 0.0;
  int certified = 0;
  for (int i = 0; i < 20; ++i) {
    // 10 in l^2, 10 in l^p with random p
    const Space s = Space::sequence(i < 10 ? 2.0 : pd(rng), 0, 63);
    Element u(s);
    const Seq seq = escaping(s, rng, &u);
    const auto dict = TestDictionary::dyadic(s, window, 0);
    const Element weak = weak_limit_estimate(seq, dict).limit;
    AsymptoticCenterOptions opt;
    opt.window = window;
    const Element target = asymptotic_center(seq, opt).center;
    worst = std::max(worst, distance(target, weak));
    certified += delta_limit_dual(seq, target, dict).delta_convergent ? 1 : 0;
  }
  return {worst <= kTol && certified == 20,
          "20 constructions, max ||Delta target - weak limit|| = " + fmt("%.2e", worst) + ", certified " +
              std::to_string(certified) + "/20"};
}

Outcome opial() {
  constexpr double kWeakTol = 1e-3;
  constexpr double kGap = -1e-2;
  const auto g = generate("nonadditive-09");
  const auto dict = TestDictionary::dyadic(g.seq.space(), 3);
  const Element w = weak_limit_estimate(g.seq, dict).limit;
  double dev = 0.0;
  for (double c : w.coeffs()) dev = std::max(dev, std::fabs(c + 2.0 / 3.0));
  const bool at_zero = delta_limit_dual(g.seq, Element(g.seq.space()), dict).delta_convergent;
  const auto late = generate("nonadditive-09", {{"tail_start", 5}});  // n >= 32
  const double gap = opial_gap(late.seq, w, {Element(late.seq.space())});
  return {dev <= kWeakTol && at_zero && gap < kGap,
          "weak limit deviation " + fmt("%.1e", dev) + ", Delta at 0 " + (at_zero ? "certified" : "not certified") +
              ", opial gap (n >= 32) " + fmt("%.4f", gap)};
}

Outcome elementary() {
  double worst = INFINITY;
  for (double p : {3.0, 3.5, 4.0, 6.0}) worst = std::min(worst, elementary_scan(p, Branch::Plus, 10.0, 1e-3).min_value);
  const auto low = elementary_scan(2.5, Branch::Plus, 10.0, 1e-3);
  const double at_one = elementary_f(3.0, 1.0, Branch::Plus);
  return {worst >= -1e-12 && low.min_value < -1e-6 && at_one == 0.0,
          "min f+ (p >= 3) " + fmt("%.2e", worst) + ", p = 2.5 witness t = " + fmt("%.3f", low.argmin) +
              " with f+ = " + fmt("%.4f", low.min_value) + ", f+(1) at p = 3 is " + fmt("%g", at_one)};
}

Outcome bl_strict() {
  const auto g = generate("bl-strict-03");
  const Element one = Element::indicator(g.seq.space(), g.seq.space().window(), 1.0);
  const Element d = g.seq[g.seq.size() - 1] - one;
  double cross = 0.0;
  for (double c : d.coeffs()) cross += c * c * d.cell_width();
  const double margin = bl_lower_bound(g.seq, one).margin;
  const double ref = oracle::bl_margin(64, 4.0);
  return {std::fabs(cross - 2.0) <= 1e-3 && std::fabs(margin - 12.0) <= 1e-2 && std::fabs(margin - ref) <= 1e-9,
          "k = 64: int (u_k - 1)^2 = " + fmt("%.6f", cross) + ", margin " + fmt("%.6f", margin) +
              " (direct sum " + fmt("%.6f", ref) + ")"};
}

struct BubblesRun {
  GeneratedExample g;
  ProfileDecomposition d;
  double seconds = 0.0;
};

const BubblesRun& bubbles_run() {
  static const BubblesRun run = [] {
    auto g = generate("bubbles");
    const auto t0 = Clock::now();
    auto d = profile_decomposition(g.seq, SearchGrid::for_space(g.seq.space()));
    return BubblesRun{std::move(g), std::move(d), seconds_since(t0)};
  }();
  return run;
}

Outcome bubbles() {
  const auto& [g, d, secs] = bubbles_run();
  double worst = 0.0;
  for (std::size_t b = 0; b < g.profiles.size(); ++b) {
    double best = INFINITY;
    for (const auto& p : d.profiles) {
      const std::size_t k = p.path.size() - 1;
      const Dislocation h = compose(inverse(p.path[k]), g.paths[b][d.index_map[k]]);
      best = std::min(best, distance(p.w, apply_windowed(h, g.profiles[b], p.w.space().window())) /
                                norm(g.profiles[b]));
    }
    worst = std::max(worst, best);
  }
  const auto m = decoupling_check(d);
  bool decoupled = true;
  for (std::size_t a = 0; a < m.size(); ++a)
    for (std::size_t b = 0; b < m.size(); ++b)
      if (a != b) decoupled = decoupled && m[a][b];
  const bool budget = d.energy.lhs <= 1.0 + 1e-2;
  return {d.profiles.size() == 3 && worst <= 1e-2 && decoupled && budget && secs < 60.0,
          std::to_string(d.profiles.size()) + " profiles, max aligned error " + fmt("%.2e", worst) +
              ", off-diagonal decoupling " + (decoupled ? "all true" : "NOT all true") + ", budget " +
              fmt("%.4f", d.energy.lhs) + ", " + fmt("%.2f", secs) + " s"};
}

Outcome energy_drop() {
  const auto& d = bubbles_run().d;
  double worst = INFINITY;
  for (const auto& s : d.steps) worst = std::min(worst, s.drop - (s.delta - 1e-6));
  return {!d.steps.empty() && worst >= 0.0,
          std::to_string(d.steps.size()) + " steps, min (drop - delta + 1e-6) = " + fmt("%.4e", worst)};
}

Outcome cocompactness() {
  const auto g = generate("spreading-lp");
  const auto d = profile_decomposition(g.seq, SearchGrid::for_space(g.seq.space()));
  const Element& last = d.remainder[d.remainder.size() - 1];
  const double linf = sup_norm(last);
  const double lp = norm(last);
  const auto& b = bubbles_run().d;
  const auto wn = d_weak_null_check(b.remainder, SearchGrid::for_space(b.remainder.space()));
  return {linf <= 1e-2 && std::fabs(lp - 1.0) <= 1e-2 && wn.weak_null,
          "spreading-lp k = 64: remainder l^inf " + fmt("%.4f", linf) + " (bound 1e-2), l^p " + fmt("%.4f", lp) +
              "; bubbles remainder " + (wn.weak_null ? "D-weakly null" : "NOT D-weakly null") +
              " (p-functional " + fmt("%.2e", wn.value) + ")"};
}

// ---------------------------------------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

/// Runs the CLI with `args`, writing reports into `dir`; returns every
/// output byte (stdout plus files, in name order) or nullopt on a bad exit.
std::optional<std::string> cli_bytes(const std::string& args, const fs::path& dir) {
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path out = dir / "stdout.txt";
  const std::string cmd = "'" + g_cli + "' " + args + " > '" + out.string() + "' 2> /dev/null";
  const int status = std::system(cmd.c_str());
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) return std::nullopt;
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::string all;
  for (const auto& f : files) all += f.filename().string() + "\n" + slurp(f);
  return all;
}

Outcome determinism() {
  const std::vector<std::string> commands{
      "examples",
      "analyze --example nonadditive-09",
      "analyze --example bl-strict-03 --out {}",
      "decompose --example bubbles --out {}",
      "decompose --example spreading-lp",
      "verify --out {}",
      "verify --check midpoint --seed 7"};
  int same = 0;
  std::string first_bad;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    std::optional<std::string> runs[2];
    for (int r = 0; r < 2; ++r) {
      // the same output directory both times, so the recorded config is equal
      const fs::path dir = g_runs / ("cmd" + std::to_string(i));
      std::string args = commands[i];
      if (const auto at = args.find("{}"); at != std::string::npos)
        args.replace(at, 2, "'" + (dir / "reports").string() + "'");
      runs[r] = cli_bytes(args, dir);
    }
    if (runs[0] && runs[1] && *runs[0] == *runs[1])
      ++same;
    else if (first_bad.empty())
      first_bad = commands[i];
  }
  return {same == static_cast<int>(commands.size()),
          std::to_string(same) + "/" + std::to_string(commands.size()) + " commands byte-identical" +
              (first_bad.empty() ? "" : ", first mismatch: " + first_bad)};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: acceptance <concentra binary> <run directory>\n";
    return 2;
  }
  g_cli = argv[1];
  g_runs = argv[2];
  fs::create_directories(g_runs);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"duality identities", duality},
      {"modulus cross-check", modulus},
      {"Chebyshev solver vs brute force", chebyshev},
      {"weak and Delta limits agree (l^2, l^p)", lp_agreement},
      {"Opial failure in L^4", opial},
      {"elementary inequality boundary", elementary},
      {"Brezis-Lieb strictness", bl_strict},
      {"profile recovery", bubbles},
      {"energy drop per extraction", energy_drop},
      {"cocompactness demo", cocompactness},
      {"CLI determinism", determinism}};

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << i + 1 << "] " << criteria[i].first << ": " << o.detail
              << std::endl;
  }
  std::cout << criteria.size() - failed << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
