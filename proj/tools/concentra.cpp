// concentra: analyze / decompose / verify on corpus examples or input files.
//
// Exit codes: 0 success, 1 a check or the energy budget failed, 2 usage or
// configuration error. Reports go to <out>/<command>.json (plus a CSV
// series) or to stdout when --out is not given.

#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "concentra/concentra.hpp"
#include "concentra/io.hpp"

namespace {

using namespace concentra;
using io::Json;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::string space_kind;  // "grid" or "seq"; input files without a space header
  std::vector<double> p;
  std::string window;
  std::optional<int> depth;
  int dict_depth = 3;
  std::string example;
  std::vector<std::string> params;  // key=value for the example
  std::string input;
  std::optional<double> tol;
  std::size_t max_profiles = 16;
  std::optional<std::size_t> tail_start;
  std::uint64_t seed = 1;
  std::string out;
  std::vector<std::string> checks;

  Json to_json() const {
    Json j;
    j["command"] = command;
    j["space"] = space_kind;
    j["p"] = p;
    j["window"] = window;
    j["depth"] = depth ? Json(*depth) : Json(nullptr);
    j["dict_depth"] = dict_depth;
    j["example"] = example;
    j["params"] = params;
    j["input"] = input;
    j["tol"] = tol ? Json(*tol) : Json(nullptr);
    j["max_profiles"] = max_profiles;
    j["tail_start"] = tail_start ? Json(*tail_start) : Json(nullptr);
    j["seed"] = seed;
    j["out"] = out;
    j["checks"] = checks;
    return j;
  }
};

Interval parse_window(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ConfigError("--window expects a:b, got '" + text + "'");
  try {
    std::size_t used = 0;
    const double a = std::stod(text.substr(0, colon), &used);
    if (used != colon) throw std::invalid_argument("trailing");
    const std::string rest = text.substr(colon + 1);
    const double b = std::stod(rest, &used);
    if (used != rest.size()) throw std::invalid_argument("trailing");
    return {a, b};
  } catch (const std::logic_error&) {
    throw ConfigError("--window expects numbers a:b, got '" + text + "'");
  }
}

Params parse_params(const std::vector<std::string>& items) {
  Params ps;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("--param expects key=value, got '" + item + "'");
    try {
      std::size_t used = 0;
      const std::string v = item.substr(eq + 1);
      ps[item.substr(0, eq)] = std::stod(v, &used);
      if (used != v.size()) throw std::invalid_argument("trailing");
    } catch (const std::logic_error&) {
      throw ConfigError("--param value is not a number: '" + item + "'");
    }
  }
  return ps;
}

struct Source {
  std::string label;
  Seq seq;
  std::optional<GeneratedExample> example;
};

Source load_example(const RunConfig& cfg, const std::string& name) {
  if (!cfg.window.empty() || !cfg.space_kind.empty())
    throw ConfigError("--window and --space are fixed by the example; use --param instead");
  Params ps = parse_params(cfg.params);
  if (cfg.p.size() > 1) throw ConfigError("--p takes one value here");
  if (!cfg.p.empty()) ps["p"] = cfg.p.front();
  if (cfg.depth) ps["depth"] = *cfg.depth;
  if (cfg.tail_start) ps["tail_start"] = static_cast<double>(*cfg.tail_start);
  GeneratedExample defaults = [&] {
    try {
      return generate(name);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }();
  for (const auto& [key, value] : ps)
    if (!defaults.params.count(key))
      throw ConfigError("example '" + name + "' has no parameter '" + key + "'");
  try {
    GeneratedExample g = generate(name, ps);
    Seq seq = g.seq;
    return {name, std::move(seq), std::move(g)};
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

Source load_input(const RunConfig& cfg) {
  Json j;
  try {
    j = Json::parse(io::read_file(cfg.input));
  } catch (const std::exception& e) {
    throw ConfigError(cfg.input + ": " + e.what());
  }
  const bool header = j.is_object() && j.contains("space");
  const bool flags = !cfg.space_kind.empty() || !cfg.p.empty() || !cfg.window.empty() || cfg.depth;
  if (header && flags) throw ConfigError("space given both in " + cfg.input + " and on the command line");
  if (!header) {
    if (cfg.space_kind.empty() || cfg.p.size() != 1 || cfg.window.empty())
      throw ConfigError(cfg.input + " has no space header: give --space, --p and --window");
    const Interval w = parse_window(cfg.window);
    Json s;
    s["kind"] = cfg.space_kind;
    s["p"] = cfg.p.front();
    s["window"] = cfg.space_kind == "seq" ? Json::array({static_cast<long>(w.lo), static_cast<long>(w.hi)})
                                          : Json::array({w.lo, w.hi});
    s["depth"] = cfg.depth.value_or(0);
    if (j.is_array()) j = Json{{"terms", j}};
    j["space"] = s;
  }
  if (cfg.tail_start) j["tail_start"] = *cfg.tail_start;
  try {
    return {cfg.input, io::seq_from_json(j), std::nullopt};
  } catch (const std::exception& e) {
    throw ConfigError(cfg.input + ": " + e.what());
  }
}

std::optional<Source> load_source(const RunConfig& cfg, bool required) {
  if (!cfg.example.empty() && !cfg.input.empty()) throw ConfigError("give either --example or --input, not both");
  if (!cfg.example.empty()) return load_example(cfg, cfg.example);
  if (!cfg.input.empty()) return load_input(cfg);
  if (required) throw ConfigError("no sequence: give --example NAME or --input FILE");
  return std::nullopt;
}

Json expectations(const Source& src) {
  Json j = Json::array();
  if (!src.example) return j;
  for (const auto& e : src.example->expected)
    j.push_back({{"quantity", e.quantity}, {"value", e.value}, {"basis", e.basis}});
  return j;
}

Json source_json(const Source& src) {
  Json j;
  j["label"] = src.label;
  j["space"] = io::to_json(src.seq.space());
  j["size"] = src.seq.size();
  j["tail_start"] = src.seq.tail_start();
  std::vector<double> norms;
  for (const auto& x : src.seq) norms.push_back(norm(x));
  j["norms"] = norms;
  if (src.example) {
    Json ps;
    for (const auto& [k, v] : src.example->params) ps[k] = v;
    j["params"] = ps;
    j["window_note"] = src.example->window_note;
    j["scales"] = src.example->scales;
  }
  j["expected"] = expectations(src);
  return j;
}

Json base_report(const RunConfig& cfg) {
  Json j;
  j["schema_version"] = io::kSchemaVersion;
  j["config"] = cfg.to_json();
  return j;
}

void emit(const RunConfig& cfg, const Json& report, const io::CsvTable* series) {
  if (cfg.out.empty()) {
    std::cout << io::dump(report);
    return;
  }
  std::filesystem::create_directories(cfg.out);
  const std::filesystem::path dir(cfg.out);
  io::write_file((dir / (cfg.command + ".json")).string(), io::dump(report));
  if (series) io::write_file((dir / (cfg.command + "_series.csv")).string(), series->str());
}

/// (1/|window|) int f over the window.
double window_mean(const Element& f) {
  const Interval w = f.space().window();
  return f.integral(w) / w.length();
}

/// int a^2 b^2 over the window.
double square_product_integral(const Element& a, const Element& b) {
  const int level = std::max(a.level(), b.level());
  Element x = a.at_level(level);
  const Element y = b.at_level(level);
  for (std::size_t i = 0; i < x.coeffs().size(); ++i) x.coeffs()[i] = x.coeffs()[i] * x.coeffs()[i] * y.coeffs()[i] * y.coeffs()[i];
  return x.integral(x.space().window());
}

// ---------------------------------------------------------------------------

int cmd_analyze(const RunConfig& cfg) {
  const Source src = *load_source(cfg, true);
  const Seq& seq = src.seq;
  const Space& space = seq.space();
  const double tol = cfg.tol.value_or(1e-3);
  const TestDictionary dict = TestDictionary::dyadic(space, cfg.dict_depth);

  Json r = base_report(cfg);
  r["source"] = source_json(src);

  const auto weak = weak_limit_estimate(seq, dict);
  r["weak_limit"] = {{"limit", io::to_json(weak.limit)},
                     {"mean", window_mean(weak.limit)},
                     {"residual", weak.residual},
                     {"residual_decays", weak.residual_decays}};

  Json delta;
  std::optional<Element> center;
  try {
    const auto c = asymptotic_center(seq);
    center = c.center;
    delta["center"] = io::to_json(c.center);
    delta["radius"] = c.radius;
    delta["movement"] = c.movement;
  } catch (const std::exception& e) {
    delta["center_error"] = e.what();
  }
  const Element zero(space);
  delta["at_weak_limit"] = io::to_json(delta_limit_dual(seq, weak.limit, dict));
  delta["at_zero"] = io::to_json(delta_limit_dual(seq, zero, dict));
  std::optional<DeltaVerdict> at_center;
  if (center) {
    at_center = delta_limit_dual(seq, *center, dict);
    delta["at_center"] = io::to_json(*at_center);
  }
  r["delta"] = delta;

  std::vector<Element> candidates{zero};
  if (center) candidates.push_back(*center);
  r["opial_gap"] = {{"reference", "weak limit"},
                    {"candidates", center ? "zero, asymptotic center" : "zero"},
                    {"value", opial_gap(seq, weak.limit, candidates)}};

  SearchGrid grid = SearchGrid::for_space(space);
  grid.dict_depth = cfg.dict_depth;
  ProfileOptions popt;
  popt.tol = tol;
  const auto pf = p_functional(seq, grid, popt);
  Json pj;
  pj["value"] = pf.value;
  pj["d_weak_null"] = pf.value < tol;
  pj["best"] = pf.best ? io::to_json(*pf.best) : Json(nullptr);
  pj["identity_certified"] = pf.identity.has_value();
  pj["locator_certified"] = pf.located.has_value();
  pj["locator_path"] = io::to_json(locator_path(seq, grid));
  r["p_functional"] = pj;

  // per-index series
  std::vector<std::string> header{"index", "scale", "norm", "sup_abs", "weak_residual",
                                  "dist_weak_limit", "cross_term", "pairing_weak_limit"};
  if (at_center) header.push_back("pairing_center");
  const bool cubic = src.example && src.example->companion.size() == seq.size();
  if (cubic) {
    for (const char* h : {"cubic_x", "cubic_y", "cubic_sum"}) header.push_back(h);
  }
  io::CsvTable series(header);
  const auto at_limit = delta_limit_dual(seq, weak.limit, dict);
  std::vector<double> cross;
  Json cubes = Json::object();
  std::vector<double> cx, cy, cs;
  for (std::size_t k = seq.tail_start(); k < seq.size(); ++k) {
    const std::size_t j = k - seq.tail_start();
    cross.push_back(square_product_integral(weak.limit, seq[k] - weak.limit));

    std::vector<double> row{static_cast<double>(k),
                            src.example ? src.example->scales[k] : static_cast<double>(k),
                            norm(seq[k]),
                            sup_norm(seq[k]),
                            weak.residual[j],
                            at_limit.distances[j],
                            cross.back(),
                            at_limit.max_pairing.empty() ? 0.0 : at_limit.max_pairing[j]};
    if (at_center) row.push_back(at_center->max_pairing[j]);
    if (cubic) {
      const Element& y = src.example->companion[k];
      cx.push_back(window_mean(signed_power(seq[k], 3.0)));
      cy.push_back(window_mean(signed_power(y, 3.0)));
      cs.push_back(window_mean(signed_power(seq[k] + y, 3.0)));
      row.insert(row.end(), {cx.back(), cy.back(), cs.back()});
    }
    series.add_row(row);
  }
  r["cross_term"] = {{"definition", "int |u|^2 |u_k - u|^2, u = weak limit"}, {"trend", cross}};
  if (cubic) r["cubic_pairings"] = {{"x", cx}, {"y", cy}, {"sum", cs}, {"definition", "window mean of the cube"}};
  emit(cfg, r, &series);
  return 0;
}

// ---------------------------------------------------------------------------

int cmd_decompose(const RunConfig& cfg) {
  const Source src = *load_source(cfg, true);
  const Seq& seq = src.seq;
  Json r = base_report(cfg);
  r["source"] = source_json(src);

  SearchGrid grid = SearchGrid::for_space(seq.space());
  grid.dict_depth = cfg.dict_depth;
  DecompositionOptions opt;
  opt.max_profiles = cfg.max_profiles;
  opt.profile.tol = cfg.tol.value_or(1e-3);

  const double sup = sup_norm(seq);
  if (sup > 1.0 + 1e-12) throw ConfigError("decompose needs sup ||u_k|| <= 1, got " + std::to_string(sup));
  int status = 0;
  try {
    const auto d = profile_decomposition(seq, grid, opt);
    r["decomposition"] = io::to_json(d);
    const auto wn = d_weak_null_check(d.remainder, grid, opt.profile);
    r["remainder_d_weak_null"] = {{"weak_null", wn.weak_null}, {"value", wn.value}};
    io::CsvTable series({"step", "sup_norm", "sigma", "drop", "delta", "drop_ok"});
    for (std::size_t j = 0; j < d.sigma_trace.size(); ++j) {
      const bool has = j < d.steps.size();
      series.add_row(std::vector<std::string>{
          std::to_string(j), io::format_double(d.sigma_trace[j].sup_norm),
          io::format_double(d.sigma_trace[j].sigma), has ? io::format_double(d.steps[j].drop) : "",
          has ? io::format_double(d.steps[j].delta) : "", has ? (d.steps[j].drop_ok ? "1" : "0") : ""});
    }
    r["status"] = "ok";
    emit(cfg, r, &series);
  } catch (const EnergyBudgetExceeded& e) {
    r["status"] = "energy budget exceeded";
    r["error"] = e.what();
    std::cerr << "decompose: " << e.what() << "\n";
    status = 1;
    emit(cfg, r, nullptr);
  }
  return status;
}

// ---------------------------------------------------------------------------

struct CheckRow {
  std::string check;
  double p = 0.0;
  bool passed = false;
  double margin = 0.0;
  std::string detail;
};

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names{"elementary", "bl", "energy", "hilbert-identity", "midpoint",
                                              "modulus"};
  return names;
}

std::vector<double> exponents(const RunConfig& cfg, std::vector<double> fallback) {
  return cfg.p.empty() ? fallback : cfg.p;
}

Seq sequence_or(const std::optional<Source>& src, const std::string& example, Params ps) {
  return src ? src->seq : generate(example, std::move(ps)).seq;
}

void check_elementary(const RunConfig& cfg, std::vector<CheckRow>& rows, Json& details) {
  for (double p : exponents(cfg, {2.5, 3, 3.5, 4, 6})) {
    const auto plus = elementary_scan(p, Branch::Plus, 10.0, 1e-3);
    const auto minus = elementary_scan(p, Branch::Minus, 1.0, 1e-3);
    CheckRow row{"elementary", p, false, plus.min_value, ""};
    if (p >= 3.0) {
      row.passed = plus.min_value >= -1e-12 && minus.min_value >= -1e-12;
      row.margin = std::min(plus.min_value, minus.min_value);
      row.detail = "min f+ and f- over the grid";
    } else {
      // the inequality is expected to fail: a witness counts as a pass
      row.passed = plus.min_value < -1e-6;
      row.detail = "expected failure; witness t = " + io::format_double(plus.argmin);
    }
    rows.push_back(row);
    details["elementary"].push_back({{"p", p},
                                     {"plus", {{"min", plus.min_value}, {"argmin", plus.argmin}, {"points", plus.points}}},
                                     {"minus", {{"min", minus.min_value}, {"argmin", minus.argmin}, {"points", minus.points}}},
                                     {"expected_failure", p < 3.0}});
  }
}

void check_bl(const RunConfig& cfg, const std::optional<Source>& src, std::vector<CheckRow>& rows, Json& details) {
  const Seq seq = sequence_or(src, "bl-strict-03", {});
  const TestDictionary dict = TestDictionary::dyadic(seq.space(), cfg.dict_depth);
  const Element u = weak_limit_estimate(seq, dict).limit;
  InequalityOptions opt;
  opt.tol = cfg.tol.value_or(1e-6);
  opt.dict = dict;
  const auto rep = bl_lower_bound(seq, u, opt);
  rows.push_back({"bl", seq.space().p(), rep.holds, rep.worst_margin,
                  "int|u_k|^p - int|u|^p - int|u_k - u|^p, last margin " + io::format_double(rep.margin)});
  details["bl"] = io::to_json(rep);
}

void check_energy(const RunConfig& cfg, const std::optional<Source>& src, std::vector<CheckRow>& rows,
                  Json& details) {
  const Source source = src ? *src : load_example(RunConfig{}, "nonlsc-L4");
  Seq seq = source.seq;
  // normalize so that ||u_k|| <= 1
  const double s = std::max(1.0, sup_norm(seq));
  std::vector<Element> xs;
  for (const auto& x : seq) xs.push_back((1.0 / s) * x);
  seq = Seq(std::move(xs), seq.tail_start());
  const TestDictionary dict = TestDictionary::dyadic(seq.space(), cfg.dict_depth);
  InequalityOptions opt;
  opt.tol = cfg.tol.value_or(1e-6);
  opt.dict = dict;
  Json d;
  d["normalized_by"] = s;

  // Delta-limit: the stabilized asymptotic center, else the example's
  // declared limit (certified below through the dictionary)
  std::optional<Element> u;
  try {
    u = asymptotic_center(seq).center;
    d["delta_limit_source"] = "asymptotic center";
  } catch (const InsufficientTail& e) {
    d["asymptotic_center_error"] = e.what();
    if (source.example && source.example->companion.size() == 1) {
      u = (1.0 / s) * source.example->companion.front();
      d["delta_limit_source"] = "declared by the example";
    }
  }
  if (u) {
    const auto rep = delta_energy_bound(seq, *u, opt);
    const bool certified = rep.warnings.empty();
    rows.push_back({"energy", seq.space().p(), rep.holds && certified, rep.worst_margin,
                    "||u_k|| - ||u_k - u|| - delta(||u||), u = Delta-limit"});
    d["delta_energy"] = io::to_json(rep);
  } else {
    rows.push_back({"energy", seq.space().p(), false, 0.0, "no Delta-limit candidate"});
  }
  const Element weak = weak_limit_estimate(seq, dict).limit;
  const auto lsc = weak_lsc_bound(seq, weak, opt);
  rows.push_back({"energy", seq.space().p(), lsc.holds, lsc.worst_margin,
                  "||u_k|| - ||u|| - delta(||u_k - u||), u = weak limit"});
  d["weak_lsc"] = io::to_json(lsc);
  details["energy"] = d;
}

void check_hilbert(const RunConfig& cfg, const std::optional<Source>& src, std::vector<CheckRow>& rows,
                   Json& details) {
  const Seq seq = sequence_or(src, "nonadditive-09", {{"p", 2.0}});
  if (seq.space().p() != 2.0) throw ConfigError("hilbert-identity needs p = 2");
  const TestDictionary dict = TestDictionary::dyadic(seq.space(), cfg.dict_depth);
  const Element u = weak_limit_estimate(seq, dict).limit;
  InequalityOptions opt;
  opt.tol = cfg.tol.value_or(1e-6);
  opt.dict = dict;
  const auto rep = hilbert_identity(seq, u, opt);
  rows.push_back({"hilbert-identity", 2.0, rep.holds, rep.margin,
                  "||u_k||^2 - ||u_k - u||^2 - ||u||^2 decays"});
  details["hilbert-identity"] = io::to_json(rep);
}

void check_midpoint(const RunConfig& cfg, std::vector<CheckRow>& rows, Json& details) {
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  for (double p : exponents(cfg, {1.5, 2, 3, 4})) {
    const Space s = Space::grid(p, 0.0, 4.0, 0, 3);
    double worst = std::numeric_limits<double>::infinity();
    int failures = 0;
    const int pairs = 200;
    for (int i = 0; i < pairs; ++i) {
      std::vector<double> a(s.cells(3)), b(s.cells(3));
      for (double& c : a) c = coef(rng);
      for (double& c : b) c = coef(rng);
      const Element u(s, 3, a);
      const Element v(s, 3, b);
      const double c = std::max(norm(u), norm(v));
      const auto rep = midpoint_gap_check(u, v, c, c);
      worst = std::min(worst, rep.rhs - rep.lhs);
      failures += rep.holds ? 0 : 1;
    }
    rows.push_back({"midpoint", p, failures == 0, worst,
                    std::to_string(pairs) + " random pairs, C1 = C2 = max norm"});
    details["midpoint"].push_back({{"p", p}, {"pairs", pairs}, {"failures", failures}, {"worst_margin", worst}});
  }
}

void check_modulus(const RunConfig& cfg, std::vector<CheckRow>& rows, Json& details) {
  const double tol = cfg.tol.value_or(1e-4);
  for (double p : exponents(cfg, {2, 3, 4})) {
    if (p < 2.0) throw ConfigError("modulus cross-check covers p >= 2 only");
    double worst = 0.0;
    Json pts = Json::array();
    for (double eps : {0.25, 0.5, 1.0, 1.5, 2.0}) {
      const double closed = modulus_of_convexity(p, eps);
      const double searched = modulus_by_extremal_search(p, eps);
      worst = std::max(worst, std::fabs(closed - searched));
      pts.push_back({{"eps", eps}, {"closed_form", closed}, {"search", searched}});
    }
    rows.push_back({"modulus", p, worst <= tol, tol - worst, "max |closed form - extremal search|"});
    details["modulus"].push_back({{"p", p}, {"points", pts}, {"max_error", worst}});
  }
}

int cmd_verify(const RunConfig& cfg) {
  std::vector<std::string> checks = cfg.checks.empty() ? check_names() : cfg.checks;
  for (const auto& c : checks)
    if (std::find(check_names().begin(), check_names().end(), c) == check_names().end())
      throw ConfigError("unknown check '" + c + "'");
  const auto src = load_source(cfg, false);

  std::vector<CheckRow> rows;
  Json details = Json::object();
  for (const auto& c : checks) {
    if (c == "elementary") check_elementary(cfg, rows, details);
    if (c == "bl") check_bl(cfg, src, rows, details);
    if (c == "energy") check_energy(cfg, src, rows, details);
    if (c == "hilbert-identity") check_hilbert(cfg, src, rows, details);
    if (c == "midpoint") check_midpoint(cfg, rows, details);
    if (c == "modulus") check_modulus(cfg, rows, details);
  }

  Json r = base_report(cfg);
  if (src) r["source"] = source_json(*src);
  Json table = Json::array();
  io::CsvTable csv({"check", "p", "passed", "margin", "detail"});
  int failed = 0;
  for (const auto& row : rows) {
    table.push_back({{"check", row.check}, {"p", row.p}, {"passed", row.passed}, {"margin", row.margin},
                     {"detail", row.detail}});
    csv.add_row(std::vector<std::string>{row.check, io::format_double(row.p), row.passed ? "1" : "0",
                                         io::format_double(row.margin), row.detail});
    if (!row.passed) {
      ++failed;
      std::cerr << "FAILED " << row.check << " p=" << row.p << ": " << row.detail << " (margin " << row.margin
                << ")\n";
    }
  }
  r["checks"] = table;
  r["details"] = details;
  r["all_passed"] = failed == 0;
  emit(cfg, r, &csv);
  return failed == 0 ? 0 : 1;
}

void add_common(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--space", cfg.space_kind, "space kind for input files without a header")
      ->check(CLI::IsMember({"grid", "seq"}));
  sub->add_option("--p", cfg.p, "exponent p (verify: one or more)");
  sub->add_option("--window", cfg.window, "window a:b for input files without a header");
  sub->add_option("--depth", cfg.depth, "grid refinement depth");
  sub->add_option("--dict-depth", cfg.dict_depth, "test dictionary depth")->check(CLI::Range(0, 12));
  sub->add_option("--example", cfg.example, "corpus example name");
  sub->add_option("--param", cfg.params, "example parameter key=value (repeatable)");
  sub->add_option("--input", cfg.input, "sequence file (JSON)");
  sub->add_option("--tol", cfg.tol, "tolerance");
  sub->add_option("--max-profiles", cfg.max_profiles, "profile cap for decompose");
  sub->add_option("--tail-start", cfg.tail_start, "first index of the asymptotic tail");
  sub->add_option("--seed", cfg.seed, "random seed");
  sub->add_option("--out", cfg.out, "output directory (stdout when omitted)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Concentration analysis of sequences in l^p / L^p"};
  app.require_subcommand(1);
  RunConfig cfg;
  auto* analyze = app.add_subcommand("analyze", "weak / Delta limits, Opial gap, p-functional");
  auto* decompose = app.add_subcommand("decompose", "greedy profile decomposition");
  auto* verify = app.add_subcommand("verify", "inequality and modulus checks");
  for (auto* sub : {analyze, decompose, verify}) add_common(sub, cfg);
  verify->add_option("--check", cfg.checks, "checks to run (default: all)")
      ->check(CLI::IsMember(check_names()));
  app.add_subcommand("examples", "list corpus examples")->callback([] {
    for (const auto& n : example_names()) std::cout << n << "\n";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (analyze->parsed()) return cfg.command = "analyze", cmd_analyze(cfg);
    if (decompose->parsed()) return cfg.command = "decompose", cmd_decompose(cfg);
    if (verify->parsed()) return cfg.command = "verify", cmd_verify(cfg);
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
