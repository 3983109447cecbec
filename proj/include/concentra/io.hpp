#ifndef CONCENTRA_IO_HPP
#define CONCENTRA_IO_HPP

// Report plumbing: JSON encodings of the domain types, RFC-4180 CSV tables,
// and the sequence input format
//
//   {"space": {"kind": "grid", "p": 4, "window": [0, 8], "base_level": 0, "depth": 6},
//    "tail_start": 4,
//    "terms": [[c_0, c_1, ...], ...]}
//
// Each term lists the coefficients of one element on the cells of a single
// level; the level is inferred from the array length. Sequence spaces use
// "kind": "seq" with an integer index window [i_min, i_max] (inclusive).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "concentra/decomposition.hpp"
#include "concentra/inequalities.hpp"
#include "concentra/profile.hpp"

namespace concentra::io {

using Json = nlohmann::json;  // std::map objects: keys come out sorted

inline constexpr const char* kSchemaVersion = "1";

inline Json to_json(const Interval& iv) { return Json::array({iv.lo, iv.hi}); }

inline Json to_json(const Space& s) {
  Json j;
  j["p"] = s.p();
  if (s.is_grid()) {
    j["kind"] = "grid";
    j["window"] = to_json(s.window());
    j["base_level"] = s.base_level();
    j["depth"] = s.depth();
  } else {
    j["kind"] = "seq";
    j["window"] = Json::array({static_cast<long>(s.lo()), static_cast<long>(s.hi()) - 1});
  }
  return j;
}

inline Json to_json(const Element& x) {
  Json j;
  j["level"] = x.level();
  j["coeffs"] = std::vector<double>(x.coeffs().begin(), x.coeffs().end());
  j["norm"] = norm(x);
  return j;
}

inline Json to_json(const Dislocation& g) { return Json::array({g.scale, g.shift}); }

inline Json to_json(const DislocationPath& path) {
  Json j = Json::array();
  for (const auto& g : path) j.push_back(to_json(g));
  return j;
}

inline Json to_json(const DeltaVerdict& v) {
  Json j;
  j["verdict"] = v.verdict;
  j["norm_convergent"] = v.norm_convergent;
  j["delta_convergent"] = v.delta_convergent;
  j["failing_functions"] = v.failing_functions;
  j["distances"] = v.distances;
  j["max_pairing"] = v.max_pairing;
  return j;
}

inline Json to_json(const ProfileCandidate& c) {
  Json j;
  j["source"] = c.source;
  j["norm"] = c.norm;
  j["path"] = to_json(c.path);
  j["profile"] = to_json(c.profile);
  j["index_map"] = c.index_map;
  j["certificate"] = to_json(c.verdict);
  return j;
}

inline Json to_json(const InequalityReport& r) {
  Json j;
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["margin"] = r.margin;
  j["worst_margin"] = r.worst_margin;
  j["holds"] = r.holds;
  j["trend"] = r.trend;
  j["warnings"] = r.warnings;
  return j;
}

inline Json to_json(const EnergyReport& e) {
  Json j;
  j["limsup_remainder"] = e.limsup_remainder;
  j["sum_delta_profiles"] = e.sum_delta_profiles;
  j["lhs"] = e.lhs;
  j["budget_ok"] = e.budget_ok;
  j["tail_lemma"] = e.tail_lemma;
  Json ladder = Json::array();
  for (const auto& c : e.ladder) {
    Json l;
    l["stage"] = c.stage;
    l["members"] = c.members;
    l["tail_norm"] = c.tail_norm;
    l["bound"] = c.bound;
    l["holds"] = c.holds;
    ladder.push_back(std::move(l));
  }
  j["ladder"] = std::move(ladder);
  return j;
}

inline Json to_json(const ProfileDecomposition& d) {
  Json j;
  Json profiles = Json::array();
  for (const auto& p : d.profiles) {
    Json q;
    q["source"] = p.source;
    q["norm"] = p.norm;
    q["path"] = to_json(p.path);
    q["profile"] = to_json(p.w);
    profiles.push_back(std::move(q));
  }
  j["profiles"] = std::move(profiles);
  Json steps = Json::array();
  for (const auto& s : d.steps) {
    Json q;
    q["sup_before"] = s.sup_before;
    q["sup_after"] = s.sup_after;
    q["drop"] = s.drop;
    q["delta"] = s.delta;
    q["drop_ok"] = s.drop_ok;
    q["subsequence"] = s.subsequence;
    steps.push_back(std::move(q));
  }
  j["steps"] = std::move(steps);
  Json sigma = Json::array();
  for (const auto& s : d.sigma_trace) sigma.push_back({{"sup_norm", s.sup_norm}, {"sigma", s.sigma}});
  j["sigma_trace"] = std::move(sigma);
  j["energy"] = to_json(d.energy);
  j["index_map"] = d.index_map;
  j["stopped_by_tolerance"] = d.stopped_by_tolerance;
  Json decoupling = Json::array();
  for (const auto& row : decoupling_check(d)) decoupling.push_back(row);
  j["decoupling"] = std::move(decoupling);
  std::vector<double> norms;
  std::vector<double> sup_abs;
  for (const auto& r : d.remainder) {
    norms.push_back(norm(r));
    sup_abs.push_back(sup_norm(r));
  }
  j["remainder"] = {{"norms", norms}, {"sup_abs", sup_abs}, {"tail_sup_norm", tail_sup_norm(d.remainder)}};
  return j;
}

/// Pretty JSON with a trailing newline; identical input gives identical bytes.
inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// CSV

/// Shortest round-trip decimal form of a double.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(std::vector<std::string> row) {
    if (row.size() != header_.size()) throw std::invalid_argument("csv: row width mismatch");
    rows_.push_back(std::move(row));
  }
  void add_row(const std::vector<double>& row) {
    std::vector<std::string> cells;
    for (double v : row) cells.push_back(format_double(v));
    add_row(std::move(cells));
  }

  /// RFC 4180: CRLF line breaks, fields quoted when they hold , " CR or LF.
  std::string str() const {
    std::string out;
    write_row(out, header_);
    for (const auto& r : rows_) write_row(out, r);
    return out;
  }

  std::size_t rows() const { return rows_.size(); }

 private:
  static void write_row(std::string& out, const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      const std::string& f = row[i];
      if (f.find_first_of(",\"\r\n") == std::string::npos) {
        out += f;
        continue;
      }
      out += '"';
      for (char c : f) {
        if (c == '"') out += '"';
        out += c;
      }
      out += '"';
    }
    out += "\r\n";
  }

  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// ---------------------------------------------------------------------------
// files

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << content;
  if (!f) throw std::runtime_error("write failed: " + path);
}

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline Space space_from_json(const Json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const double p = j.at("p").get<double>();
  const auto& w = j.at("window");
  if (!w.is_array() || w.size() != 2) throw std::invalid_argument("space.window must be [lo, hi]");
  if (kind == "grid")
    return Space::grid(p, w[0].get<double>(), w[1].get<double>(), j.value("base_level", 0),
                       j.value("depth", 0));
  if (kind == "seq") return Space::sequence(p, w[0].get<long>(), w[1].get<long>());
  throw std::invalid_argument("space.kind must be \"grid\" or \"seq\"");
}

/// Sequence from the input format above.
inline Seq seq_from_json(const Json& j) {
  const Space s = space_from_json(j.at("space"));
  const auto& terms = j.at("terms");
  if (!terms.is_array() || terms.empty()) throw std::invalid_argument("terms must be a nonempty array");
  std::vector<Element> xs;
  for (const auto& t : terms) {
    auto c = t.get<std::vector<double>>();
    int level = -1;
    for (int l = s.base_level(); l <= s.max_level(); ++l)
      if (s.cells(l) == c.size()) level = l;
    if (level < 0)
      throw std::invalid_argument("term with " + std::to_string(c.size()) +
                                  " coefficients matches no level of the space");
    xs.emplace_back(s, level, std::move(c));
  }
  const auto ts = j.value("tail_start", xs.size() / 2);
  return Seq(std::move(xs), ts);
}

inline Seq read_sequence(const std::string& path) {
  Json j;
  try {
    j = Json::parse(read_file(path));
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
  try {
    return seq_from_json(j);
  } catch (const Json::exception& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

inline Json seq_to_json(const Seq& seq) {
  Json j;
  j["space"] = to_json(seq.space());
  j["tail_start"] = seq.tail_start();
  Json terms = Json::array();
  for (const auto& x : seq) terms.push_back(std::vector<double>(x.coeffs().begin(), x.coeffs().end()));
  j["terms"] = std::move(terms);
  return j;
}

}  // namespace concentra::io

#endif  // CONCENTRA_IO_HPP
