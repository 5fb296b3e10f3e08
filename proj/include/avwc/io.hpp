#pragma once

// File formats: JSON channel specs, JSON capacity/audit reports, CSV
// codebooks and audit tables, and the correlated-code manifest.
//
// Numeric text is locale-independent everywhere ('.' decimal via
// std::to_chars); JSON numbers are rounded to 12 significant digits before
// serialization so emitted artifacts are bit-stable across platforms.
//
// Channel-spec schema (per-letter varying pair):
//   {"A": 2, "B": 2, "C": 2,
//    "states": [{"name": "s0", "W": [[...],[...]], "V": [[...],[...]]}, ...]}
// W rows are A x B, V rows are A x C, all row-stochastic.
//
// Compound-spec schema (compound legit list, per-letter varying
// eavesdropper):
//   {"A": 2, "B": 2, "C": 2,
//    "compound": [{"name": "r0", "W": [[...],[...]]}, ...],
//    "eaves":    [{"name": "s0", "V": [[...],[...]]}, ...]}
// Loaders accept either schema where a compound spec is expected (the
// per-letter form converts via cavwc_from_avwc).

#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "avwc/capacity.hpp"
#include "avwc/channel.hpp"
#include "avwc/code.hpp"
#include "avwc/prob.hpp"
#include "avwc/robustify.hpp"
#include "avwc/sequence.hpp"

namespace avwc {

// ---------------------------------------------------------------------------
// Locale-free numeric text.
// ---------------------------------------------------------------------------

// Shortest decimal text for v with at most `digits` significant digits,
// always using '.' regardless of global locale.
inline std::string format_double(double v, int digits = 12) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v,
                           std::chars_format::general, digits);
  return std::string(buf, res.ptr);
}

// v rounded to `digits` significant decimal digits (round-trip through the
// textual form, so the result is exactly what format_double prints).
inline double round_sig(double v, int digits = 12) {
  if (!std::isfinite(v)) return v;
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v,
                           std::chars_format::general, digits);
  double out = 0.0;
  std::from_chars(buf, res.ptr, out);
  return out;
}

// ---------------------------------------------------------------------------
// Parse diagnostics.
// ---------------------------------------------------------------------------

// Error in a loaded document, carrying the file name and, for syntax
// errors, the 1-based line:column of the offending byte.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

namespace io_detail {

struct TextPos {
  int line = 1;
  int column = 1;
};

// Line/column of the (1-based) byte offset nlohmann reports.
inline TextPos position_at(const std::string& text, std::size_t byte) {
  TextPos pos;
  const std::size_t stop =
      byte == 0 ? 0 : std::min(byte - 1, text.size());
  for (std::size_t i = 0; i < stop; ++i) {
    if (text[i] == '\n') {
      ++pos.line;
      pos.column = 1;
    } else {
      ++pos.column;
    }
  }
  return pos;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline nlohmann::json parse_document(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const TextPos pos = position_at(text, e.byte);
    throw ParseError(path + ":" + std::to_string(pos.line) + ":" +
                     std::to_string(pos.column) + ": " + e.what());
  }
}

inline int require_int(const nlohmann::json& doc, const char* key,
                       const std::string& path) {
  if (!doc.contains(key) || !doc[key].is_number_integer())
    throw ParseError(path + ": missing or non-integer field \"" +
                     key + "\"");
  const long long v = doc[key].get<long long>();
  if (v < 1 || v > 1024)
    throw ParseError(path + ": field \"" + std::string(key) +
                     "\" out of range [1, 1024]");
  return static_cast<int>(v);
}

// Row-major stochastic matrix -> Channel, with a named location for every
// complaint.
inline Channel parse_matrix(const nlohmann::json& m, int rows, int cols,
                            const std::string& where,
                            const std::string& path) {
  if (!m.is_array() || static_cast<int>(m.size()) != rows)
    throw ParseError(path + ": " + where + " must have " +
                     std::to_string(rows) + " rows");
  std::vector<double> w;
  w.reserve(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols));
  for (int r = 0; r < rows; ++r) {
    const auto& row = m[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<int>(row.size()) != cols)
      throw ParseError(path + ": " + where + " row " + std::to_string(r) +
                       " must have " + std::to_string(cols) + " entries");
    for (int c = 0; c < cols; ++c) {
      const auto& cell = row[static_cast<std::size_t>(c)];
      if (!cell.is_number())
        throw ParseError(path + ": " + where + " entry (" +
                         std::to_string(r) + "," + std::to_string(c) +
                         ") is not a number");
      w.push_back(cell.get<double>());
    }
  }
  try {
    return Channel(rows, cols, std::move(w));
  } catch (const std::exception& e) {
    throw ParseError(path + ": " + where + ": " + e.what());
  }
}

inline nlohmann::json matrix_json(const Channel& ch) {
  nlohmann::json rows = nlohmann::json::array();
  for (int x = 0; x < ch.in_size(); ++x) {
    nlohmann::json row = nlohmann::json::array();
    for (int y = 0; y < ch.out_size(); ++y)
      row.push_back(round_sig(ch.prob(x, y)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline nlohmann::json dist_json(const Distribution& p) {
  nlohmann::json arr = nlohmann::json::array();
  for (int i = 0; i < p.size(); ++i) arr.push_back(round_sig(p[i]));
  return arr;
}

inline nlohmann::json word_json(const Word& w) {
  nlohmann::json arr = nlohmann::json::array();
  for (int v : w) arr.push_back(v);
  return arr;
}

}  // namespace io_detail

// ---------------------------------------------------------------------------
// Channel specs.
// ---------------------------------------------------------------------------

inline AvwcSpec load_avwc(const std::string& path) {
  const nlohmann::json doc = io_detail::parse_document(path);
  const int a = io_detail::require_int(doc, "A", path);
  const int b = io_detail::require_int(doc, "B", path);
  const int c = io_detail::require_int(doc, "C", path);
  if (!doc.contains("states") || !doc["states"].is_array() ||
      doc["states"].empty())
    throw ParseError(path + ": missing or empty \"states\" array");
  std::vector<std::string> names;
  std::vector<Channel> legit, eaves;
  int idx = 0;
  for (const auto& st : doc["states"]) {
    const std::string where = "states[" + std::to_string(idx) + "]";
    if (!st.is_object())
      throw ParseError(path + ": " + where + " is not an object");
    names.push_back(st.contains("name") && st["name"].is_string()
                        ? st["name"].get<std::string>()
                        : "s" + std::to_string(idx));
    if (!st.contains("W") || !st.contains("V"))
      throw ParseError(path + ": " + where + " needs \"W\" and \"V\"");
    legit.push_back(io_detail::parse_matrix(st["W"], a, b, where + ".W", path));
    eaves.push_back(io_detail::parse_matrix(st["V"], a, c, where + ".V", path));
    ++idx;
  }
  try {
    return AvwcSpec(std::move(names), std::move(legit), std::move(eaves));
  } catch (const std::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

inline CavwcSpec load_cavwc(const std::string& path) {
  const nlohmann::json doc = io_detail::parse_document(path);
  if (doc.contains("states")) return cavwc_from_avwc(load_avwc(path));
  const int a = io_detail::require_int(doc, "A", path);
  const int b = io_detail::require_int(doc, "B", path);
  const int c = io_detail::require_int(doc, "C", path);
  for (const char* key : {"compound", "eaves"})
    if (!doc.contains(key) || !doc[key].is_array() || doc[key].empty())
      throw ParseError(path + ": missing or empty \"" + std::string(key) +
                       "\" array");
  std::vector<Channel> compound, eaves;
  int idx = 0;
  for (const auto& entry : doc["compound"]) {
    const std::string where = "compound[" + std::to_string(idx++) + "]";
    if (!entry.is_object() || !entry.contains("W"))
      throw ParseError(path + ": " + where + " needs \"W\"");
    compound.push_back(
        io_detail::parse_matrix(entry["W"], a, b, where + ".W", path));
  }
  idx = 0;
  for (const auto& entry : doc["eaves"]) {
    const std::string where = "eaves[" + std::to_string(idx++) + "]";
    if (!entry.is_object() || !entry.contains("V"))
      throw ParseError(path + ": " + where + " needs \"V\"");
    eaves.push_back(
        io_detail::parse_matrix(entry["V"], a, c, where + ".V", path));
  }
  try {
    return CavwcSpec(std::move(compound), std::move(eaves));
  } catch (const std::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

inline nlohmann::json avwc_to_json(const AvwcSpec& spec) {
  nlohmann::json doc;
  doc["A"] = spec.a_size();
  doc["B"] = spec.b_size();
  doc["C"] = spec.c_size();
  nlohmann::json states = nlohmann::json::array();
  for (int s = 0; s < spec.s_size(); ++s) {
    nlohmann::json st;
    st["name"] = spec.state_names.empty() ? "s" + std::to_string(s)
                                          : spec.state_names[static_cast<std::size_t>(s)];
    st["W"] = io_detail::matrix_json(spec.legit[static_cast<std::size_t>(s)]);
    st["V"] = io_detail::matrix_json(spec.eaves[static_cast<std::size_t>(s)]);
    states.push_back(std::move(st));
  }
  doc["states"] = std::move(states);
  return doc;
}

inline nlohmann::json cavwc_to_json(const CavwcSpec& spec) {
  nlohmann::json doc;
  doc["A"] = spec.a_size();
  doc["B"] = spec.b_size();
  doc["C"] = spec.c_size();
  nlohmann::json compound = nlohmann::json::array();
  for (int r = 0; r < spec.r_size(); ++r) {
    nlohmann::json entry;
    entry["name"] = "r" + std::to_string(r);
    entry["W"] = io_detail::matrix_json(spec.compound[static_cast<std::size_t>(r)]);
    compound.push_back(std::move(entry));
  }
  doc["compound"] = std::move(compound);
  nlohmann::json eaves = nlohmann::json::array();
  for (int s = 0; s < spec.s_size(); ++s) {
    nlohmann::json entry;
    entry["name"] = "s" + std::to_string(s);
    entry["V"] = io_detail::matrix_json(spec.eaves[static_cast<std::size_t>(s)]);
    eaves.push_back(std::move(entry));
  }
  doc["eaves"] = std::move(eaves);
  return doc;
}

inline void write_json_file(const std::string& path,
                            const nlohmann::json& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError(path + ": cannot open for writing");
  out << doc.dump(2) << '\n';
  if (!out) throw ParseError(path + ": write failed");
}

// ---------------------------------------------------------------------------
// Capacity estimates.
// ---------------------------------------------------------------------------

inline nlohmann::json capacity_to_json(const CapacityEstimate& est) {
  nlohmann::json doc;
  doc["k"] = est.k;
  doc["value_bits_per_letter"] = round_sig(est.value);
  nlohmann::json arg;
  arg["p_u"] = io_detail::dist_json(est.argmax.p_u);
  arg["p_x_given_u"] = io_detail::matrix_json(est.argmax.p_x_given_u);
  doc["argmax"] = std::move(arg);
  if (est.worst_q) doc["worst_q"] = io_detail::dist_json(*est.worst_q);
  doc["worst_s_k"] = io_detail::word_json(est.worst_s_k);
  nlohmann::json diag;
  diag["restarts"] = est.diag.restarts;
  diag["ascent_steps"] = est.diag.ascent_steps;
  diag["heuristic_min"] = est.diag.heuristic_min;
  diag["best_restart"] = est.diag.best_restart;
  diag["raw_bits"] = round_sig(est.diag.raw_bits);
  if (est.diag.worst_r >= 0) diag["worst_r"] = est.diag.worst_r;
  doc["diagnostics"] = std::move(diag);
  return doc;
}

inline std::string capacity_csv_header() {
  return "k,value_bits_per_letter,restarts,ascent_steps,heuristic_min,"
         "best_restart,raw_bits,worst_r";
}

inline std::string capacity_csv_row(const CapacityEstimate& est) {
  std::string row = std::to_string(est.k);
  row += ',';
  row += format_double(est.value);
  row += ',';
  row += std::to_string(est.diag.restarts);
  row += ',';
  row += std::to_string(est.diag.ascent_steps);
  row += ',';
  row += est.diag.heuristic_min ? '1' : '0';
  row += ',';
  row += std::to_string(est.diag.best_restart);
  row += ',';
  row += format_double(est.diag.raw_bits);
  row += ',';
  row += std::to_string(est.diag.worst_r);
  return row;
}

// ---------------------------------------------------------------------------
// Codebooks and audits.
// ---------------------------------------------------------------------------

inline void write_codebook_csv(std::ostream& os, const Codebook& cb,
                               int a_size) {
  os << "j,l,word\n";
  for (long long j = 0; j < cb.params.J; ++j)
    for (long long l = 0; l < cb.params.L; ++l)
      os << j << ',' << l << ',' << word_to_string(cb.word(j, l), a_size)
         << '\n';
}

inline void write_codebook_csv(const std::string& path, const Codebook& cb,
                               int a_size) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError(path + ": cannot open for writing");
  write_codebook_csv(out, cb, a_size);
  if (!out) throw ParseError(path + ": write failed");
}

inline std::string audit_csv_header() {
  return "s_n,leakage_bits,tv_audit,error";
}

inline std::string audit_csv_row(const Word& s_n, int s_size,
                                 double leakage_bits, double tv_audit,
                                 double error) {
  std::string row = word_to_string(s_n, s_size);
  row += ',';
  row += format_double(leakage_bits);
  row += ',';
  row += format_double(tv_audit);
  row += ',';
  row += format_double(error);
  return row;
}

// ---------------------------------------------------------------------------
// Correlated-code manifest.
// ---------------------------------------------------------------------------

// JSON manifest naming the base codebook file plus the permutation support
// and weights.  Hand-emitted so each permutation stays on one line.
inline void write_correlated_manifest(std::ostream& os,
                                      const std::string& base_code_path,
                                      const CorrelatedCode& cc) {
  os << "{\n";
  os << "  \"base_code\": " << nlohmann::json(base_code_path).dump() << ",\n";
  os << "  \"n\": " << cc.base.n() << ",\n";
  os << "  \"permutations\": [\n";
  for (std::size_t i = 0; i < cc.permutations.size(); ++i) {
    os << "    [";
    const auto& map = cc.permutations[i].map;
    for (std::size_t j = 0; j < map.size(); ++j) {
      if (j) os << ", ";
      os << map[j];
    }
    os << (i + 1 < cc.permutations.size() ? "],\n" : "]\n");
  }
  os << "  ],\n";
  os << "  \"weights\": [";
  for (int i = 0; i < cc.weights.size(); ++i) {
    if (i) os << ", ";
    os << format_double(cc.weights[i]);
  }
  os << "]\n}\n";
}

inline void write_correlated_manifest(const std::string& path,
                                      const std::string& base_code_path,
                                      const CorrelatedCode& cc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError(path + ": cannot open for writing");
  write_correlated_manifest(out, base_code_path, cc);
  if (!out) throw ParseError(path + ": write failed");
}

}  // namespace avwc
