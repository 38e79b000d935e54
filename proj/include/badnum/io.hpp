// Copyright 2026 The badnumlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// JSON, JSON-lines and CSV encodings. Rationals travel as "p/q" strings,
// integers as JSON numbers when they fit in 64 bits and as strings otherwise.

#include <functional>
#include <istream>
#include <string_view>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "badnum/bms.hpp"
#include "badnum/cf.hpp"
#include "badnum/congruence.hpp"
#include "badnum/constructor.hpp"
#include "badnum/error.hpp"
#include "badnum/geometry.hpp"
#include "badnum/hgame.hpp"
#include "badnum/lagrange.hpp"
#include "badnum/numeric.hpp"

namespace badnum::io {

using json = nlohmann::ordered_json;

inline constexpr const char* kFormat = "badnumlab/1";

inline json int_json(const BigInt& v) {
  if (v.fits_slong_p()) return v.get_si();
  return v.get_str();
}

inline json rat_json(const BigRat& v) { return to_string(v); }

inline BigInt int_from(const json& j) {
  if (j.is_number_integer()) return BigInt(j.get<long>());
  if (j.is_string()) return parse_integer(j.get<std::string>());
  throw ParseError("expected an integer", 0, 0);
}

inline BigRat rat_from(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return BigRat(j.get<long>());
  throw ParseError("expected a rational string \"p/q\"", 0, 0);
}

inline json digits_json(const std::vector<Digit>& d) { return json(d); }

inline json word_json(const CFWord& w) {
  return {{"cf", to_string(w)}, {"digits", digits_json(std::vector<Digit>(w.digits().begin(), w.digits().end()))}};
}

/// Accepts "[0;...]", a digit array, or {"digits": [...]}.
inline CFWord word_from(const json& j) {
  if (j.is_string()) return parse_cf(j.get<std::string>());
  const json& arr = j.is_object() ? j.at("digits") : j;
  if (!arr.is_array()) throw ParseError("expected a digit array", 0, 0);
  std::vector<Digit> d;
  for (std::size_t z = 0; z < arr.size(); ++z) {
    if (!arr[z].is_number_unsigned() || arr[z].get<unsigned long>() < 1 ||
        arr[z].get<unsigned long>() > 0xffffffffUL)
      throw ParseError("digit " + std::to_string(z + 1) + " is not a positive integer", 1, z + 1);
    d.push_back(arr[z].get<Digit>());
  }
  return CFWord(std::move(d));
}

inline json point_json(const Point& p) {
  json a = json::array();
  for (const auto& v : p) a.push_back(rat_json(v));
  return a;
}

inline Point point_from(const json& j) {
  Point p;
  for (const auto& v : j) p.push_back(rat_from(v));
  return p;
}

inline json ball_json(const Ball& b) {
  return {{"center", point_json(b.center)}, {"radius", rat_json(b.radius)}};
}

inline Ball ball_from(const json& j) { return Ball(point_from(j.at("center")), rat_from(j.at("radius"))); }

inline json plane_json(const Hyperplane& h) {
  json n = json::array();
  for (const auto& v : h.normal) n.push_back(int_json(v));
  return {{"normal", n}, {"offset", rat_json(h.offset)}};
}

inline Hyperplane plane_from(const json& j) {
  std::vector<BigRat> n;
  for (const auto& v : j.at("normal")) n.push_back(BigRat(int_from(v)));
  return Hyperplane::from(n, rat_from(j.at("offset")));
}

inline json rational_point_json(const RationalPoint& p) { return point_json(p.value()); }

inline json multiplier_json(const Multiplier& m) { return {{"i", int_json(m.i)}, {"j", int_json(m.j)}}; }

inline json estimate_json(const LagrangeEstimate& e) {
  return {{"value", rat_json(e.value)},
          {"decimal", to_decimal(e.value)},
          {"exact", e.exact},
          {"window_start", e.window_start},
          {"window_end", e.window_end},
          {"q_min", int_json(e.q_min)},
          {"q_max", int_json(e.q_max)},
          {"argmin_q", int_json(e.argmin_q)},
          {"tail_uncertainty", to_decimal(e.tail_uncertainty)}};
}

inline json crude_json(const CrudeBoundReport& r) {
  return {{"fraction", multiplier_json(r.m)},       {"L_x", estimate_json(r.of_x)},
          {"L_mx", estimate_json(r.of_mx)},         {"bound", to_decimal(r.bound)},
          {"margin", to_decimal(r.margin)},         {"tolerance", to_decimal(r.tolerance)},
          {"holds", r.holds}};
}

inline json simplex_json(const SimplexCheck& c) {
  const char* kind = c.kind == SimplexCheck::Kind::empty       ? "empty"
                     : c.kind == SimplexCheck::Kind::contained ? "contained"
                                                              : "violation";
  json pts = json::array();
  for (const auto& p : c.points) pts.push_back(rational_point_json(p));
  json wit = json::array();
  for (const auto& p : c.witness) wit.push_back(rational_point_json(p));
  json out = {{"kind", kind}, {"q_bound", int_json(c.q_bound)}, {"points", pts}, {"witness", wit}};
  if (c.plane) out["plane"] = plane_json(*c.plane);
  return out;
}

inline json construction_log_json(const ConstructionLog& log) {
  json a = json::array();
  for (const auto& e : log)
    a.push_back({{"i", int_json(e.m.i)},
                 {"j", int_json(e.m.j)},
                 {"k", e.k},
                 {"block", digits_json(e.block)},
                 {"search_length", e.t},
                 {"padding", e.padding}});
  return a;
}

inline ConstructionLog construction_log_from(const json& j) {
  ConstructionLog log;
  for (const auto& e : j) {
    LogEntry le;
    le.m = Multiplier(int_from(e.at("i")), int_from(e.at("j")));
    le.k = e.at("k").get<std::size_t>();
    le.block = e.at("block").get<std::vector<Digit>>();
    le.t = e.value("search_length", le.block.size());
    le.padding = e.value("padding", std::size_t{0});
    log.push_back(std::move(le));
  }
  return log;
}

inline json decay_report_json(const DecayReport& r) {
  json conv = json::array();
  for (const auto& c : r.convergents)
    conv.push_back({{"k", c.k},
                    {"p_k", int_json(c.p_k)},
                    {"q_k", int_json(c.q_k)},
                    {"error", to_decimal(c.error)},
                    {"ratio", rat_json(c.ratio)},
                    {"ratio_decimal", to_decimal(c.ratio)},
                    {"chain_holds", c.chain_holds}});
  json out = {{"fraction", multiplier_json(r.m)}, {"count", r.count()}, {"all_hold", r.all_hold},
              {"convergents", conv}};
  out["max_ratio"] = r.max_ratio ? json(rat_json(*r.max_ratio)) : json(nullptr);
  out["min_ratio"] = r.min_ratio ? json(rat_json(*r.min_ratio)) : json(nullptr);
  return out;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Writes a "# {config}" line, then the header and rows.
inline void write_csv(std::ostream& os, const CsvTable& t, const json& config) {
  os << "# " << json{{"format", kFormat}, {"config", config}}.dump() << '\n';
  for (std::size_t z = 0; z < t.header.size(); ++z) os << (z ? "," : "") << t.header[z];
  os << '\n';
  for (const auto& r : t.rows) {
    for (std::size_t z = 0; z < r.size(); ++z) os << (z ? "," : "") << r[z];
    os << '\n';
  }
}

inline CsvTable decay_csv(const std::vector<DecayRow>& rows) {
  CsvTable t{{"k", "i", "j", "L_hat", "g_times_L"}, {}};
  for (const auto& r : rows)
    t.rows.push_back({std::to_string(r.k), r.m.i.get_str(), r.m.j.get_str(),
                      to_decimal(r.estimate.value), to_decimal(r.weighted_value)});
  return t;
}

inline json decay_rows_json(const std::vector<DecayRow>& rows) {
  json a = json::array();
  for (const auto& r : rows)
    a.push_back({{"k", r.k},
                 {"i", int_json(r.m.i)},
                 {"j", int_json(r.m.j)},
                 {"L_hat", to_decimal(r.estimate.value)},
                 {"g_times_L", to_decimal(r.weighted_value)},
                 {"estimate", estimate_json(r.estimate)}});
  return a;
}

inline json hgame_config_json(const HGameConfig& c) {
  return {{"dim", c.dim()},
          {"beta", rat_json(c.beta)},
          {"initial", ball_json(c.initial)},
          {"schedule", c.schedule.description},
          {"rounds", c.rounds},
          {"prepend_unit", c.prepend_unit}};
}

/// Header line, then per round an "A" line and a "B" line.
inline void write_transcript(std::ostream& os, const GameTranscript& t, const json& config) {
  os << json{{"format", kFormat}, {"config", config}, {"initial", ball_json(t.initial)}}.dump() << '\n';
  for (const auto& r : t.rounds) {
    json a = {{"round", r.round},
              {"actor", "A"},
              {"plane", plane_json(r.alice.neighborhood.plane)},
              {"thickness", rat_json(r.alice.neighborhood.thickness)},
              {"vacuous", r.alice.vacuous}};
    if (r.alice.k) {
      a["k"] = *r.alice.k;
      a["m"] = *r.alice.m;
    }
    os << a.dump() << '\n';
    os << json{{"round", r.round}, {"actor", "B"}, {"ball", ball_json(r.bob)}}.dump() << '\n';
  }
  if (t.abort)
    os << json{{"round", *t.abort_round}, {"actor", "referee"},
               {"rejected", to_string(t.abort->reason)}, {"detail", t.abort->detail}}
              .dump()
       << '\n';
}

/// Reads what write_transcript writes. Lines must alternate A, B.
inline GameTranscript read_transcript(std::istream& is, const BigRat& beta) {
  GameTranscript t;
  t.beta = beta;
  std::string line;
  std::size_t lineno = 0;
  std::optional<HRound> open;
  bool header = false;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(e.what(), lineno, e.byte);
    }
    if (!header) {
      if (!j.contains("initial")) throw ParseError("missing transcript header", lineno, 1);
      t.initial = ball_from(j["initial"]);
      t.dim = t.initial.dim();
      header = true;
      continue;
    }
    const std::string actor = j.at("actor").get<std::string>();
    if (actor == "A") {
      if (open) throw ParseError("two Alice moves in a row", lineno, 1);
      HRound r;
      r.round = j.at("round").get<std::size_t>();
      r.alice.neighborhood = HyperplaneNeighborhood(plane_from(j.at("plane")), rat_from(j.at("thickness")));
      r.alice.vacuous = j.value("vacuous", true);
      if (j.contains("k")) {
        r.alice.k = j["k"].get<std::size_t>();
        r.alice.m = j["m"].get<std::size_t>();
      }
      open = std::move(r);
    } else if (actor == "B") {
      if (!open) throw ParseError("Bob move without an Alice move", lineno, 1);
      open->bob = ball_from(j.at("ball"));
      t.rounds.push_back(std::move(*open));
      open.reset();
    } else if (actor != "referee") {
      throw ParseError("unknown actor \"" + actor + "\"", lineno, 1);
    }
  }
  if (!header) throw ParseError("empty transcript", lineno, 1);
  return t;
}

inline json hgame_report_json(const HGameReport& r) {
  json ks = json::array();
  for (const auto& w : r.per_k) {
    ks.push_back({{"k", w.k},
                  {"source_index", int_json(w.source_index)},
                  {"fraction", multiplier_json(w.m)},
                  {"windows", w.windows},
                  {"q_lo", int_json(w.q_lo)},
                  {"q_hi", int_json(w.q_hi)},
                  {"excluded_below", int_json(w.excluded_below)},
                  {"candidates", w.candidates}});
  }
  json v = json::array();
  for (const auto& x : r.violations)
    v.push_back({{"k", x.k}, {"p", int_json(x.p)}, {"q", int_json(x.q)}, {"rational", rat_json(make_rat(x.p, x.q))}});
  return {{"supported", r.supported}, {"pass", r.pass()}, {"progressions", ks},
          {"violations", v}, {"transcript_problems", r.transcript_problems}};
}

inline json bms_json(const BmsResult& r) {
  json turns = json::array();
  for (const auto& t : r.turns)
    turns.push_back({{"round", t.round},
                     {"bob", digits_json(t.bob)},
                     {"alice", digits_json(t.alice)},
                     {"search_length", t.search_length},
                     {"k", t.convergent_index}});
  json out = {{"M", r.M}, {"T", r.T}, {"fraction", multiplier_json(r.m)},
              {"word", word_json(r.word)}, {"turns", turns}};
  if (r.rejection) out["rejection"] = *r.rejection;
  return out;
}

/// Parses "<fractions>,g=<weight>":
///   fractions: k | (i/j)^k | i/j^k      weight: k | c | b^k | b^(k/2)
/// An optional "fractions=" prefix is accepted.
inline DecaySchedule parse_schedule(std::string_view text) {
  std::string s;
  for (char c : text)
    if (c != ' ') s.push_back(c);
  if (s.rfind("fractions=", 0) == 0) s = s.substr(10);
  const auto comma = s.find(",g=");
  if (comma == std::string::npos) throw ParseError("schedule needs the form <fractions>,g=<weight>", 1, 1);
  const std::string frac = s.substr(0, comma), weight = s.substr(comma + 3);
  const std::size_t wcol = comma + 3;

  auto strip_power = [](const std::string& t, const std::string& suffix, std::string& base) {
    if (t.size() <= suffix.size() || t.compare(t.size() - suffix.size(), suffix.size(), suffix) != 0) return false;
    base = t.substr(0, t.size() - suffix.size());
    if (base.size() >= 2 && base.front() == '(' && base.back() == ')') base = base.substr(1, base.size() - 2);
    return true;
  };

  std::function<BigRat(const BigInt&)> w;
  std::string base;
  if (weight == "k") {
    w = weights::linear();
  } else if (strip_power(weight, "^(k/2)", base)) {
    w = weights::sqrt_power(parse_rational(base, wcol));
  } else if (strip_power(weight, "^k", base)) {
    w = weights::power(parse_rational(base, wcol));
  } else {
    w = weights::constant(parse_rational(weight, wcol));
  }

  if (frac == "k") {
    DecaySchedule d = DecaySchedule::linear();
    d.weight_squared = std::move(w);
    d.description = "fractions=k,g=" + weight;
    return d;
  }
  if (strip_power(frac, "^k", base)) {
    const BigRat b = parse_rational(base, 1);
    if (b <= 0) throw ParseError("fraction base must be positive", 1, 1);
    return DecaySchedule::powers(Multiplier(b.get_num(), b.get_den()), std::move(w), weight);
  }
  throw ParseError("unknown fraction sequence \"" + frac + "\"", 1, 1);
}

}  // namespace badnum::io
