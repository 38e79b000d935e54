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

// badnumlab: experiments on badly approximable numbers and their multiples.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "badnum/io.hpp"

namespace fs = std::filesystem;
using namespace badnum;
using badnum::io::json;

namespace {

enum Exit { kOk = 0, kViolation = 1, kUsage = 2, kBudget = 3 };

struct Common {
  std::string out_dir;
  bool human = false;
};

fs::path output_dir(const Common& c) {
  if (!c.out_dir.empty()) return c.out_dir;
  if (const char* env = std::getenv("BADNUMLAB_OUT"); env && *env) return env;
  return ".";
}

fs::path resolve(const Common& c, const std::string& given, const std::string& fallback) {
  if (!given.empty()) return given;
  return output_dir(c) / fallback;
}

std::ofstream open_out(const fs::path& p) {
  if (p.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(p.parent_path(), ec);
    if (ec) throw Error("cannot create directory " + p.parent_path().string() + ": " + ec.message());
  }
  std::ofstream os(p);
  if (!os) throw Error("cannot write " + p.string());
  return os;
}

std::string slurp(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot read " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

/// A word from a file holding "[0;...]", a digit array or {"digits": [...]}.
CFWord read_word(const std::string& path) {
  const std::string text = slurp(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '[' && text.find(';') != std::string::npos)
    return parse_cf(text);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what(), 1, e.byte);
  }
  if (j.is_object() && j.contains("word")) return io::word_from(j["word"]);
  return io::word_from(j);
}

Multiplier read_fraction(const std::string& i, const std::string& j) {
  return Multiplier(parse_integer(i), parse_integer(j));
}

json envelope(const std::string& command, json config) {
  return {{"format", io::kFormat}, {"command", command}, {"config", std::move(config)}};
}

void print_human(const json& doc, std::ostream& os) {
  std::size_t width = 0;
  for (auto& [k, v] : doc.items()) width = std::max(width, k.size());
  for (auto& [k, v] : doc.items()) {
    os << std::left << std::setw(static_cast<int>(width) + 2) << k;
    os << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
  }
}

void emit(const Common& c, const json& doc) {
  if (c.human) print_human(doc, std::cout);
  else std::cout << doc.dump(2) << '\n';
}

// Inclusive integer range "a..b" or a single integer.
std::pair<std::uint32_t, std::uint32_t> parse_range(const std::string& s) {
  const auto dots = s.find("..");
  auto num = [&](const std::string& t, std::size_t col) {
    try {
      std::size_t used = 0;
      const unsigned long v = std::stoul(t, &used);
      if (used != t.size()) throw std::invalid_argument(t);
      return static_cast<std::uint32_t>(v);
    } catch (const std::exception&) {
      throw ParseError("expected an integer range a..b", 1, col);
    }
  };
  if (dots == std::string::npos) {
    const auto v = num(s, 1);
    return {v, v};
  }
  return {num(s.substr(0, dots), 1), num(s.substr(dots + 2), dots + 3)};
}

Point parse_point(const std::string& s) {
  Point p;
  std::size_t start = 0;
  while (true) {
    const auto comma = s.find(',', start);
    p.push_back(parse_rational(std::string_view(s).substr(start, comma - start), start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"badnumlab: continued fractions, Lagrange estimates, congruence search and games"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--out-dir", common.out_dir, "Directory for files (default: $BADNUMLAB_OUT or .)");
  app.add_flag("--human", common.human, "Aligned key/value table instead of JSON");

  // lagrange
  auto* lag = app.add_subcommand("lagrange", "Finite-scale Lagrange estimate");
  std::string lag_cf, lag_cf_file, lag_rational, lag_point, lag_window = "1/2", lag_tail = "1/10000000000";
  std::uint64_t lag_qmax = 10000, lag_qmin = 1;
  bool lag_exact = false;
  auto* g_src = lag->add_option_group("source");
  g_src->add_option("--cf", lag_cf, "Word as [0;a1,...,an]; a*r repeats a r times");
  g_src->add_option("--cf-file", lag_cf_file, "File holding a word");
  g_src->add_option("--rational", lag_rational, "Rational x (direct estimator)");
  g_src->add_option("--point", lag_point, "Comma-separated rational vector (direct estimator)");
  g_src->require_option(1);
  lag->add_option("--qmax", lag_qmax, "Largest q for the direct estimator");
  lag->add_option("--qmin", lag_qmin, "Smallest q for the direct estimator");
  lag->add_option("--window", lag_window, "Window start as a fraction of the word length");
  lag->add_option("--tail-tol", lag_tail, "Largest allowed change of an inspected value under continuation");
  lag->add_flag("--exact", lag_exact, "Treat the word as the exact rational it spells");

  // construct
  auto* con = app.add_subcommand("construct", "Build a word with congruent convergents");
  Digit con_M = 2;
  std::size_t con_depth = 2000;
  unsigned con_rounds = 4;
  std::string con_word, con_log;
  bool con_no_pad = false;
  con->add_option("--M", con_M, "Alphabet bound (digits 1..M)")->check(CLI::Range(2u, 1000000u));
  con->add_option("--depth", con_depth, "Minimum number of digits")->check(CLI::PositiveNumber);
  con->add_option("--rounds", con_rounds, "Last fraction round (i, j <= rounds), repeated")->check(CLI::PositiveNumber);
  con->add_option("--word-out", con_word, "Word file (default word.json in the output dir)");
  con->add_option("--log-out", con_log, "Log file (default construction_log.json)");
  con->add_flag("--no-pad", con_no_pad, "Do not pad blocks to T(i, j, M)");

  // verify
  auto* ver = app.add_subcommand("verify", "Check the convergents congruent to i/j in a word");
  std::string ver_word, ver_i, ver_j;
  ver->add_option("--word", ver_word, "Word file")->required();
  ver->add_option("--i", ver_i, "Numerator")->required();
  ver->add_option("--j", ver_j, "Denominator")->required();
  std::size_t ver_min = 0;
  ver->add_option("--min-count", ver_min, "Fail unless at least this many convergents qualify");

  // decay-table
  auto* dec = app.add_subcommand("decay-table", "g(k) L((i_k/j_k) x) along a schedule");
  std::string dec_word, dec_cf, dec_schedule = "k,g=k", dec_outfile;
  std::size_t dec_rows = 10;
  std::uint64_t dec_qmax = 100000, dec_qmin = 0;
  bool dec_json = false;
  auto* g_dec = dec->add_option_group("source");
  g_dec->add_option("--word", dec_word, "Word file");
  g_dec->add_option("--cf", dec_cf, "Word as [0;a1,...,an]");
  g_dec->require_option(1);
  dec->add_option("--schedule", dec_schedule, "e.g. k,g=k  or  (2/1)^k,g=2^(k/2)");
  dec->add_option("--rows", dec_rows, "Number of rows");
  dec->add_option("--qmax", dec_qmax, "Largest q");
  dec->add_option("--qmin", dec_qmin, "Smallest q (default ceil(sqrt(qmax)))");
  dec->add_option("--output", dec_outfile, "Write to a file instead of stdout");
  dec->add_flag("--json", dec_json, "JSON instead of CSV");

  // group
  auto* grp = app.add_subcommand("group", "Sizes of the semigroup generated by the digit matrices mod n");
  std::string grp_n = "2..10";
  Digit grp_M = 2;
  grp->add_option("--n", grp_n, "Modulus or range a..b");
  grp->add_option("--M", grp_M, "Alphabet bound")->check(CLI::Range(2u, 1000000u));

  // tbound
  auto* tb = app.add_subcommand("tbound", "Worst-case extension length T(i, j, M)");
  std::vector<std::string> tb_pos;
  Digit tb_M = 2;
  std::uint32_t tb_max_product = 0;
  tb->add_option("args", tb_pos, "i j [M]")->expected(0, 3);
  tb->add_option("--M", tb_M, "Alphabet bound")->check(CLI::Range(2u, 1000000u));
  tb->add_option("--max-product", tb_max_product, "Table for all coprime i, j with i j <= this");

  // simplex
  auto* sim = app.add_subcommand("simplex", "Random checks that low-denominator rationals in a ball are coplanar");
  std::size_t sim_d = 1, sim_trials = 100;
  std::string sim_radius = "1/100";
  std::uint64_t sim_seed = 7;
  sim->add_option("--d", sim_d, "Dimension")->check(CLI::Range(1, 6));
  sim->add_option("--trials", sim_trials, "Number of random balls");
  sim->add_option("--radius", sim_radius, "Ball radius");
  sim->add_option("--seed", sim_seed, "Seed");

  // play
  auto* play = app.add_subcommand("play", "Hyperplane game: multiplier strategy against a Bob");
  std::string play_beta = "1/4", play_center, play_radius = "1/2", play_bob = "random",
              play_schedule = "k,g=k", play_transcript, play_target;
  std::size_t play_d = 1, play_rounds = 40;
  std::uint64_t play_seed = 1;
  long play_corrupt = -1;
  bool play_unit = false;
  play->add_option("--d", play_d, "Dimension")->check(CLI::Range(1, 4));
  play->add_option("--beta", play_beta, "Game parameter in (0, 1/3)");
  play->add_option("--center", play_center, "Center of B_0, comma-separated (default all 1/2)");
  play->add_option("--radius", play_radius, "Radius of B_0");
  play->add_option("--rounds", play_rounds, "Number of rounds")->check(CLI::PositiveNumber);
  play->add_option("--schedule", play_schedule, "Multiplier schedule");
  play->add_option("--bob", play_bob, "random | greedy | target")->check(CLI::IsMember({"random", "greedy", "target"}));
  play->add_option("--target", play_target, "Point for --bob target");
  play->add_option("--seed", play_seed, "Seed for --bob random");
  play->add_option("--corrupt-round", play_corrupt, "Replace Alice's move at this turn by a useless one");
  play->add_flag("--prepend-unit", play_unit, "Put 1/1 first in the multiplier sequence");
  play->add_option("--transcript", play_transcript, "Transcript path (default transcript.jsonl)");

  // bms
  auto* bms = app.add_subcommand("bms", "Symbolic digit game: congruence reply against random Bob");
  std::string bms_i = "2", bms_j = "1";
  Digit bms_M = 2;
  std::size_t bms_rounds = 30, bms_T = 0, bms_maxlen = 8;
  std::uint64_t bms_seed = 1;
  bms->add_option("--i", bms_i, "Numerator");
  bms->add_option("--j", bms_j, "Denominator");
  bms->add_option("--M", bms_M, "Alphabet bound")->check(CLI::Range(2u, 1000000u));
  bms->add_option("--rounds", bms_rounds, "Rounds");
  bms->add_option("--T", bms_T, "Alice's stride (default T(i, j, M))");
  bms->add_option("--bob-max", bms_maxlen, "Longest Bob block");
  bms->add_option("--seed", bms_seed, "Seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*lag) {
      json cfg;
      json doc;
      if (!lag_rational.empty() || !lag_point.empty()) {
        Point x = !lag_rational.empty() ? Point{parse_rational(lag_rational)} : parse_point(lag_point);
        cfg = {{"x", io::point_json(x)}, {"q_min", lag_qmin}, {"q_max", lag_qmax}, {"estimator", "direct"}};
        doc = envelope("lagrange", cfg);
        doc["estimate"] = io::estimate_json(lagrange_direct(x, lag_qmax, lag_qmin));
      } else {
        const CFWord w = !lag_cf.empty() ? parse_cf(lag_cf) : read_word(lag_cf_file);
        CfWindow win;
        win.start_fraction = parse_rational(lag_window);
        if (lag_exact) win.tail_tolerance.reset();
        else win.tail_tolerance = parse_rational(lag_tail);
        cfg = {{"word", io::word_json(w)},
               {"window", io::rat_json(win.start_fraction)},
               {"tail_tolerance", win.tail_tolerance ? json(io::rat_json(*win.tail_tolerance)) : json(nullptr)},
               {"estimator", "cf"}};
        doc = envelope("lagrange", cfg);
        doc["estimate"] = io::estimate_json(lagrange_cf(w, win));
      }
      emit(common, doc);
      return kOk;
    }

    if (*con) {
      const auto built = build_decaying(con_M, con_depth, FractionSchedule(con_rounds), {!con_no_pad});
      const json cfg = {{"M", con_M}, {"depth", con_depth}, {"rounds", con_rounds}, {"pad_to_T", !con_no_pad}};
      const fs::path wp = resolve(common, con_word, "word.json");
      const fs::path lp = resolve(common, con_log, "construction_log.json");
      {
        json w = envelope("construct", cfg);
        w["word"] = io::word_json(built.word);
        open_out(wp) << w.dump() << '\n';
      }
      open_out(lp) << io::construction_log_json(built.log).dump() << '\n';
      std::map<std::pair<std::string, std::string>, std::size_t> counts;
      for (const auto& e : built.log) ++counts[{e.m.i.get_str(), e.m.j.get_str()}];
      json summary = json::array();
      for (const auto& [f, n] : counts) summary.push_back({{"i", f.first}, {"j", f.second}, {"convergents", n}});
      json doc = envelope("construct", cfg);
      doc["digits"] = built.word.size();
      doc["blocks"] = built.log.size();
      doc["word_file"] = wp.string();
      doc["log_file"] = lp.string();
      doc["per_fraction"] = summary;
      emit(common, doc);
      return kOk;
    }

    if (*ver) {
      const Multiplier m = read_fraction(ver_i, ver_j);
      const CFWord w = read_word(ver_word);
      const auto rep = verify_decaying(w, m);
      json doc = envelope("verify", {{"word_file", ver_word}, {"i", ver_i}, {"j", ver_j}, {"min_count", ver_min}});
      doc["report"] = io::decay_report_json(rep);
      emit(common, doc);
      return rep.all_hold && rep.count() >= ver_min ? kOk : kViolation;
    }

    if (*dec) {
      const CFWord w = !dec_cf.empty() ? parse_cf(dec_cf) : read_word(dec_word);
      const DecaySchedule s = io::parse_schedule(dec_schedule);
      std::optional<std::uint64_t> qmin;
      if (dec_qmin) qmin = dec_qmin;
      const auto rows = decay_table(w, s, dec_rows, dec_qmax, qmin);
      const json cfg = {{"word", to_string(w)}, {"schedule", s.description}, {"rows", dec_rows},
                        {"q_max", dec_qmax}, {"q_min", qmin.value_or(default_decay_q_min(dec_qmax))}};
      std::ofstream file;
      if (!dec_outfile.empty()) file = open_out(dec_outfile);
      std::ostream& os = dec_outfile.empty() ? std::cout : file;
      if (dec_json) {
        json doc = envelope("decay-table", cfg);
        doc["rows"] = io::decay_rows_json(rows);
        os << doc.dump(2) << '\n';
      } else {
        io::write_csv(os, io::decay_csv(rows), cfg);
      }
      return kOk;
    }

    if (*grp) {
      const auto [lo, hi] = parse_range(grp_n);
      if (lo < 1 || hi < lo) throw DomainError("need 1 <= a <= b in --n a..b");
      if (hi > kMaxModulus) throw ResourceError("modulus above " + std::to_string(kMaxModulus));
      io::CsvTable t{{"n", "M", "size"}, {}};
      for (std::uint32_t n = lo; n <= hi; ++n)
        t.rows.push_back({std::to_string(n), std::to_string(grp_M), std::to_string(group_closure(n, grp_M).size)});
      io::write_csv(std::cout, t, {{"n", grp_n}, {"M", grp_M}});
      return kOk;
    }

    if (*tb) {
      io::CsvTable t{{"i", "j", "M", "T"}, {}};
      json cfg;
      if (tb_max_product) {
        cfg = {{"max_product", tb_max_product}, {"M", tb_M}};
        for (std::uint32_t i = 1; i <= tb_max_product; ++i)
          for (std::uint32_t j = 1; i * j <= tb_max_product; ++j)
            if (std::gcd(i, j) == 1)
              t.rows.push_back({std::to_string(i), std::to_string(j), std::to_string(tb_M),
                                std::to_string(T_bound(BigInt(i), BigInt(j), tb_M))});
      } else {
        if (tb_pos.size() < 2) throw DomainError("tbound needs i j [M] or --max-product");
        const Multiplier m = read_fraction(tb_pos[0], tb_pos[1]);
        Digit M = tb_M;
        if (tb_pos.size() == 3) {
          const BigInt v = parse_integer(tb_pos[2]);
          if (v < 2 || !v.fits_uint_p()) throw DomainError("alphabet bound M must be >= 2");
          M = static_cast<Digit>(v.get_ui());
        }
        cfg = {{"i", tb_pos[0]}, {"j", tb_pos[1]}, {"M", M}};
        t.rows.push_back({m.i.get_str(), m.j.get_str(), std::to_string(M), std::to_string(T_bound(m.i, m.j, M))});
      }
      io::write_csv(std::cout, t, cfg);
      return kOk;
    }

    if (*sim) {
      const BigRat r = parse_rational(sim_radius);
      if (r <= 0) throw DomainError("radius must be positive");
      std::mt19937_64 rng(sim_seed);
      const unsigned long grid = 1'000'000;
      std::uniform_int_distribution<unsigned long> coord(0, grid);
      std::size_t empty = 0, contained = 0;
      json witnesses = json::array();
      for (std::size_t t = 0; t < sim_trials; ++t) {
        Point c;
        for (std::size_t z = 0; z < sim_d; ++z) c.push_back(make_rat(BigInt(coord(rng)), BigInt(grid)));
        const auto res = verify_simplex(Ball(c, r));
        if (res.kind == SimplexCheck::Kind::empty) ++empty;
        else if (res.kind == SimplexCheck::Kind::contained) ++contained;
        else
          witnesses.push_back({{"trial", t}, {"center", io::point_json(c)}, {"witness", io::simplex_json(res)["witness"]}});
      }
      json doc = envelope("simplex", {{"d", sim_d}, {"trials", sim_trials}, {"radius", io::rat_json(r)}, {"seed", sim_seed}});
      doc["q_bound"] = io::int_json(denominator_bound(sim_d, r));
      doc["empty"] = empty;
      doc["contained"] = contained;
      doc["violations"] = witnesses.size();
      doc["witnesses"] = witnesses;
      emit(common, doc);
      return witnesses.empty() ? kOk : kViolation;
    }

    if (*play) {
      HGameConfig cfg;
      cfg.beta = parse_rational(play_beta);
      Point center = play_center.empty() ? Point(play_d, BigRat(1, 2)) : parse_point(play_center);
      if (center.size() != play_d) throw DomainError("--center has the wrong dimension");
      cfg.initial = Ball(center, parse_rational(play_radius));
      cfg.rounds = play_rounds;
      cfg.schedule = io::parse_schedule(play_schedule);
      cfg.prepend_unit = play_unit;
      cfg.validate();
      MultiplierAlice strategy(cfg);
      AliceStrategy alice = strategy;
      if (play_corrupt >= 0) alice = corrupt_at(alice, static_cast<std::size_t>(play_corrupt));
      BobStrategy bob;
      if (play_bob == "random") bob = RandomBob(play_seed);
      else if (play_bob == "greedy") bob = bob_greedy_rational;
      else {
        if (play_target.empty()) throw DomainError("--bob target needs --target");
        const Point target = parse_point(play_target);
        if (target.size() != play_d) throw DomainError("--target has the wrong dimension");
        bob = bob_toward(target);
      }
      json config = io::hgame_config_json(cfg);
      config["bob"] = play_bob;
      config["seed"] = play_seed;
      if (!play_target.empty()) config["target"] = play_target;
      if (play_corrupt >= 0) config["corrupt_round"] = play_corrupt;
      const GameTranscript t = run_hgame(cfg, alice, bob);
      const fs::path tp = resolve(common, play_transcript, "transcript.jsonl");
      {
        std::ofstream os = open_out(tp);
        io::write_transcript(os, t, config);
      }
      const HGameReport rep = verify_hgame_outcome(t, cfg);
      json sel = json::array();
      for (const auto& s : strategy.selection())
        sel.push_back({{"k", s.k}, {"source_index", io::int_json(s.source_index)}, {"fraction", io::multiplier_json(s.m)},
                       {"g_squared", io::rat_json(s.weight_squared)}});
      json doc = envelope("play", config);
      doc["transcript_file"] = tp.string();
      doc["rounds_played"] = t.rounds.size();
      doc["final_ball"] = io::ball_json(t.final_ball());
      doc["selection"] = sel;
      if (t.abort) doc["rejected"] = {{"round", *t.abort_round}, {"reason", to_string(t.abort->reason)}, {"detail", t.abort->detail}};
      doc["report"] = io::hgame_report_json(rep);
      emit(common, doc);
      return (rep.violations.empty() && rep.transcript_problems.empty() && !t.abort) ? kOk : kViolation;
    }

    if (*bms) {
      const Multiplier m = read_fraction(bms_i, bms_j);
      const CongruenceAlice alice(m, bms_M);
      const std::size_t T = bms_T ? bms_T : alice.T();
      const auto r = run_bms_symbolic(bms_M, T, alice, RandomBmsBob(bms_seed, bms_M, bms_maxlen), bms_rounds);
      const auto rep = verify_decaying(r.word, m);
      json doc = envelope("bms", {{"i", bms_i}, {"j", bms_j}, {"M", bms_M}, {"T", T}, {"rounds", bms_rounds},
                                  {"seed", bms_seed}, {"bob_max", bms_maxlen}});
      doc["game"] = io::bms_json(r);
      doc["report"] = io::decay_report_json(rep);
      emit(common, doc);
      return (!r.rejection && rep.all_hold && rep.count() + 1 >= r.turns.size()) ? kOk : kViolation;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kUsage;
  } catch (const ResourceError& e) {
    std::cerr << "resource budget exceeded: " << e.what() << '\n';
    return kBudget;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const InternalError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kViolation;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
