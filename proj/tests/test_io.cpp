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

#include <gtest/gtest.h>

#include <sstream>

#include "badnum/io.hpp"

using namespace badnum;
namespace bio = badnum::io;

TEST(Io, RationalsAsStrings) {
  EXPECT_EQ(bio::rat_json(make_rat(BigInt(3), BigInt(6))), "1/2");
  EXPECT_EQ(bio::rat_from(bio::json("7/21")), BigRat(1, 3));
  EXPECT_EQ(bio::int_json(BigInt("123456789012345678901234567890")), "123456789012345678901234567890");
  EXPECT_EQ(bio::int_json(BigInt(12)), 12);
}

TEST(Io, WordBothForms) {
  const CFWord w({1, 2, 3});
  const auto j = bio::word_json(w);
  EXPECT_EQ(j["cf"], "[0;1,2,3]");
  EXPECT_EQ(j["digits"], bio::json::array({1, 2, 3}));
  EXPECT_EQ(bio::word_from(j), w);
  EXPECT_EQ(bio::word_from(j["cf"]), w);
  EXPECT_EQ(bio::word_from(j["digits"]), w);
  EXPECT_THROW(bio::word_from(bio::json::array({1, 0})), ParseError);
}

TEST(Io, ConstructionLogShape) {
  const auto c = build_decaying(2, 20, FractionSchedule(2));
  const auto j = bio::construction_log_json(c.log);
  ASSERT_TRUE(j.is_array());
  for (const auto& e : j) {
    EXPECT_TRUE(e.contains("i"));
    EXPECT_TRUE(e.contains("j"));
    EXPECT_TRUE(e.contains("k"));
    EXPECT_TRUE(e["block"].is_array());
  }
  const auto back = bio::construction_log_from(j);
  ASSERT_EQ(back.size(), c.log.size());
  for (std::size_t z = 0; z < back.size(); ++z) {
    EXPECT_EQ(back[z].m, c.log[z].m);
    EXPECT_EQ(back[z].block, c.log[z].block);
    EXPECT_EQ(back[z].k, c.log[z].k);
  }
}

TEST(Io, TranscriptRoundTrip) {
  HGameConfig cfg;
  cfg.initial = Ball({BigRat(1, 2)}, BigRat(1, 2));
  cfg.rounds = 15;
  MultiplierAlice alice(cfg);
  const auto t = run_hgame(cfg, alice, RandomBob(2));
  std::stringstream ss;
  bio::write_transcript(ss, t, bio::hgame_config_json(cfg));
  std::string first;
  std::getline(ss, first);
  const auto head = bio::json::parse(first);
  EXPECT_EQ(head["format"], "badnumlab/1");
  std::string line;
  std::getline(ss, line);
  const auto a = bio::json::parse(line);
  EXPECT_EQ(a["round"], 0);
  EXPECT_EQ(a["actor"], "A");
  EXPECT_TRUE(a.contains("plane"));
  EXPECT_TRUE(a["thickness"].is_string());
  std::getline(ss, line);
  const auto b = bio::json::parse(line);
  EXPECT_EQ(b["actor"], "B");
  EXPECT_TRUE(b.contains("ball"));

  std::stringstream again;
  bio::write_transcript(again, t, bio::hgame_config_json(cfg));
  const auto back = bio::read_transcript(again, cfg.beta);
  ASSERT_EQ(back.rounds.size(), t.rounds.size());
  for (std::size_t k = 0; k < t.rounds.size(); ++k) {
    EXPECT_EQ(back.rounds[k].bob, t.rounds[k].bob);
    EXPECT_EQ(back.rounds[k].alice.neighborhood, t.rounds[k].alice.neighborhood);
  }
  EXPECT_TRUE(verify_hgame_outcome(back, cfg).pass());
}

TEST(Io, TranscriptParseErrorHasLine) {
  std::stringstream ss("{\"initial\":{\"center\":[\"0/1\"],\"radius\":\"1/1\"}}\n{bad json\n");
  try {
    bio::read_transcript(ss, BigRat(1, 4));
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(Io, DecayCsvHeader) {
  const auto rows = decay_table(CFWord::repeated(1, 40), DecaySchedule::linear(), 3, 2000);
  std::stringstream ss;
  bio::write_csv(ss, bio::decay_csv(rows), {{"q_max", 2000}});
  std::string meta, header, row;
  std::getline(ss, meta);
  std::getline(ss, header);
  std::getline(ss, row);
  EXPECT_EQ(meta.rfind("# ", 0), 0u);
  EXPECT_NE(meta.find("badnumlab/1"), std::string::npos);
  EXPECT_EQ(header, "k,i,j,L_hat,g_times_L");
  EXPECT_EQ(row.rfind("1,1,1,0.447", 0), 0u);
}

TEST(Io, SimplexWitnessesAsVectors) {
  const auto c = verify_simplex(Ball({BigRat(1, 2)}, BigRat(1, 2)));
  const auto j = bio::simplex_json(c);
  EXPECT_EQ(j["kind"], "violation");
  EXPECT_EQ(j["witness"][0], bio::json::array({"0/1"}));
}
