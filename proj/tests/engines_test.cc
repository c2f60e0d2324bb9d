// Copyright 2026 The metaprecomp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <gtest/gtest.h>

#include "metaprecomp/engines.h"
#include "metaprecomp/entropy.h"
#include "metaprecomp/errors.h"
#include "metaprecomp/eval_cache.h"
#include "metaprecomp/uci.h"

namespace metaprecomp {
namespace {

namespace fs = std::filesystem;

std::string Fixture(const std::string& name) {
  return std::string(METAPRECOMP_FIXTURE_DIR) + "/" + name;
}

std::string TempPath(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "metaprecomp_engines_test";
  fs::create_directories(dir);
  const fs::path p = dir / (name + "_" + std::to_string(::getpid()));
  fs::remove(p);
  return p.string();
}

std::vector<std::string> MockArgs(std::vector<std::string> extra = {}) {
  return extra;
}

TEST(SoftmaxTest, EqualScoresAreUniform) {
  for (double r : {1e-6, 1.0, 1e4}) {
    const std::vector<double> s = {7.0, 7.0, 7.0, 7.0};
    for (double p : SoftmaxPolicy(s, r)) EXPECT_DOUBLE_EQ(p, 0.25);
  }
}

TEST(SoftmaxTest, TwoMovesAtTemperatureHundred) {
  const std::vector<double> s = {100.0, 0.0};
  const auto p = SoftmaxPolicy(s, 100.0);
  const double e = std::exp(1.0);
  EXPECT_NEAR(p[0], e / (e + 1.0), 1e-15);
  EXPECT_NEAR(p[1], 1.0 / (e + 1.0), 1e-15);
  EXPECT_NEAR(p[0], 0.731059, 1e-6);
  EXPECT_NEAR(p[1], 0.268941, 1e-6);
}

TEST(SoftmaxTest, ZeroTemperatureLimit) {
  const std::vector<double> s = {100.0, 0.0};
  const auto p = SoftmaxPolicy(s, 1e-6);
  EXPECT_NEAR(p[0], 1.0, 1e-12);
  EXPECT_NEAR(p[1], 0.0, 1e-12);
}

TEST(SoftmaxTest, RejectsBadInput) {
  const std::vector<double> s = {1.0, 2.0};
  EXPECT_THROW(SoftmaxPolicy(s, 0.0), InvalidInput);
  EXPECT_THROW(SoftmaxPolicy(s, -1.0), InvalidInput);
  EXPECT_THROW(SoftmaxPolicy(s, std::nan("")), InvalidInput);
  const std::vector<double> bad = {1.0, INFINITY};
  EXPECT_THROW(SoftmaxPolicy(bad, 1.0), InvalidInput);
  EXPECT_THROW(SoftmaxPolicy(std::vector<double>{}, 1.0), InvalidInput);
}

TEST(SoftmaxTest, NormalizedShiftInvariantAndEntropyGrowsWithTemperature) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> score(-500.0, 500.0);
  std::uniform_int_distribution<int> size(2, 8);
  std::vector<double> grid;
  for (int k = 0; k <= 40; ++k) grid.push_back(std::pow(10.0, -6.0 + 0.25 * k));
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> s(static_cast<std::size_t>(size(rng)));
    for (double& x : s) x = score(rng);
    const double shift = score(rng);
    std::vector<double> shifted = s;
    for (double& x : shifted) x += shift;
    double previous = -1.0;
    for (double r : grid) {
      const auto p = SoftmaxPolicy(s, r);
      const auto q = SoftmaxPolicy(shifted, r);
      double total = 0.0;
      for (std::size_t i = 0; i < p.size(); ++i) {
        total += p[i];
        EXPECT_NEAR(p[i], q[i], 1e-12);
      }
      EXPECT_NEAR(total, 1.0, 1e-12);
      const double h = Entropy(p);
      EXPECT_GE(h, previous - 1e-12);
      previous = h;
    }
  }
}

TEST(CpToUtilityTest, Examples) {
  EXPECT_EQ(CpToUtility(400, 400), 1.0);
  EXPECT_EQ(CpToUtility(0, 400), 0.5);
  EXPECT_EQ(CpToUtility(-400, 400), 0.0);
  EXPECT_EQ(CpToUtility(399, 400), 0.5);
  EXPECT_EQ(CpToUtility(kMateCp, 400), 1.0);
  EXPECT_EQ(CpToUtility(-kMateCp, 400), 0.0);
}

TEST(CpToUtilityTest, Antisymmetric) {
  for (int threshold : {1, 100, 400, 1000}) {
    for (int x = -1500; x <= 1500; ++x) {
      EXPECT_EQ(CpToUtility(-x, threshold), 1.0 - CpToUtility(x, threshold));
    }
  }
}

Evaluation ParseFixture(const std::string& name, int k) {
  std::ifstream in(Fixture(name));
  UciSearchParser parser;
  std::string line;
  while (std::getline(in, line)) {
    if (parser.Feed(line)) break;
  }
  EXPECT_TRUE(parser.done());
  return parser.Result(k);
}

TEST(UciParseTest, FinalDepthLines) {
  const Evaluation e = ParseFixture("uci_two_lines.txt", 2);
  ASSERT_EQ(e.moves.size(), 2u);
  EXPECT_EQ(e.moves[0], (ScoredMove{"e2e4", 34}));
  EXPECT_EQ(e.moves[1], (ScoredMove{"d2d4", 12}));
  EXPECT_EQ(e.cp, 34);
  EXPECT_EQ(ParseFixture("uci_two_lines.txt", 1).moves.size(), 1u);
}

TEST(UciParseTest, MateScores) {
  const Evaluation e = ParseFixture("uci_mate.txt", 2);
  ASSERT_EQ(e.moves.size(), 2u);
  EXPECT_EQ(e.moves[0], (ScoredMove{"d1h5", kMateCp}));
  EXPECT_EQ(e.moves[1], (ScoredMove{"f1c4", 250}));

  const Evaluation mated = ParseFixture("uci_mated.txt", 2);
  EXPECT_TRUE(mated.moves.empty());
  EXPECT_EQ(mated.cp, -kMateCp);
}

TEST(UciParseTest, InfoLines) {
  auto info = ParseUciInfo("info depth 9 multipv 3 score mate -2 pv a7a8q b1b2");
  ASSERT_TRUE(info);
  EXPECT_EQ(info->depth, 9);
  EXPECT_EQ(info->multipv, 3);
  EXPECT_TRUE(info->mate);
  EXPECT_EQ(info->cp, -kMateCp);
  EXPECT_EQ(info->move, "a7a8q");
  EXPECT_EQ(ParseUciInfo("info depth 9 score cp 100000 pv e2e4")->cp, kMateCp);
  EXPECT_FALSE(ParseUciInfo("info depth 3 score cp 20 upperbound pv e2e4"));
  EXPECT_FALSE(ParseUciInfo("info string score cp 5 pv e2e4"));
  EXPECT_FALSE(ParseUciInfo("info depth 3 nodes 10"));
  EXPECT_FALSE(ParseUciInfo("bestmove e2e4"));
  EXPECT_FALSE(ParseUciInfo("info depth 3 score cp x pv e2e4"));
}

TEST(UciParseTest, MoveSyntax) {
  EXPECT_NO_THROW(CheckUciMove("e2e4"));
  EXPECT_NO_THROW(CheckUciMove("a7a8q"));
  EXPECT_THROW(CheckUciMove("e9e4"), InvalidInput);
  EXPECT_THROW(CheckUciMove("e2e4k"), InvalidInput);
  EXPECT_THROW(CheckUciMove("m0"), InvalidInput);
}

TEST(UciParseTest, EvaluationRecordRoundTrip) {
  const Evaluation e{{{"e2e4", 34}, {"d2d4", -12}}, 34};
  EXPECT_EQ(DecodeEvaluation(EncodeEvaluation(e)), e);
  const Evaluation none{{}, -kMateCp};
  EXPECT_EQ(DecodeEvaluation(EncodeEvaluation(none)), none);
  EXPECT_THROW(DecodeEvaluation("garbage"), InvalidInput);
  EXPECT_THROW(DecodeEvaluation("cp 1\ne2e4 x\n"), InvalidInput);
}

TEST(EvalCacheTest, InMemory) {
  EvalCache cache;
  EXPECT_FALSE(cache.Get("k"));
  EXPECT_EQ(cache.Put("k", "v1"), "v1");
  EXPECT_EQ(cache.Put("k", "v2"), "v1");
  EXPECT_EQ(*cache.Get("k"), "v1");
  EXPECT_EQ(cache.size(), 1u);
}

TEST(EvalCacheTest, PersistsAndKeepsFirstRecord) {
  const std::string path = TempPath("persist");
  {
    EvalCache cache(path);
    cache.Put("a", "alpha");
    cache.Put(std::string("b\0b", 3), std::string("\x01\x02\0", 3));
    cache.Put("a", "other");
  }
  EvalCache reopened(path);
  EXPECT_EQ(reopened.size(), 2u);
  EXPECT_EQ(*reopened.Get("a"), "alpha");
  EXPECT_EQ(*reopened.Get(std::string("b\0b", 3)), std::string("\x01\x02\0", 3));
  EXPECT_EQ(reopened.truncated_bytes(), 0u);
  EXPECT_EQ(fs::file_size(path), 8u + (8 + 1 + 5 + 4) + (8 + 3 + 3 + 4));
}

TEST(EvalCacheTest, TruncatesCorruptTail) {
  const std::string path = TempPath("corrupt");
  {
    EvalCache cache(path);
    cache.Put("a", "alpha");
    cache.Put("b", "beta");
  }
  const auto good = fs::file_size(path);
  {
    std::ofstream out(path, std::ios::binary | std::ios::app);
    out.write("\x05\x00\x00\x00\x09\x00", 6);  // half a header
  }
  {
    EvalCache cache(path);
    EXPECT_EQ(cache.truncated_bytes(), 6u);
    EXPECT_EQ(cache.size(), 2u);
    EXPECT_EQ(fs::file_size(path), good);
    cache.Put("c", "gamma");
  }
  // Flip one payload byte of the last record: its checksum no longer holds.
  {
    std::fstream f(path, std::ios::binary | std::ios::in | std::ios::out);
    f.seekp(static_cast<std::streamoff>(fs::file_size(path)) - 5);
    f.put('X');
  }
  EvalCache cache(path);
  EXPECT_EQ(cache.size(), 2u);
  EXPECT_FALSE(cache.Get("c"));
  EXPECT_EQ(fs::file_size(path), good);
}

TEST(EvalCacheTest, RejectsForeignFiles) {
  const std::string path = TempPath("foreign");
  std::ofstream(path) << "definitely not a cache";
  EXPECT_THROW(EvalCache{path}, InvalidInput);
}

TEST(EvalCacheTest, ConcurrentAccess) {
  const std::string path = TempPath("concurrent");
  {
    EvalCache cache(path);
    std::vector<std::thread> threads;
    for (int t = 0; t < 8; ++t) {
      threads.emplace_back([&cache, t] {
        for (int i = 0; i < 200; ++i) {
          const std::string key = std::to_string(i % 50);
          const std::string stored = cache.Put(key, "v" + std::to_string(t));
          EXPECT_EQ(*cache.Get(key), stored);
        }
      });
    }
    for (auto& th : threads) th.join();
    EXPECT_EQ(cache.size(), 50u);
  }
  EvalCache reopened(path);
  EXPECT_EQ(reopened.size(), 50u);
  EXPECT_EQ(reopened.truncated_bytes(), 0u);
}

TEST(UciEngineTest, HandshakeAndSearch) {
  UciEngine engine(METAPRECOMP_MOCK_ENGINE, {"--name", "Mock Engine 2"});
  EXPECT_EQ(engine.identity(), "Mock Engine 2");
  const std::vector<std::string> moves = {"e2e4", "e7e5"};
  const Evaluation e = engine.Search(moves, 5, 3, 5000);
  ASSERT_EQ(e.moves.size(), 3u);
  EXPECT_EQ(e.cp, e.moves[0].cp);
  // Depth 2 is the final report; the depth 1 scores are 50 higher.
  const Evaluation again = engine.Search(moves, 5, 3, 5000);
  EXPECT_EQ(e, again);
  const Evaluation one = engine.Search(moves, 5, 1, 5000);
  ASSERT_EQ(one.moves.size(), 1u);
  EXPECT_EQ(one.moves[0], e.moves[0]);
}

TEST(UciEngineTest, TranscriptReplay) {
  UciEngine engine(METAPRECOMP_MOCK_ENGINE,
                   {"--transcript", Fixture("uci_two_lines.txt")});
  const Evaluation e = engine.Search({}, 50, 2, 5000);
  ASSERT_EQ(e.moves.size(), 2u);
  EXPECT_EQ(e.moves[0], (ScoredMove{"e2e4", 34}));
  EXPECT_EQ(e.moves[1], (ScoredMove{"d2d4", 12}));

  UciEngine mate(METAPRECOMP_MOCK_ENGINE,
                 {"--transcript", Fixture("uci_mate.txt")});
  EXPECT_EQ(mate.Search({}, 50, 2, 5000).moves[0].cp, kMateCp);
}

TEST(UciEngineTest, TransportFailures) {
  UciEngine hang(METAPRECOMP_MOCK_ENGINE, {"--hang-after", "0"});
  const auto start = std::chrono::steady_clock::now();
  EXPECT_THROW(hang.Search({}, 5, 2, 300), EngineTransportError);
  EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::seconds(5));

  UciEngine crash(METAPRECOMP_MOCK_ENGINE, {"--crash-after", "0"});
  EXPECT_THROW(crash.Search({}, 5, 2, 5000), EngineTransportError);
  EXPECT_THROW(crash.Search({}, 5, 2, 5000), EngineTransportError);

  EXPECT_THROW(UciEngine("/nonexistent/engine", {}), EngineTransportError);
}

TEST(UciEngineTest, RejectsMalformedMoves) {
  UciEngine engine(METAPRECOMP_MOCK_ENGINE, {});
  const std::vector<std::string> moves = {"e2e4", "zz"};
  EXPECT_THROW(engine.Search(moves, 5, 2, 5000), InvalidInput);
  EXPECT_EQ(engine.Search({}, 5, 2, 5000).moves.size(), 2u);
}

TEST(UciScorerTest, CacheServesRepeatsWithoutEngineCalls) {
  const std::string path = TempPath("scorer_cache");
  auto pool = std::make_shared<UciEnginePool>(METAPRECOMP_MOCK_ENGINE,
                                              MockArgs());
  const std::vector<std::string> moves = {"d2d4"};
  Evaluation first;
  {
    auto cache = std::make_shared<EvalCache>(path);
    UciScorer scorer(pool, cache, 5, 2, 5000);
    first = scorer.Evaluate(moves);
    EXPECT_EQ(scorer.engine_calls(), 1u);
    EXPECT_EQ(scorer.Evaluate(moves), first);
    EXPECT_EQ(scorer.engine_calls(), 1u);
    // A different movetime is a different key.
    UciScorer slower(pool, cache, 6, 2, 5000);
    slower.Evaluate(moves);
    EXPECT_EQ(slower.engine_calls(), 1u);
  }
  const std::size_t searches = pool->searches();
  auto cache = std::make_shared<EvalCache>(path);
  UciScorer warm(pool, cache, 5, 2, 5000);
  EXPECT_EQ(warm.Evaluate(moves), first);
  EXPECT_EQ(warm.engine_calls(), 0u);
  EXPECT_EQ(pool->searches(), searches);

  // The engine identity is part of the key.
  auto other = std::make_shared<UciEnginePool>(
      METAPRECOMP_MOCK_ENGINE, std::vector<std::string>{"--name", "other"});
  UciScorer renamed(other, cache, 5, 2, 5000);
  renamed.Evaluate(moves);
  EXPECT_EQ(renamed.engine_calls(), 1u);

  EXPECT_THROW(warm.Evaluate(std::vector<std::string>{"x"}), InvalidInput);
  EXPECT_EQ(warm.engine_calls(), 0u);
}

TEST(UciScorerTest, RetriesOnFreshProcesses) {
  // Every process serves one search, then crashes on the next.
  auto pool = std::make_shared<UciEnginePool>(
      METAPRECOMP_MOCK_ENGINE, std::vector<std::string>{"--crash-after", "1"});
  auto cache = std::make_shared<EvalCache>();
  UciScorer scorer(pool, cache, 5, 2, 5000, 2);
  scorer.Evaluate(std::vector<std::string>{"e2e4"});
  EXPECT_EQ(scorer.engine_calls(), 1u);
  scorer.Evaluate(std::vector<std::string>{"d2d4"});
  EXPECT_EQ(scorer.engine_calls(), 3u);

  auto broken = std::make_shared<UciEnginePool>(
      METAPRECOMP_MOCK_ENGINE, std::vector<std::string>{"--crash-after", "0"});
  UciScorer hopeless(broken, cache, 5, 2, 5000, 2);
  EXPECT_THROW(hopeless.Evaluate(std::vector<std::string>{"c2c4"}),
               EngineTransportError);
  EXPECT_EQ(hopeless.engine_calls(), 3u);
}

TEST(UciScorerTest, EngineBackedGame) {
  auto pool = std::make_shared<UciEnginePool>(
      METAPRECOMP_MOCK_ENGINE, std::vector<std::string>{"--max-plies", "3"});
  auto scorer = std::make_shared<UciScorer>(
      pool, std::make_shared<EvalCache>(), 5, 2, 5000);
  ScoredGame game(scorer, {.max_plies = 10, .decisive_cp = 400, .top_k = 2});
  ASSERT_EQ(game.NumActions(0), 2);
  const NodeId a = game.Child(0, 0);
  EXPECT_EQ(game.Moves(a), std::vector<std::string>{game.ActionLabel(0, 0)});
  // The mock has no moves after three plies and reports the mover mated;
  // the mover there is the second player.
  NodeId cur = 0;
  for (int i = 0; i < 3; ++i) cur = game.Child(cur, 1);
  EXPECT_TRUE(game.IsTerminal(cur));
  EXPECT_EQ(game.Utility(cur), 1.0);

  ScoredGame shallow(scorer, {.max_plies = 2, .decisive_cp = 400, .top_k = 1});
  const NodeId leaf = shallow.Child(shallow.Child(0, 0), 0);
  EXPECT_TRUE(shallow.IsTerminal(leaf));
  EXPECT_EQ(shallow.Utility(leaf), 0.5);
}

SyntheticBackendSpec Spec(Player prepared) {
  SyntheticBackendSpec s;
  s.prepared = prepared;
  return s;
}

TEST(SyntheticTest, MainLineIsDecisiveForPreparedSide) {
  auto truth = std::make_shared<SyntheticScorer>(Spec(Player::kFirst), 50);
  ScoredGame game(truth, {.max_plies = 16, .decisive_cp = 400, .top_k = 2});
  // Follow m0 everywhere: the first player gains 100 cp per move.
  NodeId cur = 0;
  int plies = 0;
  while (!game.IsTerminal(cur)) {
    const auto eval = game.EvaluationAt(cur);
    int pick = -1;
    for (int a = 0; a < game.NumActions(cur); ++a) {
      if (game.ActionLabel(cur, a) == "m0") pick = a;
    }
    ASSERT_GE(pick, 0);
    cur = game.Child(cur, pick);
    ++plies;
  }
  EXPECT_EQ(plies, 7);
  EXPECT_EQ(game.Utility(cur), 1.0);

  auto black = std::make_shared<SyntheticScorer>(Spec(Player::kSecond), 50);
  const std::vector<std::string> line(8, "m0");
  EXPECT_EQ(black->Evaluate(line).cp, -400 * 1);  // first player to move
  const std::vector<std::string> seven(7, "m0");
  EXPECT_EQ(black->Evaluate(seven).cp, 300);  // second player to move, +300
}

TEST(SyntheticTest, LeavingTheMainLineIsQuiet) {
  auto truth = std::make_shared<SyntheticScorer>(Spec(Player::kFirst), 50);
  ScoredGame game(truth, {.max_plies = 16, .decisive_cp = 400, .top_k = 2});
  // m0, then the opponent deviates: no further change until the ply cap.
  std::vector<std::string> path = {"m0", "m1"};
  for (int i = 0; i < 12; ++i) path.push_back(i % 2 == 0 ? "m1" : "m0");
  EXPECT_EQ(truth->Evaluate(path).cp, 100);
  NodeId cur = 0;
  for (const auto& m : path) {
    int pick = -1;
    for (int a = 0; a < game.NumActions(cur); ++a) {
      if (game.ActionLabel(cur, a) == m) pick = a;
    }
    ASSERT_GE(pick, 0);
    cur = game.Child(cur, pick);
  }
  while (!game.IsTerminal(cur)) cur = game.Child(cur, 0);
  EXPECT_EQ(game.Depth(cur), 16);
  EXPECT_EQ(game.Utility(cur), 0.5);
  EXPECT_THROW(truth->Evaluate(std::vector<std::string>{"m2"}), InvalidInput);
  EXPECT_THROW(truth->Evaluate(std::vector<std::string>{"e2e4"}), InvalidInput);
}

TEST(SyntheticTest, LongerMovetimeJudgesBetter) {
  const SyntheticBackendSpec spec = Spec(Player::kFirst);
  SyntheticScorer strong(spec, 50);
  SyntheticScorer weak(spec, 10);
  int weak_errors = 0;
  int positions = 0;
  // Sharp positions of the first player: opponent always answered m0.
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 400; ++trial) {
    std::vector<std::string> path;
    const int own_moves = static_cast<int>(rng() % 3);
    for (int i = 0; i < own_moves; ++i) {
      path.push_back(rng() % 2 ? "m0" : "m1");
      path.push_back("m0");
    }
    path.push_back("m" + std::to_string(rng() % 2));
    path.push_back("m0");
    ++positions;
    EXPECT_EQ(strong.Evaluate(path).moves[0].move, "m0");
    if (weak.Evaluate(path).moves[0].move != "m0") ++weak_errors;
    // The unprepared side ranks m0 first regardless of movetime.
    std::vector<std::string> opp = path;
    opp.push_back("m0");
    EXPECT_EQ(weak.Evaluate(opp).moves[0].move, "m0");
  }
  EXPECT_GT(weak_errors, positions / 10);
  EXPECT_LT(weak_errors, positions / 2);
}

TEST(ScoredPolicyTest, SoftmaxOfTheGameScores) {
  auto truth = std::make_shared<SyntheticScorer>(Spec(Player::kFirst), 50);
  ScoredGame game(truth, {.max_plies = 6, .decisive_cp = 400, .top_k = 2});
  ScoredPolicy policy(truth, 100.0);
  for (NodeId h : {game.Root(), game.Child(0, 0), game.Child(0, 1)}) {
    const auto eval = game.EvaluationAt(h);
    std::vector<double> scores;
    for (const auto& m : eval.moves) scores.push_back(m.cp);
    const auto expected = SoftmaxPolicy(scores, 100.0);
    const auto got = policy.Distribution(game, h);
    ASSERT_EQ(got.size(), expected.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      EXPECT_DOUBLE_EQ(got[i], expected[i]);
    }
  }
  EXPECT_THROW(ScoredPolicy(truth, 0.0), InvalidInput);
  GameTree plain;
  plain.AddChild(0, "x");
  EXPECT_THROW(policy.Distribution(plain, 0), InvalidInput);
}

class FixedScorer final : public Scorer {
 public:
  explicit FixedScorer(Evaluation e) : e_(std::move(e)) {}
  Evaluation Evaluate(std::span<const std::string>) const override {
    return e_;
  }

 private:
  Evaluation e_;
};

TEST(ScoredPolicyTest, UnrankedActionsGetZero) {
  auto game_scorer = std::make_shared<FixedScorer>(
      Evaluation{{{"a2a3", 10}, {"b2b3", 5}, {"c2c3", 0}}, 10});
  ScoredGame game(game_scorer, {.max_plies = 3, .decisive_cp = 400, .top_k = 3});
  auto partial = std::make_shared<FixedScorer>(
      Evaluation{{{"c2c3", 50}, {"a2a3", 50}, {"h2h3", 90}}, 50});
  const auto p = ScoredPolicy(partial, 1.0).Distribution(game, 0);
  EXPECT_DOUBLE_EQ(p[0], 0.5);
  EXPECT_DOUBLE_EQ(p[1], 0.0);
  EXPECT_DOUBLE_EQ(p[2], 0.5);

  auto disjoint =
      std::make_shared<FixedScorer>(Evaluation{{{"h2h3", 90}}, 90});
  const auto q = ScoredPolicy(disjoint, 1e-6).Distribution(game, 0);
  EXPECT_NEAR(q[0], 1.0, 1e-12);
}

}  // namespace
}  // namespace metaprecomp
