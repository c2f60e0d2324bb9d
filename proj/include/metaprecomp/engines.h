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

#ifndef METAPRECOMP_ENGINES_H_
#define METAPRECOMP_ENGINES_H_

#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "metaprecomp/game.h"
#include "metaprecomp/policy.h"

namespace metaprecomp {

// Mate scores are reported as this many centipawns, above any threshold.
inline constexpr int kMateCp = 32000;

// p_i = exp(s_i / r) / sum_j exp(s_j / r), evaluated with the maximum
// subtracted. Throws InvalidInput unless r > 0 and every score is finite.
std::vector<double> SoftmaxPolicy(std::span<const double> scores, double r);

// 1 if cp >= threshold, 0 if cp <= -threshold, 0.5 otherwise. `cp` is from
// the first player's point of view.
double CpToUtility(int cp, int threshold);

struct ScoredMove {
  std::string move;
  // From the point of view of the player to move.
  int cp = 0;

  bool operator==(const ScoredMove&) const = default;
};

// What a scorer reports for one position.
struct Evaluation {
  // Top moves, best first as the scorer ranks them. Empty when the mover has
  // no legal move.
  std::vector<ScoredMove> moves;
  // Evaluation of the position for the player to move.
  int cp = 0;

  bool operator==(const Evaluation&) const = default;
};

// Scores positions given as the move sequence from the start position.
// Implementations must be thread-safe.
class Scorer {
 public:
  virtual ~Scorer() = default;
  virtual Evaluation Evaluate(std::span<const std::string> moves) const = 0;
};

struct ScoredGameConfig {
  // L: histories of this length are terminal with utility 0.5.
  int max_plies = 100;
  // Positions whose evaluation reaches this many cp for either side end the
  // game as a win for that side.
  int decisive_cp = 400;
  // K: only the scorer's top K moves are legal actions.
  int top_k = 2;

  void Validate() const;
};

// Game tree over a scorer, expanded on demand. The legal actions at a history
// are the top-K moves the scorer reports there. A history is terminal at
// max_plies (utility 0.5), when the mover has no move, or when the position's
// evaluation is decisive (utility from CpToUtility in the first player's
// frame). Ids are assigned as histories are first expanded.
class ScoredGame final : public Game {
 public:
  ScoredGame(std::shared_ptr<const Scorer> scorer, ScoredGameConfig cfg);

  bool Contains(NodeId h) const override;
  int Depth(NodeId h) const override;
  NodeId Parent(NodeId h) const override;
  int ActionFromParent(NodeId h) const override;
  int NumActions(NodeId h) const override;
  NodeId Child(NodeId h, int action) const override;
  std::string ActionLabel(NodeId h, int action) const override;
  double Utility(NodeId terminal) const override;
  int MaxLength() const override { return cfg_.max_plies; }
  int MaxActions() const override { return cfg_.top_k; }

  // The scorer's report at `h`, restricted to the legal actions.
  Evaluation EvaluationAt(NodeId h) const;
  // Move sequence from the start position.
  std::vector<std::string> Moves(NodeId h) const;
  std::size_t NumExpanded() const;
  const ScoredGameConfig& config() const { return cfg_; }

 private:
  struct Node {
    NodeId parent = kNoNode;
    int action = -1;
    int depth = 0;
    bool expanded = false;
    Evaluation eval;
    std::vector<NodeId> children;
    double utility = 0.5;
  };

  // Returns with `lock` held and node h expanded.
  void Expand(NodeId h, std::unique_lock<std::mutex>& lock) const;

  std::shared_ptr<const Scorer> scorer_;
  ScoredGameConfig cfg_;
  mutable std::mutex mu_;
  mutable std::vector<Node> nodes_;
};

// softmax(scores / r) over the legal actions of a ScoredGame, with scores
// taken from `scorer` at the history's position. Actions the scorer does not
// rank get probability zero; if it ranks none of them, the game's own scores
// are used.
class ScoredPolicy final : public Policy {
 public:
  using Policy::Distribution;
  ScoredPolicy(std::shared_ptr<const Scorer> scorer, double r);

  void Distribution(const Game& game, NodeId h,
                    std::vector<double>& out) const override;
  double temperature() const { return r_; }

 private:
  std::shared_ptr<const Scorer> scorer_;
  double r_;
};

// Strength-graded synthetic backend. Moves are labelled m0, m1, ... and the
// true evaluation V (first player's frame) evolves along the path:
//  - while the opponent of the prepared side has only ever played m0, the
//    position is sharp and the prepared side's m0 gains sharp_gain_cp while
//    every other move loses as much;
//  - all other moves leave V unchanged.
// Reported move scores are V plus the true gain, minus main_line_bias_cp
// per rank for the unprepared side (it prefers m0), plus uniform perception
// noise of +-noise_cp * reference_movetime / movetime where moves differ in
// true value. Longer movetimes therefore judge sharp positions better.
struct SyntheticBackendSpec {
  std::uint64_t seed = 1;
  int branching = 2;
  Player prepared = Player::kFirst;
  int sharp_gain_cp = 100;
  int main_line_bias_cp = 100;
  int noise_cp = 400;
  int reference_movetime_ms = 10;

  void Validate() const;
};

class SyntheticScorer final : public Scorer {
 public:
  SyntheticScorer(SyntheticBackendSpec spec, int movetime_ms);
  Evaluation Evaluate(std::span<const std::string> moves) const override;

 private:
  SyntheticBackendSpec spec_;
  int movetime_ms_;
};

}  // namespace metaprecomp

#endif  // METAPRECOMP_ENGINES_H_
