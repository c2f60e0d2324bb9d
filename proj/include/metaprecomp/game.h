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

#ifndef METAPRECOMP_GAME_H_
#define METAPRECOMP_GAME_H_

#include <cstdint>
#include <string>
#include <vector>

namespace metaprecomp {

// Histories are addressed by integer ids. The empty history is always 0.
using NodeId = std::int32_t;
inline constexpr NodeId kNoNode = -1;

// Label of the pass-through action appended by Sentinelize().
inline constexpr const char* kSentinelAction = "--";

enum class Player : std::uint8_t { kFirst = 0, kSecond = 1 };

inline Player Opponent(Player p) {
  return p == Player::kFirst ? Player::kSecond : Player::kFirst;
}

// Players alternate; the first player moves at even history lengths.
inline Player PlayerAtDepth(int depth) {
  return depth % 2 == 0 ? Player::kFirst : Player::kSecond;
}

inline int PlayerIndex(Player p) { return static_cast<int>(p); }

std::string PlayerName(Player p);

// A finite two-player alternating game with terminal utilities in [0, 1]
// (payoff of the first player). Implementations may expand histories lazily;
// all accessors are const and thread-safe.
class Game {
 public:
  virtual ~Game() = default;

  NodeId Root() const { return 0; }

  virtual bool Contains(NodeId h) const = 0;
  virtual int Depth(NodeId h) const = 0;
  // kNoNode for the root.
  virtual NodeId Parent(NodeId h) const = 0;
  // Index of `h` among its parent's actions; -1 for the root.
  virtual int ActionFromParent(NodeId h) const = 0;
  // Zero for terminal histories.
  virtual int NumActions(NodeId h) const = 0;
  virtual NodeId Child(NodeId h, int action) const = 0;
  virtual std::string ActionLabel(NodeId h, int action) const = 0;
  virtual double Utility(NodeId terminal) const = 0;
  // L: maximum history length (an upper bound for lazily expanded games).
  virtual int MaxLength() const = 0;
  // A: maximum number of actions at any history (an upper bound).
  virtual int MaxActions() const = 0;

  bool IsTerminal(NodeId h) const { return NumActions(h) == 0; }
  Player PlayerToMove(NodeId h) const { return PlayerAtDepth(Depth(h)); }

  // True when `h` is a (non-strict) prefix of `descendant`.
  bool IsPrefix(NodeId h, NodeId descendant) const;
  // Histories from the root to `h`, inclusive.
  std::vector<NodeId> PathFromRoot(NodeId h) const;
  // Action labels from the root to `h`.
  std::vector<std::string> ActionPath(NodeId h) const;
  // Follows action labels from the root; kNoNode if no such history.
  NodeId FindByPath(const std::vector<std::string>& labels) const;
};

// Explicitly materialized game tree. AddChild assigns ids in insertion order.
class GameTree final : public Game {
 public:
  GameTree();

  // Builds a tree from per-history child lists and action labels, preserving
  // ids. History 0 is the root; every other id must be reachable from it
  // exactly once.
  static GameTree FromStructure(std::vector<std::vector<NodeId>> children,
                                std::vector<std::vector<std::string>> labels);

  NodeId AddChild(NodeId parent, std::string label);
  // Terminal utilities must lie in [0, 1]; values outside are rejected.
  void SetUtility(NodeId leaf, double utility);
  // Checks every leaf has a utility. Throws InvalidInput otherwise.
  void Validate() const;

  std::size_t NumNodes() const { return nodes_.size(); }
  const std::vector<NodeId>& Children(NodeId h) const;

  bool Contains(NodeId h) const override;
  int Depth(NodeId h) const override;
  NodeId Parent(NodeId h) const override;
  int ActionFromParent(NodeId h) const override;
  int NumActions(NodeId h) const override;
  NodeId Child(NodeId h, int action) const override;
  std::string ActionLabel(NodeId h, int action) const override;
  double Utility(NodeId terminal) const override;
  int MaxLength() const override { return max_length_; }
  int MaxActions() const override { return max_actions_; }

  bool HasUtility(NodeId h) const;

 private:
  struct Node {
    NodeId parent = kNoNode;
    int action = -1;
    int depth = 0;
    std::vector<NodeId> children;
    std::vector<std::string> labels;
    double utility = 0.0;
    bool has_utility = false;
  };

  const Node& At(NodeId h) const;

  std::vector<Node> nodes_;
  int max_length_ = 0;
  int max_actions_ = 0;

  friend GameTree Sentinelize(const GameTree& game);
};

// Gives every terminal history where the second player would move a single
// pass-through child carrying the same utility, so all games end on the first
// player's turn. Existing ids are preserved. Idempotent.
GameTree Sentinelize(const GameTree& game);

}  // namespace metaprecomp

#endif  // METAPRECOMP_GAME_H_
