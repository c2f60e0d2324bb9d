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

#ifndef METAPRECOMP_META_EQUILIBRIUM_H_
#define METAPRECOMP_META_EQUILIBRIUM_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "metaprecomp/game.h"
#include "metaprecomp/policy.h"
#include "metaprecomp/precompute.h"
#include "metaprecomp/values.h"

namespace metaprecomp {

// The base policies and the shared precompute policy of a meta-game.
struct MetaPolicies {
  std::shared_ptr<const Policy> base1;
  std::shared_ptr<const Policy> base2;
  std::shared_ptr<const Policy> pre;
  const Policy& Base(Player p) const {
    return p == Player::kFirst ? *base1 : *base2;
  }
  std::shared_ptr<const Policy> BasePtr(Player p) const {
    return p == Player::kFirst ? base1 : base2;
  }
  void Validate() const;
};

// Histories where memorizing can pay off for some opponent precomputation
// strategy. core[i] holds player i's decision points whose reach, with player
// i on pre and the opponent on pre up to some cutoff and its base policy
// after, is at least lambda_i. `histories` adds the children and
// grandchildren of every core history: everything the transformed game can
// touch.
struct HighProbabilitySet {
  std::array<std::vector<NodeId>, 2> core;
  std::vector<NodeId> histories;
  bool InCore(Player p, NodeId h) const {
    return core_lookup[PlayerIndex(p)].contains(h);
  }
  std::size_t size() const { return histories.size(); }

  std::array<std::unordered_set<NodeId>, 2> core_lookup;
};

HighProbabilitySet ComputeHighProbabilitySet(const Game& game,
                                             const MetaPolicies& policies,
                                             const MetaConfig& cfg);

// c in |W| <= c A^2 (L+2)^2 (1/lambda1 + 1/lambda2).
inline constexpr double kHighProbabilitySetConstant = 3.0;
double HighProbabilitySetBound(int max_actions, int max_length,
                               const MetaConfig& cfg);

// Extensive-form game in which each player chooses, at each of its turns
// while still precomputing, whether to keep precomputing (draw the move from
// pre) or stop for good (draw from its base policy). The draw is a chance
// move. Once both players have stopped, or the history leaves the high
// probability set, the node is terminal with the supplied value of the base
// profile. Terminal utility is value - lambda1 z1 + lambda2 z2, where z_i sums
// 1/(chance-only reach) over player i's precompute choices on the path.
//
// Chance outcomes with probability zero are not expanded, so terminal z_i
// only accounts for memorized histories that some play can reach. Profile
// evaluation and CFR therefore charge each player for the expected size of
// its own memorization set directly (see EvaluateMetaProfile); the two agree
// whenever every policy has full support.
struct TransformedGame {
  enum class Kind : std::uint8_t { kDecision, kChance, kTerminal };
  enum Action : int { kStop = 0, kPrecompute = 1 };

  struct Node {
    Kind kind = Kind::kTerminal;
    // Decision: the chooser. Chance: the player whose move is drawn.
    Player player = Player::kFirst;
    NodeId history = kNoNode;
    int parent = -1;
    // Decision nodes only.
    int infoset = -1;
    // Chance nodes: whether the draw comes from pre.
    bool from_pre = false;
    // Decision: {stop, precompute}. Chance: one per positive-probability move.
    std::vector<int> children;
    // Chance nodes: probability of each child. Parallel to `children`.
    std::vector<double> probs;
    // Chance nodes: base-game action index of each child.
    std::vector<int> actions;
    double chance_reach = 1.0;
    // Terminal nodes.
    bool truncated = false;
    double utility = 0.0;
    double base_value = 0.0;
    double z1 = 0.0;
    double z2 = 0.0;
  };

  struct Infoset {
    Player player = Player::kFirst;
    NodeId history = kNoNode;
    std::vector<int> nodes;
    // The same player's infoset two plies up, or -1. Smaller index.
    int parent = -1;
  };

  MetaConfig cfg;
  // Preorder; every child index is larger than its parent's.
  std::vector<Node> nodes;
  std::vector<Infoset> infosets;

  // Infoset of `player` deciding at `h`, or -1.
  int FindInfoset(Player player, NodeId h) const;
  std::size_t NumTerminals() const;

  std::unordered_map<std::int64_t, int> infoset_index;
};

// First-player value of the base profile at a history.
using ValueFunction = std::function<double(NodeId)>;

// Builds the transformed game restricted to `w`. `value` is queried once per
// distinct truncated history.
TransformedGame BuildTransformedGame(const Game& game,
                                     const MetaPolicies& policies,
                                     const MetaConfig& cfg,
                                     const HighProbabilitySet& w,
                                     const ValueFunction& value);

// Behavior strategy in the transformed game: probability of precomputing at
// each infoset.
struct MetaProfile {
  std::vector<double> precompute;
};

MetaProfile UniformMetaProfile(const TransformedGame& tg);
MetaProfile AllStopProfile(const TransformedGame& tg);

// The pure profile that precomputes exactly at the listed histories.
MetaProfile PureMetaProfile(const TransformedGame& tg,
                            const std::vector<NodeId>& memo1,
                            const std::vector<NodeId>& memo2);

struct TransformedValue {
  // First-player meta value: base_value - lambda1 z1 + lambda2 z2.
  double value = 0.0;
  // Expected memorization set sizes. Each depends only on that player's own
  // precompute probabilities.
  double z1 = 0.0;
  double z2 = 0.0;
  // Expected base-game value at the terminals.
  double base_value = 0.0;
  // Expected terminal z_i (sum over terminals of reach times z_i).
  double terminal_z1 = 0.0;
  double terminal_z2 = 0.0;
};

TransformedValue EvaluateMetaProfile(const TransformedGame& tg,
                                     const MetaProfile& profile);

// Vanilla counterfactual regret minimization with simultaneous updates,
// regret matching and reach-weighted average strategies. Base values enter
// the counterfactual values weighted by opponent and chance reach; each
// player's own penalties enter unweighted.
class CfrSolver {
 public:
  explicit CfrSolver(const TransformedGame& tg);

  void Iterate(std::int64_t iterations);
  std::int64_t iterations() const { return iterations_; }

  MetaProfile CurrentProfile() const;
  // Infosets that never accumulated weight play uniformly.
  MetaProfile AverageProfile() const;
  // Sum over the player's infosets of the largest positive cumulative
  // regret, divided by the iteration count.
  std::array<double, 2> AverageRegret() const;

 private:
  const TransformedGame& tg_;
  std::int64_t iterations_ = 0;
  std::vector<std::array<double, 2>> regret_;
  std::vector<std::array<double, 2>> strategy_sum_;
  std::vector<std::array<double, 2>> current_;
  std::vector<double> reach_own_;
  std::vector<double> reach_other_;
  std::vector<double> value_;
  std::vector<double> own_reach_;
  std::vector<double> subtree_charge_;
};

struct CfrResult {
  MetaProfile average;
  MetaProfile current;
  std::array<double, 2> average_regret{};
  std::int64_t iterations = 0;
};

// `seed` is accepted for interface symmetry; vanilla CFR is deterministic.
CfrResult CfrSolve(const TransformedGame& tg, std::int64_t iterations,
                   std::uint64_t seed = 0);

// The base-game behavior policy of `player` induced by a transformed-game
// profile (Kuhn): at each history the mixture of pre and the base policy,
// weighted by the probability that the player is still precomputing.
class InducedPolicy final : public Policy {
 public:
  using Policy::Distribution;
  InducedPolicy(const TransformedGame& tg, MetaProfile profile, Player player,
                std::shared_ptr<const Policy> base,
                std::shared_ptr<const Policy> pre);
  void Distribution(const Game& game, NodeId h,
                    std::vector<double>& out) const override;
  // Probability of precomputing at `h` when still precomputing there.
  double PrecomputeProbability(NodeId h) const;

 private:
  const TransformedGame& tg_;
  MetaProfile profile_;
  Player player_;
  std::shared_ptr<const Policy> base_;
  std::shared_ptr<const Policy> pre_;
};

// Gains at or below this are summation-order noise and reported as zero.
inline constexpr double kGapRoundingTolerance = 1e-12;

struct ExploitabilityResult {
  // Best-response gains of each player over its current meta value, floored
  // at zero.
  double gap1 = 0.0;
  double gap2 = 0.0;
  TransformedValue current;
  double best_response1 = 0.0;
  double best_response2 = 0.0;
  double max_gap() const { return gap1 > gap2 ? gap1 : gap2; }
};

ExploitabilityResult Exploitability(const Game& game,
                                    const TransformedGame& tg,
                                    const MetaProfile& profile,
                                    const MetaPolicies& policies,
                                    const MetaConfig& cfg,
                                    const ResponseOptions& response);

struct EquilibriumOptions {
  double eps = 0.02;
  double delta = 0.05;
  std::uint64_t seed = 0;
  // Exact best responses and exact truncation values. When false, values and
  // best responses are sampled.
  bool exact = true;
  // When exact evaluation of truncation values exceeds the enumeration
  // guard, fall back to sampling instead of failing.
  bool fallback_to_sampling = true;
  std::optional<std::int64_t> max_iterations;
  // Defaults to max(100, |W|).
  std::optional<std::int64_t> check_interval;
  // c in the iteration cap c |W|^2 / eps^2.
  double iteration_cap_constant = 1.0;
  int workers = 1;
  std::size_t enumeration_limit = kDefaultEnumerationLimit;
};

struct EquilibriumResult {
  TransformedGame game;
  MetaProfile profile;
  // First-player meta value of `profile`.
  double value = 0.0;
  double gap1 = 0.0;
  double gap2 = 0.0;
  double certified_gap = 0.0;
  bool certified = false;
  std::int64_t iterations = 0;
  std::int64_t iteration_cap = 0;
  std::size_t w_size = 0;
  // Zero when truncation values are exact.
  int samples_per_value = 0;
};

// K = ceil(8 ln(2 |W| / delta) / eps^2) rollouts per truncation value.
int EquilibriumSampleCount(std::size_t w_size, double eps, double delta);

EquilibriumResult SolveMetaEquilibrium(const Game& game,
                                       const MetaPolicies& policies,
                                       const MetaConfig& cfg,
                                       const EquilibriumOptions& options);

}  // namespace metaprecomp

#endif  // METAPRECOMP_META_EQUILIBRIUM_H_
