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

#ifndef METAPRECOMP_PRECOMPUTE_H_
#define METAPRECOMP_PRECOMPUTE_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <unordered_set>
#include <vector>

#include "metaprecomp/game.h"
#include "metaprecomp/policy.h"
#include "metaprecomp/values.h"

namespace metaprecomp {

// Per-history memorization penalties of the meta-game. Both must be > 0.
struct MetaConfig {
  double lambda1 = 1e-5;
  double lambda2 = 1e-5;

  double LambdaFor(Player p) const {
    return p == Player::kFirst ? lambda1 : lambda2;
  }
  void Validate() const;
};

// A policy that plays `pre` on a memorization set and `base` elsewhere. The
// set holds histories where `owner` moves and is closed under taking the
// owner's earlier histories on the same path.
class PrecompStrategy {
 public:
  PrecompStrategy(Player owner, std::shared_ptr<const Policy> base,
                  std::shared_ptr<const Policy> pre,
                  std::vector<NodeId> memo_set = {});

  Player owner() const { return owner_; }
  const Policy& base() const { return *base_; }
  const Policy& pre() const { return *pre_; }
  std::shared_ptr<const Policy> base_ptr() const { return base_; }
  std::shared_ptr<const Policy> pre_ptr() const { return pre_; }
  // Sorted ascending.
  const std::vector<NodeId>& memo_set() const { return memo_; }
  std::size_t size() const { return memo_.size(); }
  bool Memorizes(NodeId h) const;

  // Throws InvalidInput unless every member belongs to the owner and every
  // owner history on the path to a member is also a member.
  void Validate(const Game& game) const;

 private:
  Player owner_;
  std::shared_ptr<const Policy> base_;
  std::shared_ptr<const Policy> pre_;
  std::vector<NodeId> memo_;
};

// Behavioral view of a precomputation strategy.
class PrecompPolicy final : public Policy {
 public:
  using Policy::Distribution;
  explicit PrecompPolicy(const PrecompStrategy& strategy);

  void Distribution(const Game& game, NodeId h,
                    std::vector<double>& out) const override;

 private:
  std::shared_ptr<const Policy> base_;
  std::shared_ptr<const Policy> pre_;
  std::unordered_set<NodeId> memo_;
};

inline PrecompPolicy AsPolicy(const PrecompStrategy& s) {
  return PrecompPolicy(s);
}

// First-player meta-game utility of a pure strategy pair:
// u1(s1, s2) - lambda1 |S1| + lambda2 |S2|. The second player's meta utility
// is one minus this.
double MetaUtility(const Game& game, const PrecompStrategy& s1,
                   const PrecompStrategy& s2, const MetaConfig& cfg,
                   std::size_t limit = kDefaultEnumerationLimit);

// Owner-perspective value of `strategy` against a fixed opponent policy,
// charging only the owner's own memorization penalty. Exact.
double ResponseValue(const Game& game, const PrecompStrategy& strategy,
                     const Policy& opponent, double lambda,
                     std::size_t limit = kDefaultEnumerationLimit);

// The histories the best-response search needs to look at: owner histories
// reachable with probability >= lambda when the owner plays `pre` against
// `opponent` (the core), plus the owner-or-terminal histories one owner move
// and one opponent reply below each core node (the frontier). Histories
// reached with probability zero are omitted.
struct BoundingTree {
  struct Node {
    NodeId history = kNoNode;
    double reach = 0.0;
    bool core = false;
    // Indices into `nodes` of the successor histories (core nodes only).
    std::vector<int> successors;
  };

  Player owner = Player::kFirst;
  double lambda = 0.0;
  // Breadth-first order; every successor index is larger than its parent's.
  std::vector<Node> nodes;
  // The owner's first histories (or terminals) below the root.
  std::vector<int> roots;

  std::size_t CoreSize() const;
  std::vector<NodeId> CoreHistories() const;
};

BoundingTree BuildBoundingTree(const Game& game, Player owner,
                               const Policy& pre, const Policy& opponent,
                               double lambda);

// Source of the continuation values est(h) used at the leaves of the
// bounding tree.
enum class ValueMode {
  kSampled,  // mean of K rollouts under (base, opponent)
  kExact,    // full enumeration under (base, opponent)
  kOracle,   // caller-supplied first-player value estimate
};

struct ResponseOptions {
  double eps = 0.05;
  double delta = 0.05;
  std::uint64_t seed = 0;
  ValueMode mode = ValueMode::kSampled;
  // Overrides the sample count derived from (eps, delta, lambda, A, L).
  std::optional<int> samples;
  // First-player value of a history; required for ValueMode::kOracle.
  std::function<double(NodeId)> oracle;
  // Threads used to compute leaf estimates. Results do not depend on it.
  int workers = 1;
  std::size_t enumeration_limit = kDefaultEnumerationLimit;
};

struct ResponseResult {
  PrecompStrategy strategy;
  // Owner-perspective meta value ignoring the opponent's penalty; exact in
  // kExact mode, otherwise computed from the leaf estimates.
  double value = 0.0;
  int samples_per_node = 0;
  std::size_t core_size = 0;
  std::size_t tree_size = 0;
};

// K = ceil(16 ln(A^2 (L+1) / (delta lambda)) / eps^2).
int SampleCountForGuarantee(int max_actions, int max_length, double lambda,
                            double eps, double delta);

// Approximately optimal precomputation strategy for `owner` against a fixed
// opponent policy. With probability >= 1 - delta (kSampled) the returned
// strategy is within eps of the best achievable meta value; kExact returns
// the optimum. Ties between memorizing and not memorizing a history (within
// 1e-12) are resolved towards the smaller set.
ResponseResult BestPrecompResponse(const Game& game, Player owner,
                                   std::shared_ptr<const Policy> base,
                                   const Policy& opponent,
                                   std::shared_ptr<const Policy> pre,
                                   double lambda,
                                   const ResponseOptions& options);

}  // namespace metaprecomp

#endif  // METAPRECOMP_PRECOMPUTE_H_
