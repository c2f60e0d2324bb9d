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

#include "metaprecomp/precompute.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>
#include <utility>

#include "metaprecomp/errors.h"

namespace metaprecomp {

namespace {

// Margin by which memorizing must beat stopping.
constexpr double kTieTolerance = 1e-12;

double OwnerValue(Player owner, double first_player_value) {
  return owner == Player::kFirst ? first_player_value
                                 : 1.0 - first_player_value;
}

}  // namespace

void MetaConfig::Validate() const {
  if (!(lambda1 > 0.0) || !(lambda2 > 0.0)) {
    throw InvalidInput("memorization penalties must be strictly positive");
  }
}

PrecompStrategy::PrecompStrategy(Player owner,
                                 std::shared_ptr<const Policy> base,
                                 std::shared_ptr<const Policy> pre,
                                 std::vector<NodeId> memo_set)
    : owner_(owner),
      base_(std::move(base)),
      pre_(std::move(pre)),
      memo_(std::move(memo_set)) {
  if (!base_ || !pre_) throw InvalidInput("precomputation strategy needs policies");
  std::sort(memo_.begin(), memo_.end());
  memo_.erase(std::unique(memo_.begin(), memo_.end()), memo_.end());
}

bool PrecompStrategy::Memorizes(NodeId h) const {
  return std::binary_search(memo_.begin(), memo_.end(), h);
}

void PrecompStrategy::Validate(const Game& game) const {
  for (NodeId h : memo_) {
    if (!game.Contains(h)) throw InvalidInput("memorized history not in game");
    if (game.PlayerToMove(h) != owner_ || game.IsTerminal(h)) {
      throw InvalidInput("memorized history " + std::to_string(h) +
                         " is not an owner decision point");
    }
    for (NodeId cur = game.Parent(h); cur != kNoNode; cur = game.Parent(cur)) {
      if (game.PlayerToMove(cur) == owner_ && !Memorizes(cur)) {
        throw InvalidInput("memorization set is not prefix closed at " +
                           std::to_string(h));
      }
    }
  }
}

PrecompPolicy::PrecompPolicy(const PrecompStrategy& strategy)
    : base_(strategy.base_ptr()),
      pre_(strategy.pre_ptr()),
      memo_(strategy.memo_set().begin(), strategy.memo_set().end()) {}

void PrecompPolicy::Distribution(const Game& game, NodeId h,
                                 std::vector<double>& out) const {
  if (memo_.contains(h)) {
    pre_->Distribution(game, h, out);
  } else {
    base_->Distribution(game, h, out);
  }
}

double MetaUtility(const Game& game, const PrecompStrategy& s1,
                   const PrecompStrategy& s2, const MetaConfig& cfg,
                   std::size_t limit) {
  if (s1.owner() != Player::kFirst || s2.owner() != Player::kSecond) {
    throw InvalidInput("meta utility expects (first, second) strategies");
  }
  const PrecompPolicy p1(s1);
  const PrecompPolicy p2(s2);
  const double u = ExpectedValue(game, Profile{p1, p2}, game.Root(), limit);
  return u - cfg.lambda1 * static_cast<double>(s1.size()) +
         cfg.lambda2 * static_cast<double>(s2.size());
}

double ResponseValue(const Game& game, const PrecompStrategy& strategy,
                     const Policy& opponent, double lambda, std::size_t limit) {
  const PrecompPolicy own(strategy);
  const Profile profile = strategy.owner() == Player::kFirst
                              ? Profile{own, opponent}
                              : Profile{opponent, own};
  const double u = ExpectedValue(game, profile, game.Root(), limit);
  return OwnerValue(strategy.owner(), u) -
         lambda * static_cast<double>(strategy.size());
}

std::size_t BoundingTree::CoreSize() const {
  return static_cast<std::size_t>(std::count_if(
      nodes.begin(), nodes.end(), [](const Node& n) { return n.core; }));
}

std::vector<NodeId> BoundingTree::CoreHistories() const {
  std::vector<NodeId> out;
  for (const Node& n : nodes) {
    if (n.core) out.push_back(n.history);
  }
  std::sort(out.begin(), out.end());
  return out;
}

BoundingTree BuildBoundingTree(const Game& game, Player owner,
                               const Policy& pre, const Policy& opponent,
                               double lambda) {
  if (!(lambda > 0.0)) throw InvalidInput("lambda must be positive");
  BoundingTree tree;
  tree.owner = owner;
  tree.lambda = lambda;
  auto add = [&tree](NodeId h, double reach) {
    tree.nodes.push_back(BoundingTree::Node{h, reach, false, {}});
    return static_cast<int>(tree.nodes.size() - 1);
  };

  std::vector<double> own_probs;
  std::vector<double> opp_probs;
  const NodeId root = game.Root();
  if (game.IsTerminal(root) || game.PlayerToMove(root) == owner) {
    tree.roots.push_back(add(root, 1.0));
  } else {
    opponent.Distribution(game, root, opp_probs);
    for (int b = 0; b < game.NumActions(root); ++b) {
      if (opp_probs[b] > 0.0) {
        tree.roots.push_back(add(game.Child(root, b), opp_probs[b]));
      }
    }
  }

  // Reach is non-increasing along a path, so nothing below a node with
  // reach < lambda can enter the core.
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    const NodeId h = tree.nodes[i].history;
    const double reach = tree.nodes[i].reach;
    if (game.IsTerminal(h) || reach < lambda) continue;
    tree.nodes[i].core = true;
    std::vector<int> successors;
    pre.Distribution(game, h, own_probs);
    const std::vector<double> pre_probs = own_probs;
    for (int a = 0; a < game.NumActions(h); ++a) {
      if (pre_probs[a] <= 0.0) continue;
      const NodeId c = game.Child(h, a);
      const double after_own = reach * pre_probs[a];
      if (game.IsTerminal(c)) {
        successors.push_back(add(c, after_own));
        continue;
      }
      opponent.Distribution(game, c, opp_probs);
      for (int b = 0; b < game.NumActions(c); ++b) {
        if (opp_probs[b] > 0.0) {
          successors.push_back(add(game.Child(c, b), after_own * opp_probs[b]));
        }
      }
    }
    tree.nodes[i].successors = std::move(successors);
  }
  return tree;
}

int SampleCountForGuarantee(int max_actions, int max_length, double lambda,
                            double eps, double delta) {
  if (!(eps > 0.0 && eps < 1.0) || !(delta > 0.0 && delta < 1.0)) {
    throw InvalidInput("eps and delta must lie in (0, 1)");
  }
  if (!(lambda > 0.0)) throw InvalidInput("lambda must be positive");
  const double a = std::max(1, max_actions);
  const double w = a * a * (max_length + 1.0) / (delta * lambda);
  const double k = std::ceil(16.0 * std::log(w) / (eps * eps));
  return static_cast<int>(std::max(1.0, k));
}

ResponseResult BestPrecompResponse(const Game& game, Player owner,
                                   std::shared_ptr<const Policy> base,
                                   const Policy& opponent,
                                   std::shared_ptr<const Policy> pre,
                                   double lambda,
                                   const ResponseOptions& options) {
  if (!(options.eps > 0.0 && options.eps < 1.0) ||
      !(options.delta > 0.0 && options.delta < 1.0)) {
    throw InvalidInput("eps and delta must lie in (0, 1)");
  }
  if (!(lambda > 0.0)) throw InvalidInput("lambda must be positive");
  if (!base || !pre) throw InvalidInput("missing base or precompute policy");
  if (options.mode == ValueMode::kOracle && !options.oracle) {
    throw InvalidInput("oracle value mode needs an oracle");
  }

  BoundingTree tree = BuildBoundingTree(game, owner, *pre, opponent, lambda);
  const std::size_t n = tree.nodes.size();

  int samples = 0;
  if (options.mode == ValueMode::kSampled) {
    samples = options.samples.value_or(SampleCountForGuarantee(
        game.MaxActions(), game.MaxLength(), lambda, options.eps,
        options.delta));
    if (samples < 1) throw InvalidInput("sample count must be positive");
  }

  // Owner-perspective continuation value of each node when the owner stops
  // memorizing there. Computed once per node.
  std::vector<double> est(n, 0.0);
  const Profile play = owner == Player::kFirst ? Profile{*base, opponent}
                                               : Profile{opponent, *base};
  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < n; ++i) {
    const NodeId h = tree.nodes[i].history;
    if (game.IsTerminal(h)) {
      est[i] = OwnerValue(owner, game.Utility(h));
    } else {
      pending.push_back(i);
    }
  }
  switch (options.mode) {
    case ValueMode::kExact: {
      ExactValueCache cache(game, play, options.enumeration_limit);
      for (std::size_t i : pending) {
        est[i] = OwnerValue(owner, cache.Value(tree.nodes[i].history));
      }
      break;
    }
    case ValueMode::kOracle:
      for (std::size_t i : pending) {
        est[i] = OwnerValue(owner, options.oracle(tree.nodes[i].history));
      }
      break;
    case ValueMode::kSampled: {
      auto run = [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
          const std::size_t i = pending[k];
          est[i] = OwnerValue(
              owner, EstimateValue(game, play, tree.nodes[i].history, samples,
                                   options.seed)
                         .mean);
        }
      };
      const std::size_t workers = static_cast<std::size_t>(
          std::clamp<int>(options.workers, 1, 256));
      if (workers == 1 || pending.size() < 2) {
        run(0, pending.size());
      } else {
        std::vector<std::jthread> threads;
        const std::size_t chunk = (pending.size() + workers - 1) / workers;
        for (std::size_t begin = 0; begin < pending.size(); begin += chunk) {
          threads.emplace_back(run, begin,
                               std::min(pending.size(), begin + chunk));
        }
      }
      break;
    }
  }

  // Bottom-up sweep; successors always follow their parent in BFS order.
  std::vector<double> best(n, 0.0);
  std::vector<bool> memorize(n, false);
  for (std::size_t k = n; k-- > 0;) {
    const BoundingTree::Node& node = tree.nodes[k];
    const double stop = est[k] * node.reach;
    if (!node.core) {
      best[k] = stop;
      continue;
    }
    double keep = -lambda;
    for (int s : node.successors) keep += best[s];
    if (keep > stop + kTieTolerance) {
      best[k] = keep;
      memorize[k] = true;
    } else {
      best[k] = stop;
    }
  }

  std::vector<NodeId> memo;
  std::vector<int> stack;
  double value = 0.0;
  for (int r : tree.roots) {
    value += best[r];
    if (memorize[r]) stack.push_back(r);
  }
  while (!stack.empty()) {
    const int k = stack.back();
    stack.pop_back();
    memo.push_back(tree.nodes[k].history);
    for (int s : tree.nodes[k].successors) {
      if (memorize[s]) stack.push_back(s);
    }
  }

  ResponseResult result{
      PrecompStrategy(owner, std::move(base), std::move(pre), std::move(memo)),
      value, samples, tree.CoreSize(), n};
  return result;
}

}  // namespace metaprecomp
