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

#include "metaprecomp/meta_equilibrium.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <utility>

#include "metaprecomp/errors.h"

namespace metaprecomp {

namespace {

std::int64_t InfosetKey(Player p, NodeId h) {
  return static_cast<std::int64_t>(h) * 2 + PlayerIndex(p);
}

}  // namespace

void MetaPolicies::Validate() const {
  if (!base1 || !base2 || !pre) {
    throw InvalidInput("meta-game needs both base policies and pre");
  }
}

HighProbabilitySet ComputeHighProbabilitySet(const Game& game,
                                             const MetaPolicies& policies,
                                             const MetaConfig& cfg) {
  policies.Validate();
  cfg.Validate();
  HighProbabilitySet w;
  std::vector<NodeId> all;
  std::vector<double> own;
  std::vector<double> other;
  for (Player owner : {Player::kFirst, Player::kSecond}) {
    const double lambda = cfg.LambdaFor(owner);
    const Policy& opp_base = policies.Base(Opponent(owner));
    // full: opponent still on pre. cut: best reach with the opponent
    // switched to its base policy at some earlier turn.
    struct Item {
      NodeId h;
      double full;
      double cut;
    };
    std::deque<Item> queue;
    if (1.0 >= lambda) queue.push_back({game.Root(), 1.0, 0.0});
    auto& core = w.core[PlayerIndex(owner)];
    while (!queue.empty()) {
      const Item item = queue.front();
      queue.pop_front();
      const NodeId h = item.h;
      const int n = game.NumActions(h);
      if (n == 0) continue;
      const Player mover = game.PlayerToMove(h);
      if (mover == owner) core.push_back(h);
      policies.pre->Distribution(game, h, own);
      if (mover != owner) opp_base.Distribution(game, h, other);
      for (int a = 0; a < n; ++a) {
        double full;
        double cut;
        if (mover == owner) {
          full = item.full * own[a];
          cut = item.cut * own[a];
        } else {
          full = item.full * own[a];
          cut = std::max(item.full, item.cut) * other[a];
        }
        if (std::max(full, cut) >= lambda) {
          queue.push_back({game.Child(h, a), full, cut});
        }
      }
    }
    std::sort(core.begin(), core.end());
    w.core_lookup[PlayerIndex(owner)] =
        std::unordered_set<NodeId>(core.begin(), core.end());
    for (NodeId h : core) {
      all.push_back(h);
      for (int a = 0; a < game.NumActions(h); ++a) {
        const NodeId c = game.Child(h, a);
        all.push_back(c);
        for (int b = 0; b < game.NumActions(c); ++b) {
          all.push_back(game.Child(c, b));
        }
      }
    }
  }
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  w.histories = std::move(all);
  return w;
}

double HighProbabilitySetBound(int max_actions, int max_length,
                               const MetaConfig& cfg) {
  const double a = std::max(1, max_actions);
  const double l2 = (max_length + 2.0) * (max_length + 2.0);
  return kHighProbabilitySetConstant * a * a * l2 *
         (1.0 / cfg.lambda1 + 1.0 / cfg.lambda2);
}

int TransformedGame::FindInfoset(Player player, NodeId h) const {
  const auto it = infoset_index.find(InfosetKey(player, h));
  return it == infoset_index.end() ? -1 : it->second;
}

std::size_t TransformedGame::NumTerminals() const {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(),
                    [](const Node& n) { return n.kind == Kind::kTerminal; }));
}

namespace {

class TransformBuilder {
 public:
  TransformBuilder(const Game& game, const MetaPolicies& policies,
                   const MetaConfig& cfg, const HighProbabilitySet& w,
                   const ValueFunction& value, TransformedGame& out)
      : game_(game), policies_(policies), cfg_(cfg), w_(w), value_(value),
        out_(out) {}

  void Build() { Visit(game_.Root(), -1, true, true, 1.0, 0.0, 0.0); }

 private:
  using Node = TransformedGame::Node;
  using Kind = TransformedGame::Kind;

  int Add(Node node) {
    out_.nodes.push_back(std::move(node));
    return static_cast<int>(out_.nodes.size() - 1);
  }

  double TruncationValue(NodeId h) {
    const auto it = values_.find(h);
    if (it != values_.end()) return it->second;
    const double v = value_(h);
    if (!(v >= 0.0 && v <= 1.0)) {
      throw InvalidInput("truncation value outside [0, 1] at history " +
                         std::to_string(h));
    }
    values_.emplace(h, v);
    return v;
  }

  int Terminal(NodeId h, int parent, double chance_reach, double z1,
               double z2, bool truncated) {
    Node node;
    node.kind = Kind::kTerminal;
    node.player = game_.PlayerToMove(h);
    node.history = h;
    node.parent = parent;
    node.chance_reach = chance_reach;
    node.truncated = truncated;
    node.base_value = truncated ? TruncationValue(h) : game_.Utility(h);
    node.z1 = z1;
    node.z2 = z2;
    node.utility = node.base_value - cfg_.lambda1 * z1 + cfg_.lambda2 * z2;
    return Add(std::move(node));
  }

  int Visit(NodeId h, int parent, bool pre1, bool pre2, double chance_reach,
            double z1, double z2) {
    if (game_.IsTerminal(h)) {
      return Terminal(h, parent, chance_reach, z1, z2, false);
    }
    const Player mover = game_.PlayerToMove(h);
    const bool mine = mover == Player::kFirst ? pre1 : pre2;
    const bool other = mover == Player::kFirst ? pre2 : pre1;
    const bool can = mine && w_.InCore(mover, h);
    if (!can && !other) {
      return Terminal(h, parent, chance_reach, z1, z2, true);
    }
    if (!can) {
      return Chance(h, parent, mover, false, pre1 && mover != Player::kFirst,
                    pre2 && mover != Player::kSecond, chance_reach, z1, z2);
    }

    Node node;
    node.kind = Kind::kDecision;
    node.player = mover;
    node.history = h;
    node.parent = parent;
    node.chance_reach = chance_reach;
    const std::int64_t key = InfosetKey(mover, h);
    auto [it, inserted] = out_.infoset_index.emplace(
        key, static_cast<int>(out_.infosets.size()));
    if (inserted) {
      // A player only decides while precomputing, so its previous turn was
      // a decision too.
      const NodeId up = game_.Parent(h) == kNoNode
                            ? kNoNode
                            : game_.Parent(game_.Parent(h));
      const int parent_info = up == kNoNode ? -1 : out_.FindInfoset(mover, up);
      out_.infosets.push_back({mover, h, {}, parent_info});
    }
    node.infoset = it->second;
    const int id = Add(std::move(node));
    out_.infosets[static_cast<std::size_t>(it->second)].nodes.push_back(id);

    const bool first = mover == Player::kFirst;
    const int stop = Chance(h, id, mover, false, first ? false : pre1,
                            first ? pre2 : false, chance_reach, z1, z2);
    const double charge = 1.0 / chance_reach;
    const int keep =
        Chance(h, id, mover, true, pre1, pre2, chance_reach,
               first ? z1 + charge : z1, first ? z2 : z2 + charge);
    out_.nodes[static_cast<std::size_t>(id)].children = {stop, keep};
    return id;
  }

  int Chance(NodeId h, int parent, Player mover, bool from_pre, bool pre1,
             bool pre2, double chance_reach, double z1, double z2) {
    Node node;
    node.kind = Kind::kChance;
    node.player = mover;
    node.history = h;
    node.parent = parent;
    node.from_pre = from_pre;
    node.chance_reach = chance_reach;
    const int id = Add(std::move(node));
    const std::vector<double> probs =
        (from_pre ? *policies_.pre : policies_.Base(mover))
            .Distribution(game_, h);
    std::vector<int> children;
    std::vector<double> kept;
    std::vector<int> actions;
    for (int a = 0; a < game_.NumActions(h); ++a) {
      if (!(probs[a] > 0.0)) continue;
      children.push_back(Visit(game_.Child(h, a), id, pre1, pre2,
                               chance_reach * probs[a], z1, z2));
      kept.push_back(probs[a]);
      actions.push_back(a);
    }
    Node& stored = out_.nodes[static_cast<std::size_t>(id)];
    stored.children = std::move(children);
    stored.probs = std::move(kept);
    stored.actions = std::move(actions);
    return id;
  }

  const Game& game_;
  const MetaPolicies& policies_;
  const MetaConfig& cfg_;
  const HighProbabilitySet& w_;
  const ValueFunction& value_;
  TransformedGame& out_;
  std::unordered_map<NodeId, double> values_;
};

}  // namespace

TransformedGame BuildTransformedGame(const Game& game,
                                     const MetaPolicies& policies,
                                     const MetaConfig& cfg,
                                     const HighProbabilitySet& w,
                                     const ValueFunction& value) {
  policies.Validate();
  cfg.Validate();
  if (!value) throw InvalidInput("transformed game needs a value function");
  TransformedGame tg;
  tg.cfg = cfg;
  TransformBuilder(game, policies, cfg, w, value, tg).Build();
  return tg;
}

MetaProfile UniformMetaProfile(const TransformedGame& tg) {
  return MetaProfile{std::vector<double>(tg.infosets.size(), 0.5)};
}

MetaProfile AllStopProfile(const TransformedGame& tg) {
  return MetaProfile{std::vector<double>(tg.infosets.size(), 0.0)};
}

MetaProfile PureMetaProfile(const TransformedGame& tg,
                            const std::vector<NodeId>& memo1,
                            const std::vector<NodeId>& memo2) {
  MetaProfile p = AllStopProfile(tg);
  for (std::size_t i = 0; i < tg.infosets.size(); ++i) {
    const auto& info = tg.infosets[i];
    const auto& memo = info.player == Player::kFirst ? memo1 : memo2;
    if (std::find(memo.begin(), memo.end(), info.history) != memo.end()) {
      p.precompute[i] = 1.0;
    }
  }
  return p;
}

namespace {

// Probability that each infoset's player is still precomputing there.
std::vector<double> OwnReach(const TransformedGame& tg,
                             const std::vector<double>& precompute) {
  std::vector<double> reach(tg.infosets.size(), 1.0);
  for (std::size_t i = 0; i < tg.infosets.size(); ++i) {
    const int parent = tg.infosets[i].parent;
    if (parent >= 0) {
      const auto p = static_cast<std::size_t>(parent);
      reach[i] = reach[p] * precompute[p];
    }
  }
  return reach;
}

}  // namespace

TransformedValue EvaluateMetaProfile(const TransformedGame& tg,
                                     const MetaProfile& profile) {
  if (profile.precompute.size() != tg.infosets.size()) {
    throw InvalidInput("profile does not match the transformed game");
  }
  using Kind = TransformedGame::Kind;
  std::vector<double> reach(tg.nodes.size(), 0.0);
  TransformedValue out;
  if (!tg.nodes.empty()) reach[0] = 1.0;
  for (std::size_t i = 0; i < tg.nodes.size(); ++i) {
    const auto& node = tg.nodes[i];
    const double r = reach[i];
    switch (node.kind) {
      case Kind::kTerminal:
        out.base_value += r * node.base_value;
        out.terminal_z1 += r * node.z1;
        out.terminal_z2 += r * node.z2;
        break;
      case Kind::kDecision: {
        const double q =
            profile.precompute[static_cast<std::size_t>(node.infoset)];
        reach[static_cast<std::size_t>(node.children[0])] = r * (1.0 - q);
        reach[static_cast<std::size_t>(node.children[1])] = r * q;
        break;
      }
      case Kind::kChance:
        for (std::size_t c = 0; c < node.children.size(); ++c) {
          reach[static_cast<std::size_t>(node.children[c])] =
              r * node.probs[c];
        }
        break;
    }
  }
  const std::vector<double> own = OwnReach(tg, profile.precompute);
  for (std::size_t i = 0; i < tg.infosets.size(); ++i) {
    const double m = own[i] * profile.precompute[i];
    (tg.infosets[i].player == Player::kFirst ? out.z1 : out.z2) += m;
  }
  out.value =
      out.base_value - tg.cfg.lambda1 * out.z1 + tg.cfg.lambda2 * out.z2;
  return out;
}

CfrSolver::CfrSolver(const TransformedGame& tg)
    : tg_(tg),
      regret_(tg.infosets.size(), {0.0, 0.0}),
      strategy_sum_(tg.infosets.size(), {0.0, 0.0}),
      current_(tg.infosets.size(), {0.5, 0.5}),
      reach_own_(tg.nodes.size(), 0.0),
      reach_other_(tg.nodes.size(), 0.0),
      value_(tg.nodes.size(), 0.0),
      own_reach_(tg.infosets.size(), 1.0),
      subtree_charge_(tg.infosets.size(), 0.0) {}

namespace {

std::array<double, 2> RegretMatching(const std::array<double, 2>& r) {
  const double a = std::max(0.0, r[0]);
  const double b = std::max(0.0, r[1]);
  if (a + b <= 0.0) return {0.5, 0.5};
  return {a / (a + b), b / (a + b)};
}

}  // namespace

void CfrSolver::Iterate(std::int64_t iterations) {
  using Kind = TransformedGame::Kind;
  const std::size_t n = tg_.nodes.size();
  if (n == 0) return;
  // reach_p1 in reach_own_, reach_p2 in reach_other_; chance folded into a
  // separate factor stored as chance_reach on each node.
  for (std::int64_t t = 0; t < iterations; ++t) {
    for (std::size_t i = 0; i < regret_.size(); ++i) {
      current_[i] = RegretMatching(regret_[i]);
    }
    reach_own_[0] = 1.0;
    reach_other_[0] = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& node = tg_.nodes[i];
      if (node.kind == Kind::kTerminal) continue;
      for (std::size_t c = 0; c < node.children.size(); ++c) {
        const auto child = static_cast<std::size_t>(node.children[c]);
        double p1 = reach_own_[i];
        double p2 = reach_other_[i];
        if (node.kind == Kind::kDecision) {
          const double s =
              current_[static_cast<std::size_t>(node.infoset)][c];
          (node.player == Player::kFirst ? p1 : p2) *= s;
        }
        reach_own_[child] = p1;
        reach_other_[child] = p2;
      }
    }
    for (std::size_t i = n; i-- > 0;) {
      const auto& node = tg_.nodes[i];
      switch (node.kind) {
        case Kind::kTerminal:
          value_[i] = node.base_value;
          break;
        case Kind::kChance: {
          double v = 0.0;
          for (std::size_t c = 0; c < node.children.size(); ++c) {
            v += node.probs[c] *
                 value_[static_cast<std::size_t>(node.children[c])];
          }
          value_[i] = v;
          break;
        }
        case Kind::kDecision: {
          const auto info = static_cast<std::size_t>(node.infoset);
          const auto& s = current_[info];
          const double v0 = value_[static_cast<std::size_t>(node.children[0])];
          const double v1 = value_[static_cast<std::size_t>(node.children[1])];
          const double v = s[0] * v0 + s[1] * v1;
          value_[i] = v;
          const bool first = node.player == Player::kFirst;
          const double sign = first ? 1.0 : -1.0;
          const double opp = first ? reach_other_[i] : reach_own_[i];
          const double cf = opp * node.chance_reach;
          regret_[info][0] += cf * sign * (v0 - v);
          regret_[info][1] += cf * sign * (v1 - v);
          break;
        }
      }
    }
    // Own penalties: precomputing at I costs lambda for I plus the expected
    // number of the player's later memorized histories.
    const std::size_t m = tg_.infosets.size();
    std::fill(subtree_charge_.begin(), subtree_charge_.end(), 0.0);
    for (std::size_t i = m; i-- > 0;) {
      const int parent = tg_.infosets[i].parent;
      if (parent >= 0) {
        subtree_charge_[static_cast<std::size_t>(parent)] +=
            current_[i][1] * (1.0 + subtree_charge_[i]);
      }
    }
    for (std::size_t i = 0; i < m; ++i) {
      const auto& info = tg_.infosets[i];
      const double lambda = tg_.cfg.LambdaFor(info.player);
      const double charge = -lambda * (1.0 + subtree_charge_[i]);
      const auto& s = current_[i];
      regret_[i][0] += -s[1] * charge;
      regret_[i][1] += (1.0 - s[1]) * charge;
      own_reach_[i] =
          info.parent < 0
              ? 1.0
              : own_reach_[static_cast<std::size_t>(info.parent)] *
                    current_[static_cast<std::size_t>(info.parent)][1];
      strategy_sum_[i][0] += own_reach_[i] * s[0];
      strategy_sum_[i][1] += own_reach_[i] * s[1];
    }
    ++iterations_;
  }
}

MetaProfile CfrSolver::CurrentProfile() const {
  MetaProfile p;
  p.precompute.reserve(regret_.size());
  for (const auto& r : regret_) p.precompute.push_back(RegretMatching(r)[1]);
  return p;
}

MetaProfile CfrSolver::AverageProfile() const {
  MetaProfile p;
  p.precompute.reserve(strategy_sum_.size());
  for (const auto& s : strategy_sum_) {
    const double total = s[0] + s[1];
    p.precompute.push_back(total > 0.0 ? s[1] / total : 0.5);
  }
  return p;
}

std::array<double, 2> CfrSolver::AverageRegret() const {
  std::array<double, 2> out{0.0, 0.0};
  if (iterations_ == 0) return out;
  for (std::size_t i = 0; i < regret_.size(); ++i) {
    const double r = std::max({0.0, regret_[i][0], regret_[i][1]});
    out[static_cast<std::size_t>(PlayerIndex(tg_.infosets[i].player))] += r;
  }
  for (double& r : out) r /= static_cast<double>(iterations_);
  return out;
}

CfrResult CfrSolve(const TransformedGame& tg, std::int64_t iterations,
                   std::uint64_t /*seed*/) {
  if (iterations < 1) throw InvalidInput("CFR needs at least one iteration");
  CfrSolver solver(tg);
  solver.Iterate(iterations);
  return CfrResult{solver.AverageProfile(), solver.CurrentProfile(),
                   solver.AverageRegret(), solver.iterations()};
}

InducedPolicy::InducedPolicy(const TransformedGame& tg, MetaProfile profile,
                             Player player, std::shared_ptr<const Policy> base,
                             std::shared_ptr<const Policy> pre)
    : tg_(tg),
      profile_(std::move(profile)),
      player_(player),
      base_(std::move(base)),
      pre_(std::move(pre)) {
  if (!base_ || !pre_) throw InvalidInput("induced policy needs policies");
  if (profile_.precompute.size() != tg_.infosets.size()) {
    throw InvalidInput("profile does not match the transformed game");
  }
}

double InducedPolicy::PrecomputeProbability(NodeId h) const {
  const int info = tg_.FindInfoset(player_, h);
  return info < 0 ? 0.0 : profile_.precompute[static_cast<std::size_t>(info)];
}

void InducedPolicy::Distribution(const Game& game, NodeId h,
                                 std::vector<double>& out) const {
  // Own-play weight of arriving still precomputing (m) or stopped (s).
  double m = 1.0;
  double s = 0.0;
  std::vector<double> pre_probs;
  std::vector<double> base_probs;
  const std::vector<NodeId> path = game.PathFromRoot(h);
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    const NodeId x = path[k];
    if (game.PlayerToMove(x) != player_) continue;
    const int a = game.ActionFromParent(path[k + 1]);
    base_->Distribution(game, x, base_probs);
    if (m > 0.0) {
      const double q = PrecomputeProbability(x);
      pre_->Distribution(game, x, pre_probs);
      const double next_m = m * q * pre_probs[a];
      s = s * base_probs[a] + m * (1.0 - q) * base_probs[a];
      m = next_m;
    } else {
      s *= base_probs[a];
    }
  }
  base_->Distribution(game, h, out);
  if (m <= 0.0 || m + s <= 0.0) return;
  const double q = PrecomputeProbability(h);
  pre_->Distribution(game, h, pre_probs);
  const double total = m + s;
  for (std::size_t a = 0; a < out.size(); ++a) {
    out[a] = (m * (q * pre_probs[a] + (1.0 - q) * out[a]) + s * out[a]) /
             total;
  }
}

ExploitabilityResult Exploitability(const Game& game,
                                    const TransformedGame& tg,
                                    const MetaProfile& profile,
                                    const MetaPolicies& policies,
                                    const MetaConfig& cfg,
                                    const ResponseOptions& response) {
  policies.Validate();
  ExploitabilityResult r;
  r.current = EvaluateMetaProfile(tg, profile);
  const InducedPolicy induced1(tg, profile, Player::kFirst, policies.base1,
                               policies.pre);
  const InducedPolicy induced2(tg, profile, Player::kSecond, policies.base2,
                               policies.pre);
  r.best_response1 = BestPrecompResponse(game, Player::kFirst, policies.base1,
                                         induced2, policies.pre, cfg.lambda1,
                                         response)
                         .value;
  r.best_response2 = BestPrecompResponse(game, Player::kSecond,
                                         policies.base2, induced1,
                                         policies.pre, cfg.lambda2, response)
                         .value;
  auto gain = [](double g) { return g <= kGapRoundingTolerance ? 0.0 : g; };
  r.gap1 =
      gain(r.best_response1 + cfg.lambda2 * r.current.z2 - r.current.value);
  r.gap2 = gain(r.best_response2 + cfg.lambda1 * r.current.z1 -
                (1.0 - r.current.value));
  return r;
}

int EquilibriumSampleCount(std::size_t w_size, double eps, double delta) {
  if (!(eps > 0.0 && eps < 1.0) || !(delta > 0.0 && delta < 1.0)) {
    throw InvalidInput("eps and delta must lie in (0, 1)");
  }
  const double w = std::max<double>(1.0, static_cast<double>(w_size));
  return static_cast<int>(
      std::ceil(8.0 * std::log(2.0 * w / delta) / (eps * eps)));
}

EquilibriumResult SolveMetaEquilibrium(const Game& game,
                                       const MetaPolicies& policies,
                                       const MetaConfig& cfg,
                                       const EquilibriumOptions& options) {
  if (!(options.eps > 0.0 && options.eps < 1.0) ||
      !(options.delta > 0.0 && options.delta < 1.0)) {
    throw InvalidInput("eps and delta must lie in (0, 1)");
  }
  policies.Validate();
  cfg.Validate();

  EquilibriumResult result;
  const HighProbabilitySet w = ComputeHighProbabilitySet(game, policies, cfg);
  result.w_size = w.size();

  const Profile base{*policies.base1, *policies.base2};
  std::optional<ExactValueCache> exact;
  bool sampled = !options.exact;
  if (options.exact) exact.emplace(game, base, options.enumeration_limit);
  int samples = 0;
  auto sampled_value = [&](NodeId h) {
    if (samples == 0) {
      samples = EquilibriumSampleCount(w.size(), options.eps, options.delta);
    }
    return EstimateValue(game, base, h, samples, options.seed).mean;
  };
  ValueFunction value = [&](NodeId h) -> double {
    if (!sampled) {
      try {
        return exact->Value(h);
      } catch (const EnumerationLimitExceeded&) {
        if (!options.fallback_to_sampling) throw;
        sampled = true;
      }
    }
    return sampled_value(h);
  };
  result.game = BuildTransformedGame(game, policies, cfg, w, value);
  result.samples_per_value = samples;
  const TransformedGame& tg = result.game;

  ResponseOptions response;
  response.eps = options.eps;
  response.delta = options.delta;
  response.seed = options.seed;
  response.mode = sampled ? ValueMode::kSampled : ValueMode::kExact;
  response.workers = options.workers;
  response.enumeration_limit = options.enumeration_limit;

  const double wsize = std::max<double>(1.0, static_cast<double>(w.size()));
  const double cap_real = options.iteration_cap_constant * wsize * wsize /
                          (options.eps * options.eps);
  std::int64_t cap = static_cast<std::int64_t>(
      std::min(cap_real, static_cast<double>(
                             std::numeric_limits<std::int64_t>::max() / 2)));
  if (options.max_iterations) cap = std::min(cap, *options.max_iterations);
  cap = std::max<std::int64_t>(cap, 0);
  result.iteration_cap = cap;
  const std::int64_t interval = std::max<std::int64_t>(
      1, options.check_interval.value_or(
             std::max<std::int64_t>(100, static_cast<std::int64_t>(w.size()))));

  auto record = [&](const MetaProfile& p, std::int64_t iters) {
    const ExploitabilityResult e =
        Exploitability(game, tg, p, policies, cfg, response);
    const double gap = e.max_gap();
    if (iters == 0 || gap < result.certified_gap) {
      result.profile = p;
      result.value = e.current.value;
      result.gap1 = e.gap1;
      result.gap2 = e.gap2;
      result.certified_gap = gap;
    }
    result.iterations = iters;
    return gap <= options.eps;
  };

  // Not precomputing at all is an equilibrium whenever memorization never
  // pays; check it before running CFR.
  if (record(AllStopProfile(tg), 0) || tg.infosets.empty()) {
    result.certified = result.certified_gap <= options.eps;
    return result;
  }
  CfrSolver solver(tg);
  while (solver.iterations() < cap) {
    solver.Iterate(std::min(interval, cap - solver.iterations()));
    if (record(solver.AverageProfile(), solver.iterations())) break;
  }
  result.certified = result.certified_gap <= options.eps;
  return result;
}

}  // namespace metaprecomp
