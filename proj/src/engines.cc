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

#include "metaprecomp/engines.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "metaprecomp/errors.h"
#include "metaprecomp/rng.h"

namespace metaprecomp {

std::vector<double> SoftmaxPolicy(std::span<const double> scores, double r) {
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw InvalidInput("softmax temperature must be positive");
  }
  if (scores.empty()) throw InvalidInput("softmax of an empty score vector");
  for (double s : scores) {
    if (!std::isfinite(s)) throw InvalidInput("softmax scores must be finite");
  }
  const double top = *std::max_element(scores.begin(), scores.end());
  std::vector<double> out(scores.size());
  double total = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out[i] = std::exp((scores[i] - top) / r);
    total += out[i];
  }
  for (double& p : out) p /= total;
  return out;
}

double CpToUtility(int cp, int threshold) {
  if (cp >= threshold) return 1.0;
  if (cp <= -threshold) return 0.0;
  return 0.5;
}

void ScoredGameConfig::Validate() const {
  if (max_plies < 1) throw InvalidInput("max_plies must be at least 1");
  if (decisive_cp < 1) throw InvalidInput("decisive_cp must be positive");
  if (top_k < 1) throw InvalidInput("top_k must be at least 1");
}

ScoredGame::ScoredGame(std::shared_ptr<const Scorer> scorer,
                       ScoredGameConfig cfg)
    : scorer_(std::move(scorer)), cfg_(cfg) {
  if (!scorer_) throw InvalidInput("missing scorer");
  cfg_.Validate();
  nodes_.emplace_back();
}

namespace {

int FirstPlayerCp(int depth, int mover_cp) {
  return PlayerAtDepth(depth) == Player::kFirst ? mover_cp : -mover_cp;
}

}  // namespace

void ScoredGame::Expand(NodeId h, std::unique_lock<std::mutex>& lock) const {
  if (nodes_[h].expanded) return;
  const int depth = nodes_[h].depth;
  if (depth >= cfg_.max_plies) {
    nodes_[h].expanded = true;
    nodes_[h].utility = 0.5;
    return;
  }
  std::vector<std::string> path(static_cast<std::size_t>(depth));
  for (NodeId cur = h; nodes_[cur].parent != kNoNode;
       cur = nodes_[cur].parent) {
    const Node& parent = nodes_[nodes_[cur].parent];
    path[static_cast<std::size_t>(parent.depth)] =
        parent.eval.moves[static_cast<std::size_t>(nodes_[cur].action)].move;
  }
  // Scoring may be slow (an engine search); let other threads proceed.
  lock.unlock();
  Evaluation eval = scorer_->Evaluate(path);
  lock.lock();
  if (nodes_[h].expanded) return;

  if (eval.moves.size() > static_cast<std::size_t>(cfg_.top_k)) {
    eval.moves.resize(static_cast<std::size_t>(cfg_.top_k));
  }
  const int cp = FirstPlayerCp(depth, eval.cp);
  const bool decisive = cp >= cfg_.decisive_cp || cp <= -cfg_.decisive_cp;
  if (decisive || eval.moves.empty()) {
    eval.moves.clear();
    nodes_[h].utility = CpToUtility(cp, cfg_.decisive_cp);
  } else {
    std::vector<NodeId> children;
    for (std::size_t a = 0; a < eval.moves.size(); ++a) {
      Node child;
      child.parent = h;
      child.action = static_cast<int>(a);
      child.depth = depth + 1;
      children.push_back(static_cast<NodeId>(nodes_.size()));
      nodes_.push_back(std::move(child));
    }
    nodes_[h].children = std::move(children);
  }
  nodes_[h].eval = std::move(eval);
  nodes_[h].expanded = true;
}

bool ScoredGame::Contains(NodeId h) const {
  std::lock_guard lock(mu_);
  return h >= 0 && static_cast<std::size_t>(h) < nodes_.size();
}

int ScoredGame::Depth(NodeId h) const {
  if (!Contains(h)) throw InvalidInput("unknown history");
  std::lock_guard lock(mu_);
  return nodes_[h].depth;
}

NodeId ScoredGame::Parent(NodeId h) const {
  if (!Contains(h)) throw InvalidInput("unknown history");
  std::lock_guard lock(mu_);
  return nodes_[h].parent;
}

int ScoredGame::ActionFromParent(NodeId h) const {
  if (!Contains(h)) throw InvalidInput("unknown history");
  std::lock_guard lock(mu_);
  return nodes_[h].action;
}

int ScoredGame::NumActions(NodeId h) const {
  if (!Contains(h)) throw InvalidInput("unknown history");
  std::unique_lock lock(mu_);
  Expand(h, lock);
  return static_cast<int>(nodes_[h].children.size());
}

NodeId ScoredGame::Child(NodeId h, int action) const {
  if (!Contains(h)) throw InvalidInput("unknown history");
  std::unique_lock lock(mu_);
  Expand(h, lock);
  const auto& children = nodes_[h].children;
  if (action < 0 || static_cast<std::size_t>(action) >= children.size()) {
    throw InvalidInput("action index out of range");
  }
  return children[static_cast<std::size_t>(action)];
}

std::string ScoredGame::ActionLabel(NodeId h, int action) const {
  if (!Contains(h)) throw InvalidInput("unknown history");
  std::unique_lock lock(mu_);
  Expand(h, lock);
  const auto& moves = nodes_[h].eval.moves;
  if (action < 0 || static_cast<std::size_t>(action) >= moves.size()) {
    throw InvalidInput("action index out of range");
  }
  return moves[static_cast<std::size_t>(action)].move;
}

double ScoredGame::Utility(NodeId terminal) const {
  if (!Contains(terminal)) throw InvalidInput("unknown history");
  std::unique_lock lock(mu_);
  Expand(terminal, lock);
  if (!nodes_[terminal].children.empty()) {
    throw InvalidInput("utility of a non-terminal history");
  }
  return nodes_[terminal].utility;
}

Evaluation ScoredGame::EvaluationAt(NodeId h) const {
  if (!Contains(h)) throw InvalidInput("unknown history");
  std::unique_lock lock(mu_);
  Expand(h, lock);
  return nodes_[h].eval;
}

std::vector<std::string> ScoredGame::Moves(NodeId h) const {
  return ActionPath(h);
}

std::size_t ScoredGame::NumExpanded() const {
  std::lock_guard lock(mu_);
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(),
                    [](const Node& n) { return n.expanded; }));
}

ScoredPolicy::ScoredPolicy(std::shared_ptr<const Scorer> scorer, double r)
    : scorer_(std::move(scorer)), r_(r) {
  if (!scorer_) throw InvalidInput("missing scorer");
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw InvalidInput("softmax temperature must be positive");
  }
}

void ScoredPolicy::Distribution(const Game& game, NodeId h,
                                std::vector<double>& out) const {
  const auto* scored = dynamic_cast<const ScoredGame*>(&game);
  if (scored == nullptr) {
    throw InvalidInput("scored policies need a scored game");
  }
  const Evaluation legal = scored->EvaluationAt(h);
  const std::size_t n = legal.moves.size();
  out.assign(n, 0.0);
  if (n == 0) return;

  const Evaluation own = scorer_->Evaluate(scored->Moves(h));
  std::vector<double> scores;
  std::vector<std::size_t> index;
  for (std::size_t a = 0; a < n; ++a) {
    for (const ScoredMove& m : own.moves) {
      if (m.move == legal.moves[a].move) {
        scores.push_back(m.cp);
        index.push_back(a);
        break;
      }
    }
  }
  if (scores.empty()) {
    for (std::size_t a = 0; a < n; ++a) {
      scores.push_back(legal.moves[a].cp);
      index.push_back(a);
    }
  }
  const std::vector<double> probs = SoftmaxPolicy(scores, r_);
  for (std::size_t i = 0; i < index.size(); ++i) out[index[i]] = probs[i];
}

void SyntheticBackendSpec::Validate() const {
  if (branching < 1) throw InvalidInput("branching must be at least 1");
  if (sharp_gain_cp < 0 || main_line_bias_cp < 0 || noise_cp < 0) {
    throw InvalidInput("synthetic backend parameters must be nonnegative");
  }
  if (reference_movetime_ms < 1) {
    throw InvalidInput("reference movetime must be positive");
  }
}

SyntheticScorer::SyntheticScorer(SyntheticBackendSpec spec, int movetime_ms)
    : spec_(spec), movetime_ms_(movetime_ms) {
  spec_.Validate();
  if (movetime_ms < 1) throw InvalidInput("movetime must be positive");
}

namespace {

int ParseSyntheticMove(const std::string& label, int branching) {
  if (label.size() < 2 || label[0] != 'm') {
    throw InvalidInput("not a synthetic move: " + label);
  }
  int i = 0;
  for (std::size_t k = 1; k < label.size(); ++k) {
    if (label[k] < '0' || label[k] > '9' || i > branching) {
      throw InvalidInput("not a synthetic move: " + label);
    }
    i = i * 10 + (label[k] - '0');
  }
  if (i >= branching) throw InvalidInput("illegal synthetic move: " + label);
  return i;
}

}  // namespace

Evaluation SyntheticScorer::Evaluate(
    std::span<const std::string> moves) const {
  const Player prepared = spec_.prepared;
  auto gain = [&](bool sharp, Player mover, int i) {
    if (!sharp || mover != prepared) return 0;
    return i == 0 ? spec_.sharp_gain_cp : -spec_.sharp_gain_cp;
  };

  int value = 0;  // first player's frame
  bool sharp = true;
  std::uint64_t key = spec_.seed;
  for (std::size_t ply = 0; ply < moves.size(); ++ply) {
    const Player mover = PlayerAtDepth(static_cast<int>(ply));
    const int i = ParseSyntheticMove(moves[ply], spec_.branching);
    const int g = gain(sharp, mover, i);
    value += mover == Player::kFirst ? g : -g;
    if (mover != prepared && i != 0) sharp = false;
    key = Mix64(key ^ static_cast<std::uint64_t>(i + 1));
  }

  const Player mover = PlayerAtDepth(static_cast<int>(moves.size()));
  const int mover_value = mover == Player::kFirst ? value : -value;
  const bool differ = sharp && mover == prepared && spec_.branching > 1;
  const double noise = static_cast<double>(spec_.noise_cp) *
                       spec_.reference_movetime_ms / movetime_ms_;

  Evaluation eval;
  eval.cp = mover_value;
  for (int i = 0; i < spec_.branching; ++i) {
    double score = mover_value + gain(sharp, mover, i);
    if (mover != prepared) score -= spec_.main_line_bias_cp * i;
    if (differ) {
      SplitMix64 rng(DeriveSeed(key, static_cast<std::uint64_t>(i),
                                static_cast<std::uint64_t>(movetime_ms_)));
      score += (2.0 * rng.Uniform01() - 1.0) * noise;
    }
    eval.moves.push_back(
        {"m" + std::to_string(i), static_cast<int>(std::lround(score))});
  }
  std::stable_sort(eval.moves.begin(), eval.moves.end(),
                   [](const ScoredMove& a, const ScoredMove& b) {
                     return a.cp > b.cp;
                   });
  return eval;
}

}  // namespace metaprecomp
