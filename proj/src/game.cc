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

#include "metaprecomp/game.h"

#include <algorithm>
#include <string>
#include <utility>

#include "metaprecomp/errors.h"

namespace metaprecomp {

std::string PlayerName(Player p) {
  return p == Player::kFirst ? "first" : "second";
}

bool Game::IsPrefix(NodeId h, NodeId descendant) const {
  if (!Contains(h) || !Contains(descendant)) {
    throw InvalidInput("unknown history in prefix query");
  }
  const int target_depth = Depth(h);
  NodeId cur = descendant;
  while (cur != kNoNode && Depth(cur) > target_depth) cur = Parent(cur);
  return cur == h;
}

std::vector<NodeId> Game::PathFromRoot(NodeId h) const {
  if (!Contains(h)) throw InvalidInput("unknown history");
  std::vector<NodeId> path;
  for (NodeId cur = h; cur != kNoNode; cur = Parent(cur)) path.push_back(cur);
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<std::string> Game::ActionPath(NodeId h) const {
  const std::vector<NodeId> path = PathFromRoot(h);
  std::vector<std::string> labels;
  labels.reserve(path.size());
  for (std::size_t i = 1; i < path.size(); ++i) {
    labels.push_back(ActionLabel(path[i - 1], ActionFromParent(path[i])));
  }
  return labels;
}

NodeId Game::FindByPath(const std::vector<std::string>& labels) const {
  NodeId cur = Root();
  for (const std::string& label : labels) {
    const int n = NumActions(cur);
    NodeId next = kNoNode;
    for (int a = 0; a < n; ++a) {
      if (ActionLabel(cur, a) == label) {
        next = Child(cur, a);
        break;
      }
    }
    if (next == kNoNode) return kNoNode;
    cur = next;
  }
  return cur;
}

GameTree::GameTree() { nodes_.emplace_back(); }

GameTree GameTree::FromStructure(
    std::vector<std::vector<NodeId>> children,
    std::vector<std::vector<std::string>> labels) {
  const std::size_t n = children.size();
  if (n == 0) throw InvalidInput("game has no histories");
  if (labels.size() != n) throw InvalidInput("labels/children size mismatch");
  GameTree out;
  out.nodes_.assign(n, Node{});
  std::vector<bool> seen(n, false);
  seen[0] = true;
  std::vector<NodeId> queue = {0};
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    const NodeId h = queue[qi];
    if (labels[h].size() != children[h].size()) {
      throw InvalidInput("history " + std::to_string(h) +
                         " has mismatched labels and children");
    }
    for (std::size_t a = 0; a < children[h].size(); ++a) {
      const NodeId c = children[h][a];
      if (c <= 0 || static_cast<std::size_t>(c) >= n || seen[c]) {
        throw InvalidInput("history " + std::to_string(h) +
                           " has an invalid or repeated child " +
                           std::to_string(c));
      }
      seen[c] = true;
      Node& child = out.nodes_[c];
      child.parent = h;
      child.action = static_cast<int>(a);
      child.depth = out.nodes_[h].depth + 1;
      out.max_length_ = std::max(out.max_length_, child.depth);
      queue.push_back(c);
    }
    out.max_actions_ =
        std::max(out.max_actions_, static_cast<int>(children[h].size()));
    out.nodes_[h].children = std::move(children[h]);
    out.nodes_[h].labels = std::move(labels[h]);
  }
  if (queue.size() != n) {
    throw InvalidInput("game has histories unreachable from the root");
  }
  return out;
}

const GameTree::Node& GameTree::At(NodeId h) const {
  if (!Contains(h)) throw InvalidInput("unknown history " + std::to_string(h));
  return nodes_[static_cast<std::size_t>(h)];
}

NodeId GameTree::AddChild(NodeId parent, std::string label) {
  if (!Contains(parent)) throw InvalidInput("unknown parent history");
  if (nodes_[parent].has_utility) {
    throw InvalidInput("cannot extend a history that carries a utility");
  }
  const NodeId id = static_cast<NodeId>(nodes_.size());
  Node child;
  child.parent = parent;
  child.action = static_cast<int>(nodes_[parent].children.size());
  child.depth = nodes_[parent].depth + 1;
  nodes_.push_back(std::move(child));
  Node& p = nodes_[parent];
  p.children.push_back(id);
  p.labels.push_back(std::move(label));
  max_length_ = std::max(max_length_, nodes_[id].depth);
  max_actions_ = std::max(max_actions_, static_cast<int>(p.children.size()));
  return id;
}

void GameTree::SetUtility(NodeId leaf, double utility) {
  if (!Contains(leaf)) throw InvalidInput("unknown history");
  if (!nodes_[leaf].children.empty()) {
    throw InvalidInput("utility assigned to a non-terminal history");
  }
  if (!(utility >= 0.0 && utility <= 1.0)) {
    throw InvalidInput("terminal utility outside [0, 1]: " +
                       std::to_string(utility));
  }
  nodes_[leaf].utility = utility;
  nodes_[leaf].has_utility = true;
}

void GameTree::Validate() const {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].children.empty() && !nodes_[i].has_utility) {
      throw InvalidInput("terminal history " + std::to_string(i) +
                         " has no utility");
    }
  }
}

const std::vector<NodeId>& GameTree::Children(NodeId h) const {
  return At(h).children;
}

bool GameTree::Contains(NodeId h) const {
  return h >= 0 && static_cast<std::size_t>(h) < nodes_.size();
}

int GameTree::Depth(NodeId h) const { return At(h).depth; }

NodeId GameTree::Parent(NodeId h) const { return At(h).parent; }

int GameTree::ActionFromParent(NodeId h) const { return At(h).action; }

int GameTree::NumActions(NodeId h) const {
  return static_cast<int>(At(h).children.size());
}

NodeId GameTree::Child(NodeId h, int action) const {
  const Node& n = At(h);
  if (action < 0 || action >= static_cast<int>(n.children.size())) {
    throw InvalidInput("action out of range");
  }
  return n.children[action];
}

std::string GameTree::ActionLabel(NodeId h, int action) const {
  const Node& n = At(h);
  if (action < 0 || action >= static_cast<int>(n.labels.size())) {
    throw InvalidInput("action out of range");
  }
  return n.labels[action];
}

double GameTree::Utility(NodeId terminal) const {
  const Node& n = At(terminal);
  if (!n.has_utility) throw InvalidInput("history is not terminal");
  return n.utility;
}

bool GameTree::HasUtility(NodeId h) const { return At(h).has_utility; }

GameTree Sentinelize(const GameTree& game) {
  GameTree out = game;
  const std::size_t original = out.nodes_.size();
  for (std::size_t i = 0; i < original; ++i) {
    const NodeId h = static_cast<NodeId>(i);
    if (!out.nodes_[i].children.empty()) continue;
    if (PlayerAtDepth(out.nodes_[i].depth) == Player::kFirst) continue;
    const double u = out.nodes_[i].utility;
    out.nodes_[i].has_utility = false;
    out.nodes_[i].utility = 0.0;
    const NodeId pass = out.AddChild(h, kSentinelAction);
    out.SetUtility(pass, u);
  }
  return out;
}

}  // namespace metaprecomp
