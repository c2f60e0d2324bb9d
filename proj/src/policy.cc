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

#include "metaprecomp/policy.h"

#include <cmath>
#include <string>
#include <utility>

#include "metaprecomp/errors.h"

namespace metaprecomp {

void CheckDistribution(std::span<const double> probs) {
  if (probs.empty()) throw InvalidInput("empty distribution");
  double total = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw InvalidInput("negative or non-finite probability");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > kProbabilityTolerance) {
    throw InvalidInput("probabilities sum to " + std::to_string(total));
  }
}

void UniformPolicy::Distribution(const Game& game, NodeId h,
                                 std::vector<double>& out) const {
  const int n = game.NumActions(h);
  out.assign(static_cast<std::size_t>(n), n > 0 ? 1.0 / n : 0.0);
}

void TabularPolicy::Set(NodeId h, std::vector<double> probs) {
  if (h < 0) throw InvalidInput("negative history id");
  CheckDistribution(probs);
  if (static_cast<std::size_t>(h) >= table_.size()) table_.resize(h + 1);
  table_[h] = std::move(probs);
}

bool TabularPolicy::Has(NodeId h) const {
  return h >= 0 && static_cast<std::size_t>(h) < table_.size() &&
         !table_[h].empty();
}

std::vector<NodeId> TabularPolicy::Histories() const {
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < table_.size(); ++i) {
    if (!table_[i].empty()) out.push_back(static_cast<NodeId>(i));
  }
  return out;
}

const std::vector<double>& TabularPolicy::At(NodeId h) const {
  if (!Has(h)) throw InvalidInput("policy undefined at history " +
                                  std::to_string(h));
  return table_[h];
}

void TabularPolicy::Distribution(const Game& game, NodeId h,
                                 std::vector<double>& out) const {
  const int n = game.NumActions(h);
  if (Has(h)) {
    const std::vector<double>& probs = table_[h];
    if (static_cast<int>(probs.size()) != n) {
      throw InvalidInput("policy arity mismatch at history " +
                         std::to_string(h));
    }
    out.assign(probs.begin(), probs.end());
    return;
  }
  if (n == 1) {
    out.assign(1, 1.0);
    return;
  }
  throw InvalidInput("policy undefined at history " + std::to_string(h));
}

TabularPolicy Tabulate(const GameTree& game, const Policy& policy) {
  TabularPolicy out;
  std::vector<double> buf;
  for (std::size_t i = 0; i < game.NumNodes(); ++i) {
    const NodeId h = static_cast<NodeId>(i);
    if (game.NumActions(h) < 2) continue;
    policy.Distribution(game, h, buf);
    out.Set(h, buf);
  }
  return out;
}

}  // namespace metaprecomp
