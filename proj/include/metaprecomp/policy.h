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

#ifndef METAPRECOMP_POLICY_H_
#define METAPRECOMP_POLICY_H_

#include <memory>
#include <span>
#include <vector>

#include "metaprecomp/game.h"

namespace metaprecomp {

// Tolerance on the sum of a probability vector.
inline constexpr double kProbabilityTolerance = 1e-9;

// Behavioral strategy oracle: maps a history to a distribution over its
// actions. Queried only at histories where its player moves.
class Policy {
 public:
  virtual ~Policy() = default;

  // Writes the distribution over actions(h) into `out` (resized as needed).
  virtual void Distribution(const Game& game, NodeId h,
                            std::vector<double>& out) const = 0;

  std::vector<double> Distribution(const Game& game, NodeId h) const {
    std::vector<double> out;
    Distribution(game, h, out);
    return out;
  }
};

// Throws InvalidInput unless `probs` is nonnegative and sums to one.
void CheckDistribution(std::span<const double> probs);

class UniformPolicy final : public Policy {
 public:
  using Policy::Distribution;
  void Distribution(const Game& game, NodeId h,
                    std::vector<double>& out) const override;
};

// Explicit per-history probability vectors. Histories with a single action
// need no entry.
class TabularPolicy final : public Policy {
 public:
  using Policy::Distribution;
  void Set(NodeId h, std::vector<double> probs);
  bool Has(NodeId h) const;
  // Histories with an explicit entry, ascending.
  std::vector<NodeId> Histories() const;
  const std::vector<double>& At(NodeId h) const;

  void Distribution(const Game& game, NodeId h,
                    std::vector<double>& out) const override;

 private:
  std::vector<std::vector<double>> table_;
};

// A pair of policies, one per player. Non-owning view.
struct Profile {
  const Policy& first;
  const Policy& second;

  const Policy& For(Player p) const {
    return p == Player::kFirst ? first : second;
  }
};

// Materializes `policy` at every history of `game` with two or more actions.
TabularPolicy Tabulate(const GameTree& game, const Policy& policy);

}  // namespace metaprecomp

#endif  // METAPRECOMP_POLICY_H_
