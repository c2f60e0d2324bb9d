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

#ifndef METAPRECOMP_RANDOM_GAME_H_
#define METAPRECOMP_RANDOM_GAME_H_

#include <cstddef>
#include <cstdint>

#include "metaprecomp/game.h"
#include "metaprecomp/policy.h"

namespace metaprecomp {

enum class UtilityLaw {
  kUniform,  // U[0, 1]
  kBinary,   // {0, 1}
  kTernary,  // {0, 1/2, 1}
};

struct RandomGameSpec {
  int depth = 4;
  int branching = 2;
  UtilityLaw law = UtilityLaw::kUniform;
  // Full trees give every non-terminal history exactly `branching` actions
  // and end every line at `depth`. Otherwise each history draws its action
  // count from [1, branching] and ends early with probability `early_stop`.
  bool full = true;
  double early_stop = 0.25;
  std::size_t max_histories = 2'000'000;
};

// Deterministic for a fixed seed. The result is sentinelized, so it may be
// one level deeper than `spec.depth`.
GameTree GenerateRandomGame(std::uint64_t seed, const RandomGameSpec& spec);

// Random behavioral policy over every history with two or more actions:
// Dirichlet(1) vectors, or one-hot vectors when `deterministic` is set.
TabularPolicy GenerateRandomPolicy(const GameTree& game, std::uint64_t seed,
                                   bool deterministic = false);

}  // namespace metaprecomp

#endif  // METAPRECOMP_RANDOM_GAME_H_
