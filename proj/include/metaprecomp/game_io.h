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

#ifndef METAPRECOMP_GAME_IO_H_
#define METAPRECOMP_GAME_IO_H_

#include <map>
#include <string>

#include "metaprecomp/game.h"
#include "metaprecomp/policy.h"

namespace metaprecomp {

// Game file, JSON:
//
//   {
//     "format": "metaprecomp-game-v1",
//     "actions_per_node": [["a", "b"], ["x", "y"], [], ...],
//     "children":         [[1, 2],     [3, 4],     [], ...],
//     "terminal_utilities": {"3": 1.0, "4": 0.0, ...},
//     "policy": {
//       "sigma1": {"0": [0.5, 0.5], ...},
//       "sigma2": {"1": [0.5, 0.5], ...},
//       "pre":    {"0": [1.0, 0.0], ...}
//     }
//   }
//
// Entry i of "actions_per_node" and "children" describes history i; history 0
// is the empty history. Terminal histories have empty lists and an entry in
// "terminal_utilities" (keys are decimal history ids, values in [0, 1]).
// Policy blocks map history ids to probability vectors aligned with that
// history's actions; histories with a single action may be omitted. Any
// number of named policies may be present.
struct GameFile {
  GameTree game;
  std::map<std::string, TabularPolicy> policies;

  // Throws InvalidInput when the named policy is missing.
  const TabularPolicy& PolicyNamed(const std::string& name) const;
};

inline constexpr const char* kGameFormat = "metaprecomp-game-v1";

GameFile ParseGameFile(const std::string& text);
std::string SerializeGameFile(const GameFile& file);

GameFile LoadGameFile(const std::string& path);
void SaveGameFile(const GameFile& file, const std::string& path);

}  // namespace metaprecomp

#endif  // METAPRECOMP_GAME_IO_H_
