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

#ifndef METAPRECOMP_VALUES_H_
#define METAPRECOMP_VALUES_H_

#include <cstddef>
#include <cstdint>
#include <unordered_map>

#include "metaprecomp/game.h"
#include "metaprecomp/policy.h"

namespace metaprecomp {

// Exact enumeration refuses to visit more histories than this by default.
inline constexpr std::size_t kDefaultEnumerationLimit = 1'000'000;

// Probability of reaching `to` from `from` under `profile`: the product of the
// acting players' action probabilities along the path. Zero when `from` is not
// a prefix of `to`.
double ReachProbability(const Game& game, const Profile& profile, NodeId from,
                        NodeId to);

inline double ReachProbability(const Game& game, const Profile& profile,
                               NodeId to) {
  return ReachProbability(game, profile, game.Root(), to);
}

// First-player value of the subgame at `h`, by full enumeration. Throws
// EnumerationLimitExceeded once more than `limit` histories would be visited;
// use EstimateValue for games that large.
double ExpectedValue(const Game& game, const Profile& profile, NodeId h,
                     std::size_t limit = kDefaultEnumerationLimit);

struct ValueEstimate {
  double mean = 0.0;
  int samples = 0;
  std::uint64_t seed = 0;
};

// Mean first-player utility of `samples` rollouts from `h`. Rollout j draws
// from a stream derived from (seed, h, j), so the result depends only on the
// arguments.
ValueEstimate EstimateValue(const Game& game, const Profile& profile, NodeId h,
                            int samples, std::uint64_t seed);

// Memoized exact values for one fixed profile. Evaluating a history also
// caches every history below it. Not thread-safe.
class ExactValueCache {
 public:
  ExactValueCache(const Game& game, const Profile& profile,
                  std::size_t limit = kDefaultEnumerationLimit);

  double Value(NodeId h);
  std::size_t visited() const { return visited_; }

 private:
  double Compute(NodeId h);

  const Game& game_;
  Profile profile_;
  std::size_t limit_;
  std::size_t visited_ = 0;
  std::unordered_map<NodeId, double> values_;
  std::vector<double> buf_;
};

}  // namespace metaprecomp

#endif  // METAPRECOMP_VALUES_H_
