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

#ifndef METAPRECOMP_ENTROPY_H_
#define METAPRECOMP_ENTROPY_H_

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "metaprecomp/game.h"
#include "metaprecomp/policy.h"
#include "metaprecomp/precompute.h"
#include "metaprecomp/values.h"

namespace metaprecomp {

// Histories where the first player moves (terminals included) whose exact
// value under `profile` is at least `v`, and which have no shorter such
// history on their path. Members are pairwise prefix-incomparable. Expects a
// sentinelized game.
std::vector<NodeId> FirstAdvantageSet(
    const Game& game, const Profile& profile, double v,
    std::size_t limit = kDefaultEnumerationLimit);

// The first-advantage set weighted by reach under (pre, second player's
// policy) and normalized. Members that pre never reaches are dropped.
struct AdvantageDistribution {
  double v = 0.0;
  double p_norm = 0.0;
  // Descending by unnormalized reach; ties by history id.
  std::vector<NodeId> support;
  std::vector<double> probs;
  bool empty() const { return support.empty(); }
};

AdvantageDistribution ComputeAdvantageDistribution(
    const Game& game, const Profile& profile, const Policy& pre, double v,
    std::size_t limit = kDefaultEnumerationLimit);

// Natural-log entropy. Throws EmptyDistribution for an empty distribution.
double Entropy(std::span<const double> probs);
double Entropy(const AdvantageDistribution& d);

// Sum of the z largest probabilities.
double Lemma1Mass(std::span<const double> probs, long long z);

// Smallest history budget z = ceil((1 - eps) e^{H / eps}), saturating at
// `cap`.
long long Theorem1Budget(double entropy, double eps, long long cap);

struct Theorem1Result {
  PrecompStrategy strategy;
  AdvantageDistribution distribution;
  double entropy = 0.0;
  long long z = 0;
  // Exact first-player value of the strategy against the second player's
  // policy, without penalty.
  double value = 0.0;
  // (1 - eps) v p_norm.
  double bound = 0.0;
};

// Plays pre on every first-player strict prefix of the z most likely
// first-advantage histories and `profile.first` elsewhere. `base` must be the
// policy referenced by `profile.first`.
Theorem1Result Theorem1Strategy(const Game& game,
                                std::shared_ptr<const Policy> base,
                                const Policy& second,
                                std::shared_ptr<const Policy> pre, double v,
                                double eps,
                                std::size_t limit = kDefaultEnumerationLimit);

// Slack and log offset fixed by the entropy lower-bound argument.
inline constexpr double kTheorem2Slack = 0.01;
inline constexpr double kTheorem2LogOffset = 5.0;

// max(0, (v' - v - 0.01) (ln(1 / (lambda1 L)) - 5)). Requires
// v + 0.01 < v' < 1, lambda1 > 0 and L >= 1.
double Theorem2Bound(double v, double v_prime, double lambda1, int length);

struct EntropyProfileRow {
  double v = 0.0;
  double p_norm = 0.0;
  // The remaining fields are meaningful only when `defined` is set.
  bool defined = false;
  double entropy = 0.0;
  long long z = 0;
  std::size_t memo_size = 0;
  double achieved_value = 0.0;
  double bound = 0.0;
};

std::vector<EntropyProfileRow> EntropyProfile(
    const Game& game, std::shared_ptr<const Policy> base, const Policy& second,
    std::shared_ptr<const Policy> pre, std::span<const double> v_grid,
    double eps, std::size_t limit = kDefaultEnumerationLimit);

}  // namespace metaprecomp

#endif  // METAPRECOMP_ENTROPY_H_
