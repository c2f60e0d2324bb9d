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

#ifndef METAPRECOMP_EXPERIMENTS_H_
#define METAPRECOMP_EXPERIMENTS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "metaprecomp/engines.h"
#include "metaprecomp/precompute.h"
#include "metaprecomp/uci.h"

namespace metaprecomp {

enum class SweepSide { kWhitePrecomputes, kBlackPrecomputes };

// 13 points, log-uniform from 1e-6 to 1e4.
std::vector<double> DefaultRGrid();

// Synthetic strength-graded backend. The side whose main lines are sharp
// defaults to the precomputing side.
struct SyntheticSweepBackend {
  SyntheticBackendSpec spec;
  std::optional<Player> prepared;
  ScoredGameConfig game{.max_plies = 16, .decisive_cp = 400, .top_k = 2};
  int pre_movetime_ms = 50;
  int base_movetime_ms = 10;
  int opponent_movetime_ms = 10;
};

// UCI engine backend. engine.movetime_ms is the precompute policy's
// movetime; the game's legal moves come from that search.
struct EngineSweepBackend {
  EngineConfig engine;
  int base_movetime_ms = 10;
  int opponent_movetime_ms = 10;
  std::size_t pool_size = 1;
};

// The engine config fields plus base_movetime_ms, opponent_movetime_ms and
// pool_size.
EngineSweepBackend ParseEngineSweepBackend(const std::string& json_text);
EngineSweepBackend LoadEngineSweepBackend(const std::string& file);

struct SweepConfig {
  SweepSide side = SweepSide::kWhitePrecomputes;
  // Opponent temperatures, strictly increasing.
  std::vector<double> r_grid = DefaultRGrid();
  MetaConfig meta{1e-5, 1e-5};
  std::variant<SyntheticSweepBackend, EngineSweepBackend> backend;
  double eps = 0.05;
  double delta = 0.05;
  std::uint64_t seed = 0;
  // Exact continuation values; otherwise sampled.
  bool exact = true;
  std::optional<int> samples;
  int response_workers = 1;
  std::size_t enumeration_limit = kDefaultEnumerationLimit;
  // Temperature of the precomputing side's base and precompute policies.
  double fixed_r = 1e-6;
  // When false, wall_ms is written as 0 so reruns are byte-identical.
  bool record_wall_time = true;

  Player Precomputer() const {
    return side == SweepSide::kWhitePrecomputes ? Player::kFirst
                                                : Player::kSecond;
  }
  void Validate() const;
};

// JSON: side ("white-precomputes" | "black-precomputes"), r_grid, lambda1,
// lambda2, eps, delta, seed, mode ("exact" | "sampled"), samples,
// response_workers, enumeration_limit, fixed_r, record_wall_time, and exactly
// one of "synthetic" or "engine". See README for the backend fields.
SweepConfig ParseSweepConfig(const std::string& json_text);
SweepConfig LoadSweepConfig(const std::string& file);

struct SweepRow {
  double r = 0.0;
  double log10_r = 0.0;
  // Precomputing side's expected utility, penalty excluded.
  double U = 0.0;
  std::size_t S = 0;
  // U - lambda * S.
  double value_with_penalty = 0.0;
  std::uint64_t seed = 0;
  std::int64_t wall_ms = 0;
};

// Seed handed to the best-response search at one grid point.
std::uint64_t GridPointSeed(std::uint64_t root, double r);

// Game and policies for one grid point.
struct SweepInstance {
  std::shared_ptr<const Game> game;
  std::shared_ptr<const Policy> base;
  std::shared_ptr<const Policy> pre;
  std::shared_ptr<const Policy> opponent;
};

// Builds grid-point instances; owns shared engine processes and the cache.
class SweepBackend {
 public:
  explicit SweepBackend(const SweepConfig& cfg);
  SweepInstance Instance(double r) const;

 private:
  SweepConfig cfg_;
  std::shared_ptr<const Scorer> pre_;
  std::shared_ptr<const Scorer> base_;
  std::shared_ptr<const Scorer> opponent_;
  ScoredGameConfig game_;
};

// Runs the best-response search at temperature r and records the row.
SweepRow RunGridPoint(const SweepConfig& cfg, const SweepBackend& backend,
                      double r);

struct SweepRunOptions {
  // CSV output; empty keeps rows in memory only.
  std::string out;
  // Keep rows already present in `out` and skip their grid points.
  bool resume = false;
  // Grid points evaluated concurrently.
  int workers = 1;
  // Whitespace-separated "log10_r U S" file for plotting; empty to skip.
  std::string plot_data;
};

struct SweepOutcome {
  // Completed rows in grid order, including resumed ones.
  std::vector<SweepRow> rows;
  std::vector<double> failed;
  std::vector<std::string> errors;
  std::size_t computed = 0;
  std::size_t skipped = 0;
  bool ok() const { return failed.empty(); }
};

// Grid points whose engine keeps failing are reported in `failed` and left
// out of the CSV, so a resumed run retries them.
SweepOutcome RunSweep(const SweepConfig& cfg, const SweepRunOptions& run);

inline constexpr const char* kSweepCsvHeader =
    "r,log10_r,U,S,value_with_penalty,seed,wall_ms";
std::string FormatSweepRow(const SweepRow& row);
std::vector<SweepRow> ParseSweepCsv(const std::string& text);
std::vector<SweepRow> ReadSweepCsv(const std::string& file);
void WriteSweepCsv(const std::string& file, std::span<const SweepRow> rows);

struct SideComparison {
  double r = 0.0;
  double u_white = 0.0;
  double u_black = 0.0;
  // u_white - u_black.
  double difference = 0.0;
};

// Pairs rows with equal r. Throws InvalidInput if no r is shared.
std::vector<SideComparison> CompareSides(std::span<const SweepRow> white,
                                         std::span<const SweepRow> black);
std::string FormatComparisonCsv(std::span<const SideComparison> rows);

// Spearman rank correlation with average ranks for ties. Zero when either
// input is constant.
double SpearmanRho(std::span<const double> x, std::span<const double> y);

}  // namespace metaprecomp

#endif  // METAPRECOMP_EXPERIMENTS_H_
