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

#ifndef METAPRECOMP_UCI_H_
#define METAPRECOMP_UCI_H_

#include <sys/types.h>

#include <atomic>
#include <condition_variable>
#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "metaprecomp/engines.h"
#include "metaprecomp/eval_cache.h"

namespace metaprecomp {

struct EngineConfig {
  std::string path;
  std::vector<std::string> args;
  int movetime_ms = 50;
  // K: MultiPV lines requested, and legal actions per history.
  int multipv = 2;
  // L.
  int max_plies = 100;
  int decisive_cp = 400;
  // Per-search deadline; 0 means 10 * movetime + 5 s.
  int timeout_ms = 0;
  // Extra attempts after a transport failure, each on a fresh process.
  int retries = 2;
  std::string cache_path;

  void Validate() const;
  int Deadline() const;
  ScoredGameConfig GameConfig() const;
};

// JSON object with the fields above: path, args, movetime_ms, multipv,
// max_plies, decisive_cp, timeout_ms, retries, cache.
EngineConfig ParseEngineConfig(const std::string& json_text);
EngineConfig LoadEngineConfig(const std::string& file);

// One "info ... score ... pv ..." line.
struct UciInfo {
  int multipv = 1;
  int depth = 0;
  // Mover's frame; mates already mapped to +-kMateCp.
  int cp = 0;
  bool mate = false;
  // First pv move; empty when the line has no pv.
  std::string move;
};

// Nullopt for lines that are not info lines carrying an exact score
// (bound scores are skipped).
std::optional<UciInfo> ParseUciInfo(std::string_view line);

// Accumulates one search's output up to "bestmove".
class UciSearchParser {
 public:
  // Returns true once the "bestmove" line has been seen.
  bool Feed(std::string_view line);
  bool done() const { return done_; }
  // The deepest report per MultiPV line, ordered by line number, first `k`.
  Evaluation Result(int k) const;

 private:
  std::vector<UciInfo> lines_;
  std::optional<int> last_score_;
  bool done_ = false;
};

// Throws InvalidInput unless `move` is UCI long algebraic (e2e4, a7a8q).
void CheckUciMove(std::string_view move);

// A UCI engine child process talking over pipes.
class UciEngine {
 public:
  UciEngine(const std::string& path, const std::vector<std::string>& args,
            int handshake_timeout_ms = 10000);
  ~UciEngine();
  UciEngine(const UciEngine&) = delete;
  UciEngine& operator=(const UciEngine&) = delete;

  // "id name" from the handshake.
  const std::string& identity() const { return identity_; }
  Evaluation Search(std::span<const std::string> moves, int movetime_ms,
                    int multipv, int timeout_ms);

 private:
  void Send(const std::string& line);
  std::string ReadLine(int timeout_ms);
  void WaitFor(std::string_view token, int timeout_ms);
  void Kill();

  pid_t pid_ = -1;
  int to_engine_ = -1;
  int from_engine_ = -1;
  std::string buffer_;
  std::string identity_;
  int multipv_ = -1;
};

// Engine processes shared by scorers, at most `size` alive at once. A
// process that fails is discarded and replaced on demand.
class UciEnginePool {
 public:
  UciEnginePool(std::string path, std::vector<std::string> args,
                std::size_t size = 1);

  const std::string& identity() const { return identity_; }
  Evaluation Search(std::span<const std::string> moves, int movetime_ms,
                    int multipv, int timeout_ms);
  std::size_t searches() const { return searches_; }

 private:
  std::string path_;
  std::vector<std::string> args_;
  std::size_t size_;
  std::string identity_;
  std::mutex mu_;
  std::condition_variable cv_;
  std::vector<std::unique_ptr<UciEngine>> idle_;
  std::size_t live_ = 0;
  std::atomic<std::size_t> searches_{0};
};

// Cache-backed engine scorer at one movetime. The cache key is the engine
// identity, movetime, MultiPV and the move sequence.
class UciScorer final : public Scorer {
 public:
  UciScorer(std::shared_ptr<UciEnginePool> pool,
            std::shared_ptr<EvalCache> cache, int movetime_ms, int multipv,
            int timeout_ms, int retries = 2);

  Evaluation Evaluate(std::span<const std::string> moves) const override;
  std::size_t engine_calls() const { return calls_; }

 private:
  std::shared_ptr<UciEnginePool> pool_;
  std::shared_ptr<EvalCache> cache_;
  int movetime_ms_;
  int multipv_;
  int timeout_ms_;
  int retries_;
  mutable std::atomic<std::size_t> calls_{0};
};

// Text form of an Evaluation used as cache payload.
std::string EncodeEvaluation(const Evaluation& eval);
Evaluation DecodeEvaluation(const std::string& payload);

}  // namespace metaprecomp

#endif  // METAPRECOMP_UCI_H_
