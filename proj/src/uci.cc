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

#include "metaprecomp/uci.h"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <fstream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "metaprecomp/errors.h"

namespace metaprecomp {

void EngineConfig::Validate() const {
  if (path.empty()) throw InvalidInput("engine path is required");
  if (movetime_ms <= 0) throw InvalidInput("movetime must be positive");
  if (multipv < 1) throw InvalidInput("multipv must be at least 1");
  if (timeout_ms < 0 || retries < 0) {
    throw InvalidInput("timeout and retries must be nonnegative");
  }
  GameConfig().Validate();
}

int EngineConfig::Deadline() const {
  return timeout_ms > 0 ? timeout_ms : 10 * movetime_ms + 5000;
}

ScoredGameConfig EngineConfig::GameConfig() const {
  return ScoredGameConfig{max_plies, decisive_cp, multipv};
}

EngineConfig ParseEngineConfig(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("engine config: ") + e.what());
  }
  if (!j.is_object()) throw InvalidInput("engine config must be an object");
  EngineConfig cfg;
  try {
    cfg.path = j.at("path").get<std::string>();
    cfg.args = j.value("args", std::vector<std::string>{});
    cfg.movetime_ms = j.value("movetime_ms", cfg.movetime_ms);
    cfg.multipv = j.value("multipv", cfg.multipv);
    cfg.max_plies = j.value("max_plies", cfg.max_plies);
    cfg.decisive_cp = j.value("decisive_cp", cfg.decisive_cp);
    cfg.timeout_ms = j.value("timeout_ms", cfg.timeout_ms);
    cfg.retries = j.value("retries", cfg.retries);
    cfg.cache_path = j.value("cache", std::string());
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("engine config: ") + e.what());
  }
  cfg.Validate();
  return cfg;
}

EngineConfig LoadEngineConfig(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw InvalidInput("cannot read " + file);
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseEngineConfig(ss.str());
}

namespace {

std::vector<std::string_view> Tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::optional<int> ToInt(std::string_view s) {
  if (s.empty()) return std::nullopt;
  try {
    std::size_t used = 0;
    const int v = std::stoi(std::string(s), &used);
    if (used != s.size()) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace

std::optional<UciInfo> ParseUciInfo(std::string_view line) {
  const auto tok = Tokens(line);
  if (tok.empty() || tok[0] != "info") return std::nullopt;
  UciInfo info;
  bool scored = false;
  for (std::size_t i = 1; i < tok.size(); ++i) {
    const std::string_view t = tok[i];
    auto next_int = [&]() -> std::optional<int> {
      return i + 1 < tok.size() ? ToInt(tok[++i]) : std::nullopt;
    };
    if (t == "string") {
      break;
    } else if (t == "depth") {
      info.depth = next_int().value_or(0);
    } else if (t == "multipv") {
      info.multipv = next_int().value_or(1);
    } else if (t == "score" && i + 2 < tok.size()) {
      const std::string_view kind = tok[++i];
      const auto v = ToInt(tok[++i]);
      if (!v) return std::nullopt;
      if (kind == "cp") {
        info.cp = std::clamp(*v, -kMateCp, kMateCp);
      } else if (kind == "mate") {
        info.mate = true;
        info.cp = *v > 0 ? kMateCp : -kMateCp;
      } else {
        return std::nullopt;
      }
      scored = true;
    } else if (t == "lowerbound" || t == "upperbound") {
      return std::nullopt;
    } else if (t == "pv") {
      if (i + 1 < tok.size()) info.move = std::string(tok[i + 1]);
      break;
    }
  }
  if (!scored) return std::nullopt;
  return info;
}

bool UciSearchParser::Feed(std::string_view line) {
  const auto tok = Tokens(line);
  if (!tok.empty() && tok[0] == "bestmove") {
    done_ = true;
    return true;
  }
  auto info = ParseUciInfo(line);
  if (!info) return false;
  if (info->move.empty()) {
    last_score_ = info->cp;
    return false;
  }
  for (UciInfo& existing : lines_) {
    if (existing.multipv == info->multipv) {
      if (info->depth >= existing.depth) existing = *info;
      return false;
    }
  }
  lines_.push_back(*info);
  return false;
}

Evaluation UciSearchParser::Result(int k) const {
  std::vector<UciInfo> sorted = lines_;
  std::sort(sorted.begin(), sorted.end(),
            [](const UciInfo& a, const UciInfo& b) {
              return a.multipv < b.multipv;
            });
  Evaluation eval;
  for (const UciInfo& info : sorted) {
    if (static_cast<int>(eval.moves.size()) >= k) break;
    const bool seen =
        std::any_of(eval.moves.begin(), eval.moves.end(),
                    [&](const ScoredMove& m) { return m.move == info.move; });
    if (!seen) eval.moves.push_back({info.move, info.cp});
  }
  if (!eval.moves.empty()) {
    eval.cp = eval.moves.front().cp;
  } else {
    eval.cp = last_score_.value_or(0);
  }
  return eval;
}

void CheckUciMove(std::string_view m) {
  const bool shape =
      (m.size() == 4 || m.size() == 5) && m[0] >= 'a' && m[0] <= 'h' &&
      m[1] >= '1' && m[1] <= '8' && m[2] >= 'a' && m[2] <= 'h' &&
      m[3] >= '1' && m[3] <= '8' &&
      (m.size() == 4 || std::string_view("qrbn").find(m[4]) !=
                            std::string_view::npos);
  if (!shape) throw InvalidInput("not a UCI move: " + std::string(m));
}

namespace {

void IgnoreSigpipe() {
  static std::once_flag once;
  std::call_once(once, [] { ::signal(SIGPIPE, SIG_IGN); });
}

}  // namespace

UciEngine::UciEngine(const std::string& path,
                     const std::vector<std::string>& args,
                     int handshake_timeout_ms) {
  IgnoreSigpipe();
  int in[2];
  int out[2];
  if (::pipe2(in, O_CLOEXEC) != 0) {
    throw EngineTransportError("pipe failed");
  }
  if (::pipe2(out, O_CLOEXEC) != 0) {
    ::close(in[0]);
    ::close(in[1]);
    throw EngineTransportError("pipe failed");
  }
  std::vector<std::string> argv_store = {path};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());
  argv.push_back(nullptr);

  pid_ = ::fork();
  if (pid_ < 0) {
    for (int fd : {in[0], in[1], out[0], out[1]}) ::close(fd);
    throw EngineTransportError("fork failed");
  }
  if (pid_ == 0) {
    ::dup2(in[0], STDIN_FILENO);
    ::dup2(out[1], STDOUT_FILENO);
    ::execvp(argv[0], argv.data());
    ::_exit(127);
  }
  ::close(in[0]);
  ::close(out[1]);
  to_engine_ = in[1];
  from_engine_ = out[0];

  Send("uci");
  while (true) {
    const std::string line = ReadLine(handshake_timeout_ms);
    if (line.rfind("id name ", 0) == 0) identity_ = line.substr(8);
    if (line == "uciok") break;
  }
  if (identity_.empty()) identity_ = path;
  Send("isready");
  WaitFor("readyok", handshake_timeout_ms);
}

UciEngine::~UciEngine() {
  if (pid_ <= 0) return;
  const std::string quit = "quit\n";
  [[maybe_unused]] auto n = ::write(to_engine_, quit.data(), quit.size());
  ::close(to_engine_);
  ::close(from_engine_);
  for (int i = 0; i < 50; ++i) {
    if (::waitpid(pid_, nullptr, WNOHANG) == pid_) return;
    std::this_thread::sleep_for(std::chrono::milliseconds(2));
  }
  ::kill(pid_, SIGKILL);
  ::waitpid(pid_, nullptr, 0);
}

void UciEngine::Kill() {
  if (pid_ <= 0) return;
  ::kill(pid_, SIGKILL);
  ::waitpid(pid_, nullptr, 0);
  ::close(to_engine_);
  ::close(from_engine_);
  pid_ = -1;
}

void UciEngine::Send(const std::string& line) {
  if (pid_ <= 0) throw EngineTransportError("engine is not running");
  const std::string data = line + "\n";
  std::size_t off = 0;
  while (off < data.size()) {
    const ssize_t n = ::write(to_engine_, data.data() + off, data.size() - off);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) {
      Kill();
      throw EngineTransportError("engine closed its input");
    }
    off += static_cast<std::size_t>(n);
  }
}

std::string UciEngine::ReadLine(int timeout_ms) {
  const auto deadline =
      std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms);
  while (true) {
    const auto nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return line;
    }
    if (pid_ <= 0) throw EngineTransportError("engine is not running");
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
                          deadline - std::chrono::steady_clock::now())
                          .count();
    if (left <= 0) {
      Kill();
      throw EngineTransportError("engine timed out");
    }
    pollfd pfd{from_engine_, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, static_cast<int>(left));
    if (ready < 0 && errno == EINTR) continue;
    if (ready <= 0) continue;
    char chunk[4096];
    const ssize_t n = ::read(from_engine_, chunk, sizeof(chunk));
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) {
      Kill();
      throw EngineTransportError("engine exited");
    }
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

void UciEngine::WaitFor(std::string_view token, int timeout_ms) {
  while (ReadLine(timeout_ms) != token) {
  }
}

Evaluation UciEngine::Search(std::span<const std::string> moves,
                             int movetime_ms, int multipv, int timeout_ms) {
  for (const auto& m : moves) CheckUciMove(m);
  if (multipv != multipv_) {
    Send("setoption name MultiPV value " + std::to_string(multipv));
    Send("isready");
    WaitFor("readyok", timeout_ms);
    multipv_ = multipv;
  }
  std::string position = "position startpos";
  if (!moves.empty()) {
    position += " moves";
    for (const auto& m : moves) position += " " + m;
  }
  Send(position);
  Send("go movetime " + std::to_string(movetime_ms));
  UciSearchParser parser;
  const auto deadline =
      std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms);
  while (true) {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
                          deadline - std::chrono::steady_clock::now())
                          .count();
    if (parser.Feed(ReadLine(static_cast<int>(std::max<long long>(left, 0)))))
      break;
  }
  return parser.Result(multipv);
}

UciEnginePool::UciEnginePool(std::string path, std::vector<std::string> args,
                             std::size_t size)
    : path_(std::move(path)), args_(std::move(args)), size_(size) {
  if (size_ == 0) throw InvalidInput("engine pool needs at least one slot");
  auto engine = std::make_unique<UciEngine>(path_, args_);
  identity_ = engine->identity();
  idle_.push_back(std::move(engine));
  live_ = 1;
}

Evaluation UciEnginePool::Search(std::span<const std::string> moves,
                                 int movetime_ms, int multipv,
                                 int timeout_ms) {
  std::unique_ptr<UciEngine> engine;
  {
    std::unique_lock lock(mu_);
    cv_.wait(lock, [&] { return !idle_.empty() || live_ < size_; });
    if (!idle_.empty()) {
      engine = std::move(idle_.back());
      idle_.pop_back();
    } else {
      ++live_;
    }
  }
  auto release = [&](bool keep) {
    std::lock_guard lock(mu_);
    if (keep) {
      idle_.push_back(std::move(engine));
    } else {
      engine.reset();
      --live_;
    }
    cv_.notify_one();
  };
  try {
    if (!engine) engine = std::make_unique<UciEngine>(path_, args_);
    ++searches_;
    Evaluation eval = engine->Search(moves, movetime_ms, multipv, timeout_ms);
    release(true);
    return eval;
  } catch (const EngineTransportError&) {
    release(false);
    throw;
  } catch (...) {
    release(engine != nullptr);
    throw;
  }
}

UciScorer::UciScorer(std::shared_ptr<UciEnginePool> pool,
                     std::shared_ptr<EvalCache> cache, int movetime_ms,
                     int multipv, int timeout_ms, int retries)
    : pool_(std::move(pool)),
      cache_(std::move(cache)),
      movetime_ms_(movetime_ms),
      multipv_(multipv),
      timeout_ms_(timeout_ms),
      retries_(retries) {
  if (!pool_ || !cache_) throw InvalidInput("missing engine pool or cache");
  if (movetime_ms <= 0 || multipv < 1 || timeout_ms <= 0 || retries < 0) {
    throw InvalidInput("invalid engine scorer settings");
  }
}

Evaluation UciScorer::Evaluate(std::span<const std::string> moves) const {
  for (const auto& m : moves) CheckUciMove(m);
  std::string key = pool_->identity();
  key += '\t' + std::to_string(movetime_ms_) + '\t' + std::to_string(multipv_) +
         '\t';
  for (std::size_t i = 0; i < moves.size(); ++i) {
    if (i > 0) key += ' ';
    key += moves[i];
  }
  if (auto hit = cache_->Get(key)) return DecodeEvaluation(*hit);

  for (int attempt = 0;; ++attempt) {
    try {
      ++calls_;
      const Evaluation eval =
          pool_->Search(moves, movetime_ms_, multipv_, timeout_ms_);
      return DecodeEvaluation(cache_->Put(key, EncodeEvaluation(eval)));
    } catch (const EngineTransportError&) {
      if (attempt >= retries_) throw;
    }
  }
}

std::string EncodeEvaluation(const Evaluation& eval) {
  std::string out = "cp " + std::to_string(eval.cp) + "\n";
  for (const auto& m : eval.moves) {
    out += m.move + " " + std::to_string(m.cp) + "\n";
  }
  return out;
}

Evaluation DecodeEvaluation(const std::string& payload) {
  std::istringstream in(payload);
  Evaluation eval;
  std::string tag;
  if (!(in >> tag >> eval.cp) || tag != "cp") {
    throw InvalidInput("corrupt evaluation record");
  }
  ScoredMove m;
  while (in >> m.move >> m.cp) eval.moves.push_back(m);
  if (!in.eof()) throw InvalidInput("corrupt evaluation record");
  return eval;
}

}  // namespace metaprecomp
