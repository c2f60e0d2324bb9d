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

#include "metaprecomp/experiments.h"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "metaprecomp/errors.h"
#include "metaprecomp/rng.h"

namespace metaprecomp {

std::vector<double> DefaultRGrid() {
  std::vector<double> grid;
  for (int k = 0; k <= 12; ++k) {
    grid.push_back(std::pow(10.0, -6.0 + 10.0 * k / 12.0));
  }
  return grid;
}

void SweepConfig::Validate() const {
  meta.Validate();
  if (r_grid.empty()) throw InvalidInput("r_grid must not be empty");
  for (std::size_t i = 0; i < r_grid.size(); ++i) {
    if (!(r_grid[i] > 0.0) || !std::isfinite(r_grid[i])) {
      throw InvalidInput("r_grid values must be positive");
    }
    if (i > 0 && !(r_grid[i] > r_grid[i - 1])) {
      throw InvalidInput("r_grid must be sorted ascending without repeats");
    }
  }
  if (!(eps > 0.0 && eps < 1.0) || !(delta > 0.0 && delta < 1.0)) {
    throw InvalidInput("eps and delta must lie in (0, 1)");
  }
  if (samples && *samples < 1) throw InvalidInput("samples must be positive");
  if (response_workers < 1) throw InvalidInput("workers must be positive");
  if (!(fixed_r > 0.0)) throw InvalidInput("fixed_r must be positive");
  if (const auto* s = std::get_if<SyntheticSweepBackend>(&backend)) {
    s->spec.Validate();
    s->game.Validate();
    if (s->pre_movetime_ms < 1 || s->base_movetime_ms < 1 ||
        s->opponent_movetime_ms < 1) {
      throw InvalidInput("movetimes must be positive");
    }
  } else {
    const auto& e = std::get<EngineSweepBackend>(backend);
    e.engine.Validate();
    if (e.base_movetime_ms < 1 || e.opponent_movetime_ms < 1) {
      throw InvalidInput("movetimes must be positive");
    }
    if (e.pool_size < 1) throw InvalidInput("pool_size must be positive");
  }
}

namespace {

using nlohmann::json;

Player ParsePrepared(const std::string& s) {
  if (s == "white" || s == "first") return Player::kFirst;
  if (s == "black" || s == "second") return Player::kSecond;
  throw InvalidInput("prepared must be white or black");
}

SyntheticSweepBackend ParseSynthetic(const json& j) {
  SyntheticSweepBackend b;
  b.spec.seed = j.value("seed", b.spec.seed);
  b.spec.branching = j.value("branching", b.spec.branching);
  b.spec.sharp_gain_cp = j.value("sharp_gain_cp", b.spec.sharp_gain_cp);
  b.spec.main_line_bias_cp =
      j.value("main_line_bias_cp", b.spec.main_line_bias_cp);
  b.spec.noise_cp = j.value("noise_cp", b.spec.noise_cp);
  b.spec.reference_movetime_ms =
      j.value("reference_movetime_ms", b.spec.reference_movetime_ms);
  if (j.contains("prepared")) {
    b.prepared = ParsePrepared(j.at("prepared").get<std::string>());
  }
  b.game.max_plies = j.value("max_plies", b.game.max_plies);
  b.game.decisive_cp = j.value("decisive_cp", b.game.decisive_cp);
  b.game.top_k = j.value("top_k", b.spec.branching);
  b.pre_movetime_ms = j.value("pre_movetime_ms", b.pre_movetime_ms);
  b.base_movetime_ms = j.value("base_movetime_ms", b.base_movetime_ms);
  b.opponent_movetime_ms =
      j.value("opponent_movetime_ms", b.opponent_movetime_ms);
  return b;
}

}  // namespace

EngineSweepBackend ParseEngineSweepBackend(const std::string& json_text) {
  EngineSweepBackend b;
  b.engine = ParseEngineConfig(json_text);
  try {
    const json e = json::parse(json_text);
    b.base_movetime_ms = e.value("base_movetime_ms", b.base_movetime_ms);
    b.opponent_movetime_ms =
        e.value("opponent_movetime_ms", b.opponent_movetime_ms);
    b.pool_size = e.value("pool_size", b.pool_size);
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("engine config: ") + e.what());
  }
  return b;
}

EngineSweepBackend LoadEngineSweepBackend(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw InvalidInput("cannot read " + file);
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseEngineSweepBackend(ss.str());
}

SweepConfig ParseSweepConfig(const std::string& json_text) {
  SweepConfig cfg;
  try {
    const json j = json::parse(json_text);
    if (!j.is_object()) throw InvalidInput("sweep config must be an object");
    const std::string side = j.value("side", std::string("white-precomputes"));
    if (side == "white-precomputes") {
      cfg.side = SweepSide::kWhitePrecomputes;
    } else if (side == "black-precomputes") {
      cfg.side = SweepSide::kBlackPrecomputes;
    } else {
      throw InvalidInput("side must be white-precomputes or black-precomputes");
    }
    if (j.contains("r_grid")) {
      cfg.r_grid = j.at("r_grid").get<std::vector<double>>();
    }
    cfg.meta.lambda1 = j.value("lambda1", cfg.meta.lambda1);
    cfg.meta.lambda2 = j.value("lambda2", cfg.meta.lambda2);
    cfg.eps = j.value("eps", cfg.eps);
    cfg.delta = j.value("delta", cfg.delta);
    cfg.seed = j.value("seed", cfg.seed);
    const std::string mode = j.value("mode", std::string("exact"));
    if (mode != "exact" && mode != "sampled") {
      throw InvalidInput("mode must be exact or sampled");
    }
    cfg.exact = mode == "exact";
    if (j.contains("samples")) cfg.samples = j.at("samples").get<int>();
    cfg.response_workers = j.value("response_workers", cfg.response_workers);
    cfg.enumeration_limit = j.value("enumeration_limit", cfg.enumeration_limit);
    cfg.fixed_r = j.value("fixed_r", cfg.fixed_r);
    cfg.record_wall_time = j.value("record_wall_time", cfg.record_wall_time);

    const bool synthetic = j.contains("synthetic");
    const bool engine = j.contains("engine");
    if (synthetic == engine) {
      throw InvalidInput("give exactly one of synthetic or engine");
    }
    if (synthetic) {
      cfg.backend = ParseSynthetic(j.at("synthetic"));
    } else {
      cfg.backend = ParseEngineSweepBackend(j.at("engine").dump());
    }
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("sweep config: ") + e.what());
  }
  cfg.Validate();
  return cfg;
}

SweepConfig LoadSweepConfig(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw InvalidInput("cannot read " + file);
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseSweepConfig(ss.str());
}

std::uint64_t GridPointSeed(std::uint64_t root, double r) {
  return DeriveSeed(root, std::bit_cast<std::uint64_t>(r), 0x5eed);
}

SweepBackend::SweepBackend(const SweepConfig& cfg) : cfg_(cfg) {
  cfg_.Validate();
  if (const auto* s = std::get_if<SyntheticSweepBackend>(&cfg_.backend)) {
    SyntheticBackendSpec spec = s->spec;
    spec.prepared = s->prepared.value_or(cfg_.Precomputer());
    pre_ = std::make_shared<SyntheticScorer>(spec, s->pre_movetime_ms);
    base_ = std::make_shared<SyntheticScorer>(spec, s->base_movetime_ms);
    opponent_ =
        std::make_shared<SyntheticScorer>(spec, s->opponent_movetime_ms);
    game_ = s->game;
  } else {
    const auto& e = std::get<EngineSweepBackend>(cfg_.backend);
    auto pool = std::make_shared<UciEnginePool>(e.engine.path, e.engine.args,
                                                e.pool_size);
    auto cache = std::make_shared<EvalCache>(e.engine.cache_path);
    auto scorer = [&](int movetime) {
      EngineConfig c = e.engine;
      c.movetime_ms = movetime;
      return std::make_shared<UciScorer>(pool, cache, movetime,
                                         e.engine.multipv, c.Deadline(),
                                         e.engine.retries);
    };
    pre_ = scorer(e.engine.movetime_ms);
    base_ = scorer(e.base_movetime_ms);
    opponent_ = scorer(e.opponent_movetime_ms);
    game_ = e.engine.GameConfig();
  }
}

SweepInstance SweepBackend::Instance(double r) const {
  SweepInstance in;
  in.game = std::make_shared<ScoredGame>(pre_, game_);
  in.pre = std::make_shared<ScoredPolicy>(pre_, cfg_.fixed_r);
  in.base = std::make_shared<ScoredPolicy>(base_, cfg_.fixed_r);
  in.opponent = std::make_shared<ScoredPolicy>(opponent_, r);
  return in;
}

SweepRow RunGridPoint(const SweepConfig& cfg, const SweepBackend& backend,
                      double r) {
  const auto start = std::chrono::steady_clock::now();
  const SweepInstance in = backend.Instance(r);
  const Player owner = cfg.Precomputer();
  const double lambda = cfg.meta.LambdaFor(owner);

  ResponseOptions opts;
  opts.eps = cfg.eps;
  opts.delta = cfg.delta;
  opts.seed = GridPointSeed(cfg.seed, r);
  opts.mode = cfg.exact ? ValueMode::kExact : ValueMode::kSampled;
  opts.samples = cfg.samples;
  opts.workers = cfg.response_workers;
  opts.enumeration_limit = cfg.enumeration_limit;
  const ResponseResult res = BestPrecompResponse(
      *in.game, owner, in.base, *in.opponent, in.pre, lambda, opts);

  SweepRow row;
  row.r = r;
  row.log10_r = std::log10(r);
  row.S = res.strategy.size();
  row.value_with_penalty = res.value;
  row.U = res.value + lambda * static_cast<double>(row.S);
  row.seed = opts.seed;
  if (cfg.record_wall_time) {
    row.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - start)
                      .count();
  }
  return row;
}

namespace {

std::string Num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

bool SameR(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max(std::abs(a), std::abs(b));
}

void WriteAtomically(const std::string& file, const std::string& content) {
  const std::string tmp = file + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << content;
    if (!out) throw InvalidInput("cannot write " + tmp);
  }
  std::filesystem::rename(tmp, file);
}

std::string SweepCsv(std::span<const SweepRow> rows) {
  std::string out = std::string(kSweepCsvHeader) + "\n";
  for (const auto& row : rows) out += FormatSweepRow(row) + "\n";
  return out;
}

}  // namespace

std::string FormatSweepRow(const SweepRow& row) {
  return Num(row.r) + "," + Num(row.log10_r) + "," + Num(row.U) + "," +
         std::to_string(row.S) + "," + Num(row.value_with_penalty) + "," +
         std::to_string(row.seed) + "," + std::to_string(row.wall_ms);
}

std::vector<SweepRow> ParseSweepCsv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kSweepCsvHeader) {
    throw InvalidInput("not a sweep CSV (unexpected header)");
  }
  std::vector<SweepRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    if (f.size() != 7) throw InvalidInput("malformed sweep row: " + line);
    try {
      SweepRow row;
      row.r = std::stod(f[0]);
      row.log10_r = std::stod(f[1]);
      row.U = std::stod(f[2]);
      row.S = std::stoull(f[3]);
      row.value_with_penalty = std::stod(f[4]);
      row.seed = std::stoull(f[5]);
      row.wall_ms = std::stoll(f[6]);
      rows.push_back(row);
    } catch (const std::exception&) {
      throw InvalidInput("malformed sweep row: " + line);
    }
  }
  return rows;
}

std::vector<SweepRow> ReadSweepCsv(const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw InvalidInput("cannot read " + file);
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseSweepCsv(ss.str());
}

void WriteSweepCsv(const std::string& file, std::span<const SweepRow> rows) {
  WriteAtomically(file, SweepCsv(rows));
}

SweepOutcome RunSweep(const SweepConfig& cfg, const SweepRunOptions& run) {
  cfg.Validate();
  if (run.workers < 1) throw InvalidInput("workers must be positive");

  std::vector<std::optional<SweepRow>> slots(cfg.r_grid.size());
  SweepOutcome outcome;
  if (run.resume && !run.out.empty() && std::filesystem::exists(run.out)) {
    for (const SweepRow& row : ReadSweepCsv(run.out)) {
      for (std::size_t i = 0; i < cfg.r_grid.size(); ++i) {
        if (!slots[i] && SameR(row.r, cfg.r_grid[i])) {
          slots[i] = row;
          ++outcome.skipped;
        }
      }
    }
  }

  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (!slots[i]) todo.push_back(i);
  }

  std::mutex mu;
  auto flush = [&] {
    if (run.out.empty()) return;
    std::vector<SweepRow> rows;
    for (const auto& s : slots) {
      if (s) rows.push_back(*s);
    }
    WriteSweepCsv(run.out, rows);
  };
  {
    std::lock_guard lock(mu);
    flush();
  }

  if (!todo.empty()) {
    const SweepBackend backend(cfg);
    std::vector<std::optional<std::string>> errors(slots.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
      while (true) {
        const std::size_t k = next++;
        if (k >= todo.size()) return;
        const std::size_t i = todo[k];
        try {
          SweepRow row = RunGridPoint(cfg, backend, cfg.r_grid[i]);
          std::lock_guard lock(mu);
          slots[i] = row;
          ++outcome.computed;
          flush();
        } catch (const EngineTransportError& e) {
          std::lock_guard lock(mu);
          errors[i] = e.what();
        }
      }
    };
    const int threads =
        std::min<int>(run.workers, static_cast<int>(todo.size()));
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (errors[i]) {
        outcome.failed.push_back(cfg.r_grid[i]);
        outcome.errors.push_back(*errors[i]);
      }
    }
  }

  for (const auto& s : slots) {
    if (s) outcome.rows.push_back(*s);
  }
  if (!run.plot_data.empty()) {
    std::string dat = "# log10_r U S\n";
    for (const auto& row : outcome.rows) {
      dat += Num(row.log10_r) + " " + Num(row.U) + " " +
             std::to_string(row.S) + "\n";
    }
    WriteAtomically(run.plot_data, dat);
  }
  return outcome;
}

std::vector<SideComparison> CompareSides(std::span<const SweepRow> white,
                                         std::span<const SweepRow> black) {
  std::vector<SideComparison> out;
  for (const SweepRow& w : white) {
    for (const SweepRow& b : black) {
      if (SameR(w.r, b.r)) {
        out.push_back({w.r, w.U, b.U, w.U - b.U});
        break;
      }
    }
  }
  if (out.empty()) throw InvalidInput("the two sweeps share no grid point");
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.r < b.r; });
  return out;
}

std::string FormatComparisonCsv(std::span<const SideComparison> rows) {
  std::string out = "r,log10_r,U_white,U_black,difference\n";
  for (const auto& c : rows) {
    out += Num(c.r) + "," + Num(std::log10(c.r)) + "," + Num(c.u_white) + "," +
           Num(c.u_black) + "," + Num(c.difference) + "\n";
  }
  return out;
}

namespace {

std::vector<double> AverageRanks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> rank(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) rank[order[k]] = avg;
    i = j + 1;
  }
  return rank;
}

}  // namespace

double SpearmanRho(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidInput("length mismatch");
  if (x.size() < 2) throw InvalidInput("need at least two points");
  const auto rx = AverageRanks(x);
  const auto ry = AverageRanks(y);
  const double n = static_cast<double>(x.size());
  const double mean = (n + 1.0) / 2.0;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mean) * (ry[i] - mean);
    sxx += (rx[i] - mean) * (rx[i] - mean);
    syy += (ry[i] - mean) * (ry[i] - mean);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace metaprecomp
