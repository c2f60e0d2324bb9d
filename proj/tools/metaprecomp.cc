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

// metaprecomp command line: best responses, entropy profiles, meta-game
// equilibria, randomness sweeps and side comparisons.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "metaprecomp/entropy.h"
#include "metaprecomp/errors.h"
#include "metaprecomp/experiments.h"
#include "metaprecomp/game_io.h"
#include "metaprecomp/meta_equilibrium.h"
#include "metaprecomp/precompute.h"
#include "metaprecomp/random_game.h"
#include "metaprecomp/rng.h"

namespace mp = metaprecomp;
using nlohmann::json;

namespace {

constexpr int kExitError = 1;
constexpr int kExitIncomplete = 2;

// A game with the three policies every command needs.
struct Source {
  std::shared_ptr<const mp::Game> game;
  std::shared_ptr<const mp::Policy> sigma1;
  std::shared_ptr<const mp::Policy> sigma2;
  std::shared_ptr<const mp::Policy> pre;
  std::shared_ptr<mp::SweepBackend> backend;
};

mp::Player ParsePlayer(const std::string& s) {
  if (s == "first" || s == "white") return mp::Player::kFirst;
  if (s == "second" || s == "black") return mp::Player::kSecond;
  throw mp::InvalidInput("player must be first or second");
}

Source FromGameFile(const std::string& path) {
  mp::GameFile file = mp::LoadGameFile(path);
  Source src;
  auto policy = [&](const char* name) {
    return std::make_shared<mp::TabularPolicy>(file.PolicyNamed(name));
  };
  src.sigma1 = policy("sigma1");
  src.sigma2 = policy("sigma2");
  src.pre = policy("pre");
  // Sentinel histories have one action, so the policy tables stay valid.
  src.game = std::make_shared<mp::GameTree>(mp::Sentinelize(file.game));
  return src;
}

// The precomputing side plays the precompute policy's scorer at a fixed low
// temperature; the other side plays its scorer at temperature r.
Source FromEngine(const std::string& path, mp::Player precomputer, double r,
                  double fixed_r) {
  mp::SweepConfig cfg;
  cfg.side = precomputer == mp::Player::kFirst
                 ? mp::SweepSide::kWhitePrecomputes
                 : mp::SweepSide::kBlackPrecomputes;
  cfg.backend = mp::LoadEngineSweepBackend(path);
  cfg.r_grid = {r};
  cfg.fixed_r = fixed_r;
  Source src;
  src.backend = std::make_shared<mp::SweepBackend>(cfg);
  const mp::SweepInstance in = src.backend->Instance(r);
  src.game = in.game;
  src.pre = in.pre;
  if (precomputer == mp::Player::kFirst) {
    src.sigma1 = in.base;
    src.sigma2 = in.opponent;
  } else {
    src.sigma1 = in.opponent;
    src.sigma2 = in.base;
  }
  return src;
}

struct SourceFlags {
  std::string game;
  std::string engine;
  double r = 1.0;
  double fixed_r = 1e-6;

  void Add(CLI::App* cmd) {
    auto* g = cmd->add_option("--game", game, "Game file (JSON)");
    auto* e =
        cmd->add_option("--engine", engine, "UCI engine config (JSON)");
    g->excludes(e);
    cmd->add_option("--r", r, "Engine mode: opponent temperature (cp)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--fixed-r", fixed_r,
                    "Engine mode: precomputing side's temperature")
        ->check(CLI::PositiveNumber);
  }

  Source Load(mp::Player precomputer) const {
    if (game.empty() == engine.empty()) {
      throw mp::InvalidInput("give exactly one of --game or --engine");
    }
    if (!game.empty()) return FromGameFile(game);
    return FromEngine(engine, precomputer, r, fixed_r);
  }
};

void WriteText(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw mp::InvalidInput("cannot write " + path);
  out << text;
  if (!out.flush()) throw mp::InvalidInput("cannot write " + path);
}

std::string Num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

json PathJson(const mp::Game& game, mp::NodeId h) {
  return json(game.ActionPath(h));
}

// best-response

struct BestResponseFlags {
  SourceFlags source;
  std::string player = "first";
  double lambda = 1e-5;
  double eps = 0.05;
  double delta = 0.05;
  std::uint64_t seed = 0;
  bool exact = false;
  std::optional<int> samples;
  int workers = 1;
  std::string out;
};

int RunBestResponse(const BestResponseFlags& f) {
  const mp::Player owner = ParsePlayer(f.player);
  const Source src = f.source.Load(owner);
  mp::ResponseOptions opts;
  opts.eps = f.eps;
  opts.delta = f.delta;
  opts.seed = f.seed;
  opts.mode = f.exact ? mp::ValueMode::kExact : mp::ValueMode::kSampled;
  opts.samples = f.samples;
  opts.workers = f.workers;
  const auto& base = owner == mp::Player::kFirst ? src.sigma1 : src.sigma2;
  const auto& opponent = owner == mp::Player::kFirst ? src.sigma2 : src.sigma1;
  const mp::ResponseResult res = mp::BestPrecompResponse(
      *src.game, owner, base, *opponent, src.pre, f.lambda, opts);

  json memo = json::array();
  for (mp::NodeId h : res.strategy.memo_set()) {
    memo.push_back(PathJson(*src.game, h));
  }
  const double size = static_cast<double>(res.strategy.size());
  json j = {
      {"owner", mp::PlayerName(owner)},
      {"lambda", f.lambda},
      {"mode", f.exact ? "exact" : "sampled"},
      {"seed", f.seed},
      {"value", res.value},
      {"value_without_penalty", res.value + f.lambda * size},
      {"memo_size", res.strategy.size()},
      {"memo_set", memo},
      {"samples_per_node", res.samples_per_node},
      {"core_size", res.core_size},
      {"tree_size", res.tree_size},
  };
  WriteText(f.out, j.dump(2) + "\n");
  return 0;
}

// entropy-profile

struct EntropyFlags {
  std::string game;
  std::vector<double> v_grid = {0.25, 0.5, 0.75};
  double eps = 0.5;
  std::string out;
};

int RunEntropyProfile(const EntropyFlags& f) {
  const Source src = FromGameFile(f.game);
  const auto rows = mp::EntropyProfile(*src.game, src.sigma1, *src.sigma2,
                                       src.pre, f.v_grid, f.eps);
  std::string text =
      "v,p_norm,entropy_nats,z,memo_size,achieved_value,thm1_bound\n";
  for (const auto& r : rows) {
    text += Num(r.v) + "," + Num(r.p_norm) + ",";
    if (r.defined) {
      text += Num(r.entropy) + "," + std::to_string(r.z) + "," +
              std::to_string(r.memo_size) + "," + Num(r.achieved_value) +
              "," + Num(r.bound);
    } else {
      // Nothing to normalize: the advantage set is never reached.
      text += ",,,,";
    }
    text += "\n";
  }
  WriteText(f.out, text);
  return 0;
}

// equilibrium

struct EquilibriumFlags {
  SourceFlags source;
  double lambda1 = 1e-5;
  double lambda2 = 1e-5;
  double eps = 0.02;
  double delta = 0.05;
  std::optional<std::int64_t> max_iters;
  std::uint64_t seed = 0;
  bool sampled = false;
  int workers = 1;
  std::string out;
};

int RunEquilibrium(const EquilibriumFlags& f) {
  const Source src = f.source.Load(mp::Player::kFirst);
  const mp::MetaPolicies policies{src.sigma1, src.sigma2, src.pre};
  const mp::MetaConfig cfg{f.lambda1, f.lambda2};
  mp::EquilibriumOptions opts;
  opts.eps = f.eps;
  opts.delta = f.delta;
  opts.seed = f.seed;
  opts.exact = !f.sampled;
  opts.max_iterations = f.max_iters;
  opts.workers = f.workers;
  const mp::EquilibriumResult res =
      mp::SolveMetaEquilibrium(*src.game, policies, cfg, opts);

  json infosets = json::array();
  for (std::size_t i = 0; i < res.game.infosets.size(); ++i) {
    const auto& s = res.game.infosets[i];
    const double p = res.profile.precompute[i];
    infosets.push_back({{"player", mp::PlayerName(s.player)},
                        {"history", PathJson(*src.game, s.history)},
                        {"precompute", p},
                        {"stop", 1.0 - p}});
  }
  json j = {
      {"lambda1", f.lambda1},
      {"lambda2", f.lambda2},
      {"value", res.value},
      {"gap1", res.gap1},
      {"gap2", res.gap2},
      {"certified_gap", res.certified_gap},
      {"certified", res.certified},
      {"iterations", res.iterations},
      {"iteration_cap", res.iteration_cap},
      {"w_size", res.w_size},
      {"samples_per_value", res.samples_per_value},
      {"infosets", infosets},
  };
  WriteText(f.out, j.dump(2) + "\n");
  if (!res.certified) {
    std::cerr << "warning: gap " << res.certified_gap << " exceeds eps "
              << f.eps << " after " << res.iterations << " iterations\n";
  }
  return 0;
}

// sweep

struct SweepFlags {
  std::string config;
  std::string out;
  bool resume = false;
  int workers = 1;
  std::string plot_data;
};

std::string DefaultPlotPath(const std::string& csv) {
  std::filesystem::path p(csv);
  p.replace_extension(".plot.dat");
  return p.string();
}

int RunSweepCommand(const SweepFlags& f) {
  const mp::SweepConfig cfg = mp::LoadSweepConfig(f.config);
  mp::SweepRunOptions run;
  run.out = f.out;
  run.resume = f.resume;
  run.workers = f.workers;
  run.plot_data = f.plot_data.empty() ? DefaultPlotPath(f.out) : f.plot_data;
  const mp::SweepOutcome res = mp::RunSweep(cfg, run);
  std::cerr << "sweep: " << res.computed << " computed, " << res.skipped
            << " resumed, " << res.failed.size() << " failed\n";
  for (std::size_t i = 0; i < res.failed.size(); ++i) {
    std::cerr << "  r=" << res.failed[i] << ": " << res.errors[i] << "\n";
  }
  return res.ok() ? 0 : kExitIncomplete;
}

// compare

struct CompareFlags {
  std::string white;
  std::string black;
  std::string out;
};

int RunCompare(const CompareFlags& f) {
  const auto w = mp::ReadSweepCsv(f.white);
  const auto b = mp::ReadSweepCsv(f.black);
  WriteText(f.out, mp::FormatComparisonCsv(mp::CompareSides(w, b)));
  return 0;
}

// gen-game

struct GenFlags {
  std::uint64_t seed = 0;
  mp::RandomGameSpec spec;
  std::string law = "uniform";
  bool sparse = false;
  bool deterministic_pre = false;
  std::string out;
};

int RunGenGame(GenFlags f) {
  if (f.law == "uniform") {
    f.spec.law = mp::UtilityLaw::kUniform;
  } else if (f.law == "binary") {
    f.spec.law = mp::UtilityLaw::kBinary;
  } else if (f.law == "ternary") {
    f.spec.law = mp::UtilityLaw::kTernary;
  } else {
    throw mp::InvalidInput("law must be uniform, binary or ternary");
  }
  f.spec.full = !f.sparse;
  mp::GameFile file;
  file.game = mp::GenerateRandomGame(f.seed, f.spec);
  file.policies["sigma1"] =
      mp::GenerateRandomPolicy(file.game, mp::DeriveSeed(f.seed, 1));
  file.policies["sigma2"] =
      mp::GenerateRandomPolicy(file.game, mp::DeriveSeed(f.seed, 2));
  file.policies["pre"] = mp::GenerateRandomPolicy(
      file.game, mp::DeriveSeed(f.seed, 3), f.deterministic_pre);
  WriteText(f.out, mp::SerializeGameFile(file));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Precomputation strategies in alternating zero-sum games"};
  app.require_subcommand(1);

  BestResponseFlags br;
  auto* br_cmd = app.add_subcommand(
      "best-response", "Optimal memorization set against a fixed opponent");
  br.source.Add(br_cmd);
  br_cmd->add_option("--player", br.player, "Precomputing player")
      ->check(CLI::IsMember({"first", "second", "white", "black"}));
  br_cmd->add_option("--lambda", br.lambda, "Penalty per memorized history")
      ->check(CLI::PositiveNumber);
  br_cmd->add_option("--eps", br.eps)->check(CLI::PositiveNumber);
  br_cmd->add_option("--delta", br.delta)->check(CLI::Range(0.0, 1.0));
  br_cmd->add_option("--seed", br.seed);
  br_cmd->add_flag("--exact", br.exact, "Exact continuation values");
  br_cmd->add_option("--samples", br.samples, "Override rollouts per node");
  br_cmd->add_option("--workers", br.workers)->check(CLI::PositiveNumber);
  br_cmd->add_option("--out", br.out, "Output JSON (default stdout)");

  EntropyFlags en;
  auto* en_cmd = app.add_subcommand(
      "entropy-profile", "Advantage-set entropy and the constructive bound");
  en_cmd->add_option("--game", en.game, "Game file (JSON)")->required();
  en_cmd->add_option("--v-grid", en.v_grid, "Advantage thresholds")
      ->delimiter(',');
  en_cmd->add_option("--eps", en.eps)->check(CLI::Range(0.0, 1.0));
  en_cmd->add_option("--out", en.out, "Output CSV (default stdout)");

  EquilibriumFlags eq;
  auto* eq_cmd = app.add_subcommand(
      "equilibrium", "Approximate equilibrium of the precomputation game");
  eq.source.Add(eq_cmd);
  eq_cmd->add_option("--lambda1", eq.lambda1)->check(CLI::PositiveNumber);
  eq_cmd->add_option("--lambda2", eq.lambda2)->check(CLI::PositiveNumber);
  eq_cmd->add_option("--eps", eq.eps)->check(CLI::PositiveNumber);
  eq_cmd->add_option("--delta", eq.delta)->check(CLI::Range(0.0, 1.0));
  eq_cmd->add_option("--max-iters", eq.max_iters)
      ->check(CLI::PositiveNumber);
  eq_cmd->add_option("--seed", eq.seed);
  eq_cmd->add_flag("--sampled", eq.sampled,
                   "Sampled truncation values and best responses");
  eq_cmd->add_option("--workers", eq.workers)->check(CLI::PositiveNumber);
  eq_cmd->add_option("--out", eq.out, "Output JSON (default stdout)");

  SweepFlags sw;
  auto* sw_cmd =
      app.add_subcommand("sweep", "Precomputation value across opponent r");
  sw_cmd->add_option("--config", sw.config, "Sweep config (JSON)")
      ->required();
  sw_cmd->add_option("--out", sw.out, "Output CSV")->required();
  sw_cmd->add_flag("--resume", sw.resume, "Skip grid points already in --out");
  sw_cmd->add_option("--workers", sw.workers)->check(CLI::PositiveNumber);
  sw_cmd->add_option("--plot-data", sw.plot_data,
                     "Plot data file (default: <out>.plot.dat)");

  CompareFlags cmp;
  auto* cmp_cmd =
      app.add_subcommand("compare", "Pair white and black sweep results");
  cmp_cmd->add_option("--white", cmp.white, "White sweep CSV")->required();
  cmp_cmd->add_option("--black", cmp.black, "Black sweep CSV")->required();
  cmp_cmd->add_option("--out", cmp.out, "Output CSV (default stdout)");

  GenFlags gen;
  auto* gen_cmd =
      app.add_subcommand("gen-game", "Write a random game with policies");
  gen_cmd->add_option("--seed", gen.seed);
  gen_cmd->add_option("--depth", gen.spec.depth)->check(CLI::Range(1, 30));
  gen_cmd->add_option("--branching", gen.spec.branching)
      ->check(CLI::Range(1, 64));
  gen_cmd->add_option("--law", gen.law, "uniform, binary or ternary");
  gen_cmd->add_flag("--sparse", gen.sparse,
                    "Random action counts and early ends");
  gen_cmd->add_flag("--deterministic-pre", gen.deterministic_pre,
                    "One-hot precompute policy");
  gen_cmd->add_option("--out", gen.out, "Output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*br_cmd) return RunBestResponse(br);
    if (*en_cmd) return RunEntropyProfile(en);
    if (*eq_cmd) return RunEquilibrium(eq);
    if (*sw_cmd) return RunSweepCommand(sw);
    if (*cmp_cmd) return RunCompare(cmp);
    if (*gen_cmd) return RunGenGame(gen);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
