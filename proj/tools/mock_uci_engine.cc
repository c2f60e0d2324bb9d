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

// Minimal UCI engine for tests. Scores are a deterministic function of the
// position; flags replay fixed transcripts or simulate failures.

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "metaprecomp/rng.h"

namespace {

using metaprecomp::Mix64;

struct Options {
  std::string name = "mock-engine 1.0";
  std::string transcript;
  int crash_after = -1;
  int hang_after = -1;
  int max_plies = 200;
  std::uint64_t seed = 7;
};

std::string MoveFromHash(std::uint64_t h) {
  std::string m(4, ' ');
  m[0] = static_cast<char>('a' + h % 8);
  m[1] = static_cast<char>('1' + (h >> 3) % 8);
  m[2] = static_cast<char>('a' + (h >> 6) % 8);
  m[3] = static_cast<char>('1' + (h >> 9) % 8);
  return m;
}

void Search(const Options& opt, const std::vector<std::string>& moves,
            int multipv) {
  if (!opt.transcript.empty()) {
    std::ifstream in(opt.transcript);
    std::string line;
    while (std::getline(in, line)) std::cout << line << "\n";
    std::cout << std::flush;
    return;
  }
  if (static_cast<int>(moves.size()) >= opt.max_plies) {
    std::cout << "info depth 0 score mate 0\nbestmove (none)\n" << std::flush;
    return;
  }
  std::uint64_t h = opt.seed;
  for (const auto& m : moves) {
    for (char c : m) h = Mix64(h ^ static_cast<unsigned char>(c));
    h = Mix64(h ^ 0xff);
  }
  std::vector<std::string> picks;
  for (std::uint64_t k = 0; static_cast<int>(picks.size()) < multipv; ++k) {
    const std::string m = MoveFromHash(Mix64(h + k));
    bool fresh = m.substr(0, 2) != m.substr(2, 2);
    for (const auto& p : picks) fresh = fresh && p != m;
    if (fresh) picks.push_back(m);
  }
  const int base = static_cast<int>(h % 201) - 100;
  std::cout << "info string mock search\n";
  for (int depth = 1; depth <= 2; ++depth) {
    for (int i = 0; i < multipv; ++i) {
      const int cp = base - 15 * i - static_cast<int>((h >> (8 + i)) % 10) +
                     (depth == 1 ? 50 : 0);
      std::cout << "info depth " << depth << " seldepth " << depth + 2
                << " multipv " << i + 1 << " score cp " << cp
                << " nodes 100 pv " << picks[static_cast<std::size_t>(i)]
                << "\n";
    }
  }
  std::cout << "info depth 3 multipv 1 score cp " << base + 400
            << " lowerbound pv " << picks[0] << "\n";
  std::cout << "bestmove " << picks[0] << "\n" << std::flush;
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  CLI::App app{"Mock UCI engine"};
  app.add_option("--name", opt.name);
  app.add_option("--transcript", opt.transcript);
  app.add_option("--crash-after", opt.crash_after);
  app.add_option("--hang-after", opt.hang_after);
  app.add_option("--max-plies", opt.max_plies);
  app.add_option("--seed", opt.seed);
  CLI11_PARSE(app, argc, argv);

  int multipv = 1;
  int searches = 0;
  std::vector<std::string> moves;
  std::string line;
  while (std::getline(std::cin, line)) {
    std::istringstream in(line);
    std::string cmd;
    in >> cmd;
    if (cmd == "uci") {
      std::cout << "id name " << opt.name << "\nid author tests\n"
                << "option name MultiPV type spin default 1 min 1 max 64\n"
                << "uciok\n"
                << std::flush;
    } else if (cmd == "isready") {
      std::cout << "readyok\n" << std::flush;
    } else if (cmd == "setoption") {
      std::string word, name, value_kw;
      int value = 1;
      in >> word >> name >> value_kw >> value;
      if (name == "MultiPV") multipv = value;
    } else if (cmd == "position") {
      std::string kind, word, m;
      in >> kind;
      moves.clear();
      if (in >> word && word == "moves") {
        while (in >> m) moves.push_back(m);
      }
    } else if (cmd == "go") {
      if (opt.crash_after >= 0 && searches >= opt.crash_after) return 3;
      if (opt.hang_after >= 0 && searches >= opt.hang_after) {
        std::this_thread::sleep_for(std::chrono::hours(1));
      }
      ++searches;
      Search(opt, moves, multipv);
    } else if (cmd == "quit") {
      return 0;
    }
  }
  return 0;
}
