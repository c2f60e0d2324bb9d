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

#include "metaprecomp/game_io.h"

#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "metaprecomp/errors.h"

namespace metaprecomp {

using nlohmann::json;

namespace {

NodeId ParseId(const std::string& key, std::size_t num_nodes) {
  std::size_t pos = 0;
  long long id = -1;
  try {
    id = std::stoll(key, &pos);
  } catch (const std::exception&) {
    throw InvalidInput("bad history id '" + key + "'");
  }
  if (pos != key.size() || id < 0 ||
      static_cast<std::size_t>(id) >= num_nodes) {
    throw InvalidInput("bad history id '" + key + "'");
  }
  return static_cast<NodeId>(id);
}

}  // namespace

const TabularPolicy& GameFile::PolicyNamed(const std::string& name) const {
  auto it = policies.find(name);
  if (it == policies.end()) {
    throw InvalidInput("game file has no policy named '" + name + "'");
  }
  return it->second;
}

GameFile ParseGameFile(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidInput(std::string("malformed game file: ") + e.what());
  }
  try {
    if (doc.value("format", std::string(kGameFormat)) != kGameFormat) {
      throw InvalidInput("unsupported game format");
    }
    auto labels =
        doc.at("actions_per_node").get<std::vector<std::vector<std::string>>>();
    auto children = doc.at("children").get<std::vector<std::vector<NodeId>>>();
    GameFile file{GameTree::FromStructure(std::move(children), std::move(labels)),
                  {}};
    const std::size_t n = file.game.NumNodes();
    for (const auto& [key, value] : doc.at("terminal_utilities").items()) {
      file.game.SetUtility(ParseId(key, n), value.get<double>());
    }
    file.game.Validate();
    if (doc.contains("policy")) {
      for (const auto& [name, block] : doc.at("policy").items()) {
        TabularPolicy policy;
        for (const auto& [key, probs] : block.items()) {
          const NodeId h = ParseId(key, n);
          auto p = probs.get<std::vector<double>>();
          if (static_cast<int>(p.size()) != file.game.NumActions(h)) {
            throw InvalidInput("policy '" + name + "' has wrong arity at " +
                               key);
          }
          policy.Set(h, std::move(p));
        }
        file.policies.emplace(name, std::move(policy));
      }
    }
    return file;
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed game file: ") + e.what());
  }
}

std::string SerializeGameFile(const GameFile& file) {
  const GameTree& g = file.game;
  json labels = json::array();
  json children = json::array();
  json utilities = json::object();
  for (std::size_t i = 0; i < g.NumNodes(); ++i) {
    const NodeId h = static_cast<NodeId>(i);
    json l = json::array();
    for (int a = 0; a < g.NumActions(h); ++a) l.push_back(g.ActionLabel(h, a));
    labels.push_back(std::move(l));
    children.push_back(g.Children(h));
    if (g.IsTerminal(h)) utilities[std::to_string(h)] = g.Utility(h);
  }
  json policies = json::object();
  for (const auto& [name, policy] : file.policies) {
    json block = json::object();
    for (NodeId h : policy.Histories()) {
      block[std::to_string(h)] = policy.At(h);
    }
    policies[name] = std::move(block);
  }
  json doc = {{"format", kGameFormat},
              {"actions_per_node", std::move(labels)},
              {"children", std::move(children)},
              {"terminal_utilities", std::move(utilities)},
              {"policy", std::move(policies)}};
  return doc.dump(1);
}

GameFile LoadGameFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open game file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return ParseGameFile(buf.str());
}

void SaveGameFile(const GameFile& file, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write game file " + path);
  out << SerializeGameFile(file) << "\n";
}

}  // namespace metaprecomp
