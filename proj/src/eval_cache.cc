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

#include "metaprecomp/eval_cache.h"

#include <zlib.h>

#include <array>
#include <cstdint>
#include <filesystem>
#include <mutex>
#include <vector>

#include "metaprecomp/errors.h"

namespace metaprecomp {
namespace {

constexpr char kMagic[] = "MPCACHE1";
constexpr std::size_t kMagicSize = 8;

void PutU32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>(v >> (8 * i)));
}

std::uint32_t GetU32(const char* p) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) {
    v = (v << 8) | static_cast<unsigned char>(p[i]);
  }
  return v;
}

std::uint32_t Crc(const std::string& bytes) {
  return static_cast<std::uint32_t>(
      crc32(0L, reinterpret_cast<const Bytef*>(bytes.data()),
            static_cast<uInt>(bytes.size())));
}

std::string EncodeRecord(const std::string& key, const std::string& payload) {
  std::string rec;
  PutU32(rec, static_cast<std::uint32_t>(key.size()));
  PutU32(rec, static_cast<std::uint32_t>(payload.size()));
  rec += key;
  rec += payload;
  PutU32(rec, Crc(rec));
  return rec;
}

}  // namespace

EvalCache::EvalCache(std::string path) : path_(std::move(path)) {
  if (path_.empty()) return;
  namespace fs = std::filesystem;

  std::string data;
  if (fs::exists(path_)) {
    std::ifstream in(path_, std::ios::binary);
    if (!in) throw InvalidInput("cannot read cache file " + path_);
    data.assign(std::istreambuf_iterator<char>(in),
                std::istreambuf_iterator<char>());
  }

  std::size_t good = 0;
  if (data.size() >= kMagicSize) {
    if (data.compare(0, kMagicSize, kMagic) != 0) {
      throw InvalidInput("not an evaluation cache: " + path_);
    }
    good = kMagicSize;
    std::size_t pos = kMagicSize;
    while (data.size() - pos >= 8) {
      const std::size_t key_len = GetU32(data.data() + pos);
      const std::size_t payload_len = GetU32(data.data() + pos + 4);
      const std::size_t body = 8 + key_len + payload_len;
      if (data.size() - pos < body + 4) break;
      const std::string rec = data.substr(pos, body);
      if (Crc(rec) != GetU32(data.data() + pos + body)) break;
      map_.try_emplace(data.substr(pos + 8, key_len),
                       data.substr(pos + 8 + key_len, payload_len));
      pos += body + 4;
      good = pos;
    }
  }

  if (good == 0) {
    std::ofstream init(path_, std::ios::binary | std::ios::trunc);
    init.write(kMagic, kMagicSize);
    if (!init) throw InvalidInput("cannot write cache file " + path_);
    truncated_ = data.size();
  } else if (good < data.size()) {
    fs::resize_file(path_, good);
    truncated_ = data.size() - good;
  }
  out_.open(path_, std::ios::binary | std::ios::app);
  if (!out_) throw InvalidInput("cannot append to cache file " + path_);
}

std::optional<std::string> EvalCache::Get(const std::string& key) const {
  std::shared_lock lock(mu_);
  auto it = map_.find(key);
  if (it == map_.end()) return std::nullopt;
  return it->second;
}

std::string EvalCache::Put(const std::string& key, const std::string& payload) {
  std::unique_lock lock(mu_);
  auto [it, inserted] = map_.try_emplace(key, payload);
  if (inserted && out_.is_open()) {
    const std::string rec = EncodeRecord(key, payload);
    out_.write(rec.data(), static_cast<std::streamsize>(rec.size()));
    out_.flush();
    if (!out_) throw InvalidInput("cannot append to cache file " + path_);
  }
  return it->second;
}

std::size_t EvalCache::size() const {
  std::shared_lock lock(mu_);
  return map_.size();
}

}  // namespace metaprecomp
