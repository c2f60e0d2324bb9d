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

#ifndef METAPRECOMP_EVAL_CACHE_H_
#define METAPRECOMP_EVAL_CACHE_H_

#include <cstddef>
#include <fstream>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>

namespace metaprecomp {

// Persistent append-only key/value log.
//
// File layout (integers little-endian):
//   magic   8 bytes  "MPCACHE1"
//   records, each:
//     u32 key_len, u32 payload_len, key bytes, payload bytes,
//     u32 CRC-32 (zlib polynomial) of everything before it in the record.
//
// The first record for a key wins; later Puts of the same key are ignored.
// A truncated or corrupt trailing record is cut off on open. Readers run
// concurrently; writes are serialized and flushed per record. An empty path
// gives an in-memory cache.
class EvalCache {
 public:
  explicit EvalCache(std::string path = "");

  std::optional<std::string> Get(const std::string& key) const;
  // Returns the stored payload, which is `payload` unless the key existed.
  std::string Put(const std::string& key, const std::string& payload);

  std::size_t size() const;
  const std::string& path() const { return path_; }
  // Bytes dropped from the end of the file when it was opened.
  std::size_t truncated_bytes() const { return truncated_; }

 private:
  std::string path_;
  mutable std::shared_mutex mu_;
  std::unordered_map<std::string, std::string> map_;
  std::ofstream out_;
  std::size_t truncated_ = 0;
};

}  // namespace metaprecomp

#endif  // METAPRECOMP_EVAL_CACHE_H_
