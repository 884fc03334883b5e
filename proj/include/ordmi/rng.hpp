// Copyright 2026 The ordmi Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ORDMI_RNG_HPP_
#define ORDMI_RNG_HPP_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace ordmi {

// Seed-splitting rule used throughout the pipeline: a master seed is combined
// with integer tags (imputation index, arm, model slot, replication, ...)
// through a splitmix64 chain. Streams derived with distinct tag sequences are
// independent for practical purposes, which makes parallel execution
// deterministic regardless of scheduling: every worker seeds its own stream
// from (master, tags...) and results are merged by index.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derives a child seed from a master seed and a sequence of stream tags.
inline std::uint64_t derive_seed(std::uint64_t master,
                                 std::initializer_list<std::uint64_t> tags) {
  std::uint64_t s = splitmix64(master);
  for (std::uint64_t t : tags) {
    s = splitmix64(s ^ (t + 0x632be59bd9b4e019ULL));
  }
  return s;
}

inline std::mt19937_64 make_engine(std::uint64_t master,
                                   std::initializer_list<std::uint64_t> tags) {
  return std::mt19937_64(derive_seed(master, tags));
}

}  // namespace ordmi

#endif  // ORDMI_RNG_HPP_
