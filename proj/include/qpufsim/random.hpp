// Copyright 2026 The qpufsim Authors
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

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace qpufsim {

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Stream derivation: hash64(seed, label, index) is stable across platforms and
/// builds. Distinct (label, index) pairs give unrelated streams.
std::uint64_t hash64(std::uint64_t seed, std::string_view label, std::uint64_t index = 0);
std::uint64_t hash64(std::uint64_t seed, std::string_view label, std::string_view key, std::uint64_t index = 0);

/// 64-bit Mersenne Twister with a portable uniform double in [0, 1).
class Rng {
  public:
    explicit Rng(std::uint64_t seed);
    std::uint64_t next();
    double uniform();
    double uniform(double lo, double hi);
    /// Integer in [0, n).
    std::uint64_t below(std::uint64_t n);
    /// Standard normal via Box-Muller.
    double normal();

  private:
    std::mt19937_64 engine_;
};

}  // namespace qpufsim
