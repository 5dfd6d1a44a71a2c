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

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qpufsim/random.hpp"

namespace qpufsim {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

namespace {

// FNV-1a over the label bytes, then folded through mix64.
std::uint64_t absorb(std::uint64_t h, std::string_view bytes) {
    std::uint64_t f = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        f = (f ^ c) * 0x100000001b3ULL;
    }
    return mix64(h ^ mix64(f ^ bytes.size()));
}

}  // namespace

std::uint64_t hash64(std::uint64_t seed, std::string_view label, std::uint64_t index) {
    std::uint64_t h = mix64(seed);
    h = absorb(h, label);
    return mix64(h ^ mix64(index + 0x632be59bd9b4e019ULL));
}

std::uint64_t hash64(std::uint64_t seed, std::string_view label, std::string_view key, std::uint64_t index) {
    std::uint64_t h = mix64(seed);
    h = absorb(h, label);
    h = absorb(h, key);
    return mix64(h ^ mix64(index + 0x632be59bd9b4e019ULL));
}

Rng::Rng(std::uint64_t seed) : engine_(seed) {}

std::uint64_t Rng::next() { return engine_(); }

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

std::uint64_t Rng::below(std::uint64_t n) {
    if (n == 0) {
        throw std::invalid_argument("Rng::below needs n > 0");
    }
    // Rejection sampling keeps the draw unbiased.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
        v = engine_();
    } while (v >= limit);
    return v % n;
}

double Rng::normal() {
    double u1 = uniform();
    while (u1 <= 0.0) {
        u1 = uniform();
    }
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace qpufsim
