// Copyright 2026 The weakval authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>

namespace weakval {

/// Counter-based uniform generator. Draw i is a pure function of
/// (seed, i): it equals the (i+1)-th output of splitmix64 started from
/// `seed`. Because no state is carried between draws, shot blocks can be
/// sampled on any number of threads and still produce identical streams.
///
/// This derivation is a stability contract: changing it changes every
/// sampled count in every archived result file.
class CounterRng {
  public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    /// 64 uniform bits for the given counter.
    std::uint64_t bits(std::uint64_t counter) const {
        std::uint64_t x = seed_ + (counter + 1) * 0x9E3779B97F4A7C15ull;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
        return x ^ (x >> 31);
    }

    /// Uniform double in [0, 1), 53 significant bits.
    double uniform01(std::uint64_t counter) const {
        return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
    }

  private:
    std::uint64_t seed_;
};

} // namespace weakval
