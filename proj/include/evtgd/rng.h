// Copyright 2026 The evtgd Authors.
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

#ifndef EVTGD_RNG_H_
#define EVTGD_RNG_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace evtgd {

// splitmix64 finalizer. Derives independent stream seeds from (seed, index)
// so parallel work items draw the same numbers regardless of scheduling.
std::uint64_t MixSeed(std::uint64_t seed, std::uint64_t stream);

// Deterministic random source on top of std::mt19937_64. Bounded integers and
// unit reals are drawn here rather than through <random> distributions, whose
// algorithms differ between standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t Next() { return engine_(); }

  // Uniform in [0, n). n must be positive.
  std::uint64_t Uniform(std::uint64_t n);

  // Uniform in [0, 1) with 53 bits of resolution.
  double UnitReal() { return double(engine_() >> 11) * 0x1.0p-53; }

  bool Bernoulli(double p) { return UnitReal() < p; }

 private:
  std::mt19937_64 engine_;
};

// Draws min(count, n) distinct indices from [0, n), returned in draw order.
std::vector<std::size_t> SampleWithoutReplacement(std::size_t n,
                                                  std::size_t count, Rng &rng);

}  // namespace evtgd

#endif  // EVTGD_RNG_H_
