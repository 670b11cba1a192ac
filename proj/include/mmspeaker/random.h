// Copyright 2026 The mmspeaker Authors.
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

#ifndef MMSPEAKER_RANDOM_H_
#define MMSPEAKER_RANDOM_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace mmspeaker {

// Portable seeded generator. The engine is std::mt19937_64, whose output
// sequence is fixed by the C++ standard. The standard distributions are not
// (their algorithms are implementation-defined), so every draw used by this
// library goes through the methods below:
//
//   UniformInt(n)   rejection sampling on the top bits of one 64-bit word
//   UniformDouble() (word >> 11) * 2^-53, in [0, 1)
//   Normal()        Box-Muller, one value per pair of uniforms, no caching
//   Shuffle()       Fisher-Yates from the back, j = UniformInt(i + 1)
//
// Outputs are therefore bit-identical across compilers and platforms.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }

  // Uniform integer in [0, n). n must be positive.
  uint64_t UniformInt(uint64_t n);

  double UniformDouble();

  double Uniform(double lo, double hi) { return lo + (hi - lo) * UniformDouble(); }

  bool Bernoulli(double p) { return UniformDouble() < p; }

  double Normal();

  template <typename T>
  void Shuffle(std::vector<T>& items) {
    for (size_t i = items.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(UniformInt(i));
      std::swap(items[i - 1], items[j]);
    }
  }

  // k distinct indices from [0, n), in draw order. Requires k <= n.
  std::vector<size_t> SampleWithoutReplacement(size_t n, size_t k);

 private:
  std::mt19937_64 engine_;
};

// SplitMix64 finalizer; used to derive independent per-item seeds so that
// results do not depend on processing order or worker count.
uint64_t MixSeed(uint64_t seed, uint64_t stream);

}  // namespace mmspeaker

#endif  // MMSPEAKER_RANDOM_H_
