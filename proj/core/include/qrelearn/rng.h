// Copyright 2026 The qrelearn Authors
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

#ifndef QRELEARN_RNG_H_
#define QRELEARN_RNG_H_

#include <cstdint>
#include <random>
#include <span>

namespace qrelearn {

// Reproducible random stream. std::mt19937_64's output sequence is fixed by
// the C++ standard; the uniform and Gaussian transforms below are spelled out
// here rather than delegated to the implementation-defined <random>
// distributions, so a seed yields the same stream on every toolchain.
//
//   uniform():  (x >> 11) * 2^-53, in [0, 1)
//   normal():   Box-Muller on two uniforms, both outputs used in order
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  double normal(double mean, double stddev) { return mean + stddev * normal(); }
  // Index drawn from `weights` by inverse CDF; weights need not be normalised.
  int categorical(std::span<const double> weights);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// SplitMix64 finaliser over a base seed and stream coordinates.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a,
                          std::uint64_t b = 0);

}  // namespace qrelearn

#endif  // QRELEARN_RNG_H_
