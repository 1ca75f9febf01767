// Copyright 2026 The nvo Authors
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

#ifndef NVO_RANDOM_H_
#define NVO_RANDOM_H_

#include <cstdint>
#include <random>

namespace nvo {

// All stochastic components draw from a single mt19937_64 stream. The two
// helpers below are written out rather than taken from <random>'s
// distributions so that streams replay identically across standard libraries.
using Rng = std::mt19937_64;

// Uniform double in [0, 1) with 53 bits of randomness.
inline double UniformDouble(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n). Rejection sampling removes modulo bias.
inline uint64_t UniformIndex(Rng& rng, uint64_t n) {
  const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  uint64_t draw = rng();
  while (draw >= limit) draw = rng();
  return draw % n;
}

}  // namespace nvo

#endif  // NVO_RANDOM_H_
