// Copyright 2026 The netgames Authors
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

namespace netgames {

/// Splittable seeded generator (SplitMix64 core).
///
/// Every stream is identified by a 64-bit key derived from the root seed and
/// a path of integers, so `root.substream(trial).substream(k)` is the same
/// stream no matter when or on which thread it is created. Sampling advances
/// only the local state; substreams never perturb their parent. This is what
/// makes trials embarrassingly parallel and replay bit-identical.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : key_(mix64(seed + kGamma)), state_(key_) {}

  /// Child stream addressed by `a` relative to this stream's identity.
  Rng substream(std::uint64_t a) const { return Rng(FromKey{}, combine(key_, a)); }

  Rng substream(std::uint64_t a, std::uint64_t b) const {
    return substream(a).substream(b);
  }

  std::uint64_t next_u64() {
    state_ += kGamma;
    return mix64(state_);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform01() < p; }

  /// Uniform double in [a, b).
  double uniform(double a, double b) { return a + uniform01() * (b - a); }

  std::uint64_t stream_key() const { return key_; }

 private:
  struct FromKey {};
  Rng(FromKey, std::uint64_t key) : key_(key), state_(key) {}

  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ull;

  static std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  static std::uint64_t combine(std::uint64_t key, std::uint64_t a) {
    return mix64(key ^ (mix64(a + kGamma) + kGamma + (key << 6) + (key >> 2)));
  }

  std::uint64_t key_;
  std::uint64_t state_;
};

}  // namespace netgames
