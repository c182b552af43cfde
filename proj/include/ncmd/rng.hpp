/*
 * Copyright 2026 The ncmd Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef NCMD_RNG_HPP
#define NCMD_RNG_HPP

#include <array>
#include <cstdint>

namespace ncmd {

/**
 * Philox4x32-10 block function (Salmon et al., "Parallel random numbers: as
 * easy as 1, 2, 3", SC 2011). Maps a 128-bit counter and 64-bit key to 128
 * pseudorandom bits with no internal state.
 */
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  static constexpr Counter apply(Counter ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
    }
    return ctr;
  }
};

/**
 * Random stream for one Monte Carlo trial. Draw k of trial i under seed s is
 * Philox(counter = (k, i), key = s), so a trial's randomness depends only on
 * (seed, trial index) and trials can be split across workers arbitrarily.
 */
class CounterStream {
public:
  CounterStream(std::uint64_t seed, std::uint64_t trial) : seed_(seed), trial_(trial) {}

  std::uint64_t next_u64() {
    if (cached_ == 0) {
      const Philox4x32::Counter ctr{static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                                    static_cast<std::uint32_t>(trial_), static_cast<std::uint32_t>(trial_ >> 32)};
      const Philox4x32::Key key{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)};
      out_ = Philox4x32::apply(ctr, key);
      ++block_;
      cached_ = 2;
    }
    const int hi = cached_ == 2 ? 0 : 2;
    --cached_;
    return (std::uint64_t{out_[hi]} << 32) | out_[hi + 1];
  }

  /// Uniform on the open interval (0, 1): (k + 1/2) * 2^-53.
  double uniform() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

  [[nodiscard]] std::uint64_t seed() const { return seed_; }
  [[nodiscard]] std::uint64_t trial() const { return trial_; }

private:
  std::uint64_t seed_;
  std::uint64_t trial_;
  std::uint64_t block_ = 0;
  Philox4x32::Counter out_{};
  int cached_ = 0;
};

}  // namespace ncmd

#endif  // NCMD_RNG_HPP
