// Copyright 2026 The pathvol Authors.
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

// Counter-based random streams.
//
// Philox4x32-10 (Salmon et al., SC'11) keyed by the master seed. A stream is
// identified by a 64-bit id placed in the high counter words, the low words
// count blocks within the stream. Any (seed, stream id) pair can therefore
// be reconstructed on any thread without touching other streams.

#ifndef PATHVOL_RANDOM_HPP_
#define PATHVOL_RANDOM_HPP_

#include <array>
#include <cstdint>
#include <vector>

namespace pathvol {

using Philox4x32Counter = std::array<std::uint32_t, 4>;
using Philox4x32Key = std::array<std::uint32_t, 2>;

/// The 10-round Philox4x32 bijection.
Philox4x32Counter philox4x32_10(Philox4x32Counter counter, Philox4x32Key key);

/// Stream ids are built from a purpose tag and a path index so that, e.g.,
/// the Y and S simulations of path 7 never share draws.
enum class StreamPurpose : std::uint16_t {
  kPrimary = 0,
  kReference = 1,
  kAuxiliary = 2,
};

constexpr std::uint64_t stream_id(std::uint64_t path_index,
                                  StreamPurpose purpose = StreamPurpose::kPrimary) {
  return (static_cast<std::uint64_t>(purpose) << 48) |
         (path_index & 0x0000ffffffffffffULL);
}

class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream);

  /// 64 uniformly distributed bits.
  std::uint64_t next_u64();
  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();
  /// Standard normal by inversion, one uniform per draw.
  double normal();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  unsigned used_ = 2;
};

/// `count` standard normal draws from `stream`.
std::vector<double> sample_normal(RandomStream& stream, std::size_t count);

}  // namespace pathvol

#endif  // PATHVOL_RANDOM_HPP_
