#pragma once

#include <cstdint>
#include <random>

namespace bellhv {

// splitmix64 step; used both to condition raw seeds and to derive independent
// substream seeds from (master, stream_id) pairs.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream_id) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream_id + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// One deterministic random stream. Reproducibility contract: the same seed
// yields the same draw sequence on every platform, and substreams derived
// from (master, id) never depend on how work is split across threads.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : gen_(mix_seed(seed, 0)) {}

  static RngStream substream(std::uint64_t master, std::uint64_t stream_id) {
    return RngStream(mix_seed(master, stream_id));
  }

  std::uint64_t next_u64() { return gen_(); }

  // uniform on [0, 1) with 53 random bits; avoids generate_canonical to keep
  // the mapping from engine output fixed
  double uniform01() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace bellhv
