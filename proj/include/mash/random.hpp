#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace mash {

// Philox4x32-10 counter-based generator (Salmon et al., "Parallel random
// numbers: as easy as 1, 2, 3"). Stateless: output is a pure function of
// (counter, key), which is what makes per-trial substreams trivially
// reproducible under any parallel schedule.
struct Philox {
  using Block = std::array<std::uint32_t, 4>;
};

Philox::Block philox4x32_10(Philox::Block counter, std::uint32_t key0,
                            std::uint32_t key1);

// One logical random stream, addressed by (seed, stream). Distinct stream ids
// under the same seed never overlap: the stream id occupies the high counter
// words and the block index the low ones.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream);

  std::uint32_t next_u32();
  std::uint64_t next_u64();

  // [0, 1), 53-bit resolution.
  double uniform();
  // (0, 1]; safe as a log() argument.
  double uniform_positive();

  // Circularly symmetric complex Gaussian CN(0, variance) via Box-Muller on
  // raw counter output; avoids std::normal_distribution, whose sequence is
  // implementation-defined.
  std::complex<double> complex_gaussian(double variance);

  // Unbiased uniform integer in [0, bound); bound must be nonzero.
  std::uint64_t below(std::uint64_t bound);

  // k distinct indices drawn uniformly from {0, ..., n-1} (partial
  // Fisher-Yates). Order is the selection order, not sorted.
  std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k);

 private:
  std::uint32_t key0_, key1_;
  std::uint32_t stream_lo_, stream_hi_;
  std::uint64_t block_ = 0;
  Philox::Block buf_{};
  int buf_pos_ = 4;  // buffer exhausted
};

}  // namespace mash
