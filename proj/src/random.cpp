#include "mash/random.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mash {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline Philox::Block round_once(const Philox::Block& c, std::uint32_t k0,
                                std::uint32_t k1) {
  const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c[0];
  const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c[2];
  return {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k0,
          static_cast<std::uint32_t>(p1),
          static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k1,
          static_cast<std::uint32_t>(p0)};
}

}  // namespace

Philox::Block philox4x32_10(Philox::Block counter, std::uint32_t key0,
                            std::uint32_t key1) {
  for (int r = 0; r < 10; ++r) {
    counter = round_once(counter, key0, key1);
    key0 += kWeyl0;
    key1 += kWeyl1;
  }
  return counter;
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream)
    : key0_(static_cast<std::uint32_t>(seed)),
      key1_(static_cast<std::uint32_t>(seed >> 32)),
      stream_lo_(static_cast<std::uint32_t>(stream)),
      stream_hi_(static_cast<std::uint32_t>(stream >> 32)) {}

std::uint32_t RandomStream::next_u32() {
  if (buf_pos_ == 4) {
    Philox::Block ctr{static_cast<std::uint32_t>(block_),
                      static_cast<std::uint32_t>(block_ >> 32), stream_lo_,
                      stream_hi_};
    buf_ = philox4x32_10(ctr, key0_, key1_);
    ++block_;
    buf_pos_ = 0;
  }
  return buf_[buf_pos_++];
}

std::uint64_t RandomStream::next_u64() {
  const std::uint64_t lo = next_u32();
  const std::uint64_t hi = next_u32();
  return lo | (hi << 32);
}

double RandomStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform_positive() { return 1.0 - uniform(); }

std::complex<double> RandomStream::complex_gaussian(double variance) {
  if (variance == 0.0) return {0.0, 0.0};
  // |z|^2 ~ variance * Exp(1), phase uniform: exactly CN(0, variance).
  const double mag = std::sqrt(-std::log(uniform_positive()) * variance);
  const double phase = 2.0 * std::numbers::pi * uniform();
  return {mag * std::cos(phase), mag * std::sin(phase)};
}

std::uint64_t RandomStream::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("below: bound must be nonzero");
  const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
  for (;;) {
    const std::uint64_t r = next_u64();
    if (r >= threshold) return r % bound;
  }
}

std::vector<std::size_t> RandomStream::sample_indices(std::size_t n,
                                                      std::size_t k) {
  if (k > n) throw std::invalid_argument("sample_indices: k > n");
  std::vector<std::size_t> pool(n);
  for (std::size_t i = 0; i < n; ++i) pool[i] = i;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(below(n - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return pool;
}

}  // namespace mash
