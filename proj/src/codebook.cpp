#include "mash/codebook.hpp"

#include <bit>
#include <cmath>
#include <cstring>

#include "mash/errors.hpp"
#include "mash/random.hpp"

namespace mash {

namespace {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

void check_partition(Eigen::Index frame_len, Eigen::Index redundancy,
                     bool allow_no_redundancy) {
  if (frame_len < 1) throw InvalidPartition("codebook: frame_len must be >= 1");
  if (redundancy >= frame_len)
    throw InvalidPartition("codebook: redundancy must be < frame_len");
  if (redundancy < 0) throw InvalidPartition("codebook: negative redundancy");
  if (redundancy == 0 && !allow_no_redundancy)
    throw InvalidPartition(
        "codebook: redundancy 0 requires opting out of raising");
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t get_u64(std::span<const std::uint8_t> in, std::size_t at) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i)
    v |= static_cast<std::uint64_t>(in[at + i]) << (8 * i);
  return v;
}

}  // namespace

SecretCodebook::SecretCodebook(ComplexMatrix c, Eigen::Index redundancy)
    : unitary_(std::move(c)), redundancy_(redundancy) {}

SecretCodebook SecretCodebook::derive(std::string_view secret,
                                      Eigen::Index frame_len,
                                      Eigen::Index redundancy,
                                      bool allow_no_redundancy) {
  check_partition(frame_len, redundancy, allow_no_redundancy);
  RandomStream rng(fnv1a64(secret), 0);
  return SecretCodebook(haar_unitary(frame_len, rng), redundancy);
}

SecretCodebook SecretCodebook::identity(Eigen::Index frame_len,
                                        Eigen::Index redundancy) {
  check_partition(frame_len, redundancy, true);
  return SecretCodebook(ComplexMatrix::Identity(frame_len, frame_len),
                        redundancy);
}

SecretCodebook SecretCodebook::permutation(std::string_view secret,
                                           Eigen::Index frame_len,
                                           Eigen::Index redundancy) {
  check_partition(frame_len, redundancy, true);
  RandomStream rng(fnv1a64(secret), 1);
  auto perm = rng.sample_indices(static_cast<std::size_t>(frame_len),
                                 static_cast<std::size_t>(frame_len));
  ComplexMatrix c = ComplexMatrix::Zero(frame_len, frame_len);
  for (Eigen::Index i = 0; i < frame_len; ++i)
    c(static_cast<Eigen::Index>(perm[static_cast<std::size_t>(i)]), i) = 1.0;
  return SecretCodebook(std::move(c), redundancy);
}

ComplexMatrix embed(const ComplexMatrix& payload, const SecretCodebook& cb) {
  if (payload.cols() != cb.payload_len())
    throw InvalidShape("embed: payload column count != frame_len - redundancy");
  return payload * cb.payload_rows();
}

ComplexMatrix raise(const ComplexMatrix& received, const SecretCodebook& cb) {
  if (received.cols() != cb.frame_len())
    throw InvalidShape("raise: column count != frame_len");
  return received * cb.unitary().adjoint();
}

TransformReport verify_barrage_transform(const ComplexMatrix& jammer_channel,
                                         const ComplexMatrix& waveform,
                                         const SecretCodebook& cb,
                                         double sv_tol, double angle_tol) {
  if (jammer_channel.cols() != waveform.rows())
    throw InvalidShape("verify_barrage_transform: J/W inner dimension");
  if (waveform.cols() != cb.frame_len())
    throw InvalidShape("verify_barrage_transform: waveform length");
  ComplexMatrix jw = jammer_channel * waveform;
  if (jw.norm() == 0.0)
    throw DegenerateInput("verify_barrage_transform: J*W is zero");

  CompactSvd original = compact_svd(jw);
  CompactSvd transformed = compact_svd(raise(jw, cb));

  TransformReport rep;
  rep.sv_original = original.singular_values;
  rep.sv_transformed = transformed.singular_values;

  const Eigen::Index r =
      std::min(original.rank(), transformed.rank());
  double dev = (original.rank() == transformed.rank()) ? 0.0 : 1.0;
  for (Eigen::Index i = 0; i < r; ++i)
    dev = std::max(dev, std::abs(original.singular_values(i) -
                                 transformed.singular_values(i)) /
                            original.singular_values(i));
  rep.max_rel_sv_deviation = dev;

  RealVector angles =
      principal_angles(original.left.leftCols(r), transformed.left.leftCols(r));
  rep.max_principal_angle_rad = (r > 0) ? angles.maxCoeff() : 0.0;

  rep.pass = original.rank() == transformed.rank() &&
             rep.max_rel_sv_deviation <= sv_tol &&
             rep.max_principal_angle_rad <= angle_tol;
  return rep;
}

std::vector<std::uint8_t> SecretCodebook::to_bytes() const {
  std::vector<std::uint8_t> out;
  const Eigen::Index n = frame_len();
  out.reserve(16 + static_cast<std::size_t>(n) * n * 16);
  put_u64(out, static_cast<std::uint64_t>(n));
  put_u64(out, static_cast<std::uint64_t>(redundancy_));
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) {
      put_u64(out, std::bit_cast<std::uint64_t>(unitary_(r, c).real()));
      put_u64(out, std::bit_cast<std::uint64_t>(unitary_(r, c).imag()));
    }
  return out;
}

SecretCodebook SecretCodebook::from_bytes(std::span<const std::uint8_t> blob) {
  if (blob.size() < 16) throw InvalidShape("codebook blob: truncated header");
  const std::uint64_t n64 = get_u64(blob, 0);
  const std::uint64_t r64 = get_u64(blob, 8);
  if (n64 == 0 || n64 > (1u << 20) || r64 >= n64)
    throw InvalidShape("codebook blob: implausible dimensions");
  const Eigen::Index n = static_cast<Eigen::Index>(n64);
  const std::size_t expect =
      16 + static_cast<std::size_t>(n) * static_cast<std::size_t>(n) * 16;
  if (blob.size() != expect)
    throw InvalidShape("codebook blob: size does not match dimensions");
  ComplexMatrix c(n, n);
  std::size_t at = 16;
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index k = 0; k < n; ++k) {
      const double re = std::bit_cast<double>(get_u64(blob, at));
      const double im = std::bit_cast<double>(get_u64(blob, at + 8));
      c(r, k) = Complex(re, im);
      at += 16;
    }
  if ((c.adjoint() * c - ComplexMatrix::Identity(n, n)).norm() >
      1e-8 * std::sqrt(static_cast<double>(n)))
    throw InvalidShape("codebook blob: matrix is not unitary");
  return SecretCodebook(std::move(c), static_cast<Eigen::Index>(r64));
}

}  // namespace mash
