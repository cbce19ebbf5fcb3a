#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "mash/matrix.hpp"

namespace mash {

// Secret temporal codebook: an L x L unitary C derived from a shared secret.
// Rows split into C_orth (first R rows, the redundancy directions nothing is
// transmitted along) and C_par (remaining L-R rows, carrying the payload).
// Transmit side embeds X = S * C_par; receive side raises Y -> Y * C^H,
// which empties the first R columns of everything the legitimate users sent
// and leaves those columns to the interference alone.
class SecretCodebook {
 public:
  // Haar-distributed codebook keyed by the secret bytes. redundancy = 0 is
  // only legal when the caller explicitly opts out of raising.
  static SecretCodebook derive(std::string_view secret, Eigen::Index frame_len,
                               Eigen::Index redundancy,
                               bool allow_no_redundancy = false);

  // C = I. Test hook: embedding degenerates to zero-padding.
  static SecretCodebook identity(Eigen::Index frame_len,
                                 Eigen::Index redundancy);

  // Random permutation matrix keyed by the secret. Unitary but deliberately
  // NOT Haar; negative control for the uniformity checks.
  static SecretCodebook permutation(std::string_view secret,
                                    Eigen::Index frame_len,
                                    Eigen::Index redundancy);

  const ComplexMatrix& unitary() const { return unitary_; }
  Eigen::Index frame_len() const { return unitary_.rows(); }
  Eigen::Index redundancy() const { return redundancy_; }
  Eigen::Index payload_len() const { return frame_len() - redundancy_; }

  ComplexMatrix orth_rows() const { return unitary_.topRows(redundancy_); }
  ComplexMatrix payload_rows() const {
    return unitary_.bottomRows(payload_len());
  }

  // Blob layout: u64 frame_len, u64 redundancy, then frame_len^2 row-major
  // entries as (re, im) IEEE doubles; everything little-endian.
  std::vector<std::uint8_t> to_bytes() const;
  static SecretCodebook from_bytes(std::span<const std::uint8_t> blob);

 private:
  SecretCodebook(ComplexMatrix c, Eigen::Index redundancy);

  ComplexMatrix unitary_;
  Eigen::Index redundancy_;
};

// payload (U x (L-R)) -> transmit frame X = payload * C_par (U x L).
ComplexMatrix embed(const ComplexMatrix& payload, const SecretCodebook& cb);

// received (B x L) -> raised observation Y * C^H (B x L).
ComplexMatrix raise(const ComplexMatrix& received, const SecretCodebook& cb);

struct TransformReport {
  RealVector sv_original;
  RealVector sv_transformed;
  double max_rel_sv_deviation = 0.0;
  double max_principal_angle_rad = 0.0;
  bool pass = false;
};

// Certify that raising changes neither the singular values nor the left
// singular subspace of the interference J * W. sv_tol is relative per
// singular value; angle_tol bounds the largest principal angle in radians.
TransformReport verify_barrage_transform(const ComplexMatrix& jammer_channel,
                                         const ComplexMatrix& waveform,
                                         const SecretCodebook& cb,
                                         double sv_tol = 1e-10,
                                         double angle_tol = 1e-8);

}  // namespace mash
