#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "mash/matrix.hpp"

namespace mash {

// Column blocks of a raised frame: R jammer-only samples, T training
// samples, D data samples.  The reference receivers on the interleaved
// layout reuse the same struct with sliced (unraised) observations.
struct RaisedParts {
  ComplexMatrix jammer_only;  // B x R, carries no user signal
  ComplexMatrix training;     // B x T
  ComplexMatrix data;         // B x D
};

RaisedParts split_raised(const ComplexMatrix& raised, int redundancy,
                         int pilot_len);

// Number of singular values of the jammer-only block strictly above
// factor * sqrt(rows * noise_var), capped at max_rank.
int estimate_rank(const ComplexMatrix& jammer_only, double noise_var,
                  double factor, int max_rank);

// Hard decision; the boundary maps to bit 0 on each rail.
std::pair<std::uint8_t, std::uint8_t> qpsk_demap(Complex symbol);

// 2 bits per symbol, row-major (user, sample) — the generator's ordering.
std::vector<std::uint8_t> demap_bits(const ComplexMatrix& symbols);

struct DetectionResult {
  ComplexMatrix symbols;            // U x D soft estimates
  std::vector<std::uint8_t> bits;   // hard decisions, generator ordering
  int est_rank = -1;                // -1: receiver does not estimate one
  double pilot_residual = 0.0;      // relative training-fit residual
};

// Projects the training and data blocks onto the orthogonal complement of
// the estimated interference subspace, then LS channel estimate + LMMSE
// equalization.
DetectionResult detect_projection(const RaisedParts& parts,
                                  const ComplexMatrix& pilots,
                                  double noise_var,
                                  double rank_threshold_factor);

// Two algebraically equivalent evaluations of the same estimator.  Large
// inverts B x B matrices; Small works in the R- and (U+R)-dimensional
// spaces and stays usable at zero noise.
enum class LmmseForm { Large, Small };

// Treats the jammer-only block as a sample covariance of the interference
// and whitens both the channel estimate and the equalizer with it.  With
// chanest_noise_term the channel-estimate weighting also accounts for the
// thermal noise level.
DetectionResult detect_lmmse(const RaisedParts& parts,
                             const ComplexMatrix& pilots, double noise_var,
                             LmmseForm form, bool chanest_noise_term);

// LS channel estimate + LMMSE equalization, no mitigation.
DetectionResult detect_plain(const ComplexMatrix& training,
                             const ComplexMatrix& data,
                             const ComplexMatrix& pilots, double noise_var);

}  // namespace mash
