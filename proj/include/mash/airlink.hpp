#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mash/codebook.hpp"
#include "mash/matrix.hpp"

namespace mash {

// Uplink scenario knobs. Defaults reproduce the reference operating point:
// 64 receive antennas, 16 single-antenna users, 100-sample frames split into
// 16 redundancy + 16 pilot + 68 data samples, 30 dB jammer power advantage.
struct SystemConfig {
  int bs_antennas = 64;      // B
  int users = 16;            // U
  int jammer_antennas = 10;  // I (multi-antenna jammer kinds)
  int frame_len = 100;       // L
  int redundancy = 16;       // R
  int pilot_len = 16;        // T, must equal users
  double rho_db = 30.0;      // receive-power advantage of the jammer
  double snr_db = 10.0;
  bool snr_infinite = false;
  std::uint64_t master_seed = 1;
  std::string secret = "mash-shared-secret";
  bool codebook_refresh = true;  // re-derive the codebook every frame
  double rank_threshold_factor = 2.0;
  bool lmmse_large_form = false;      // use B x B inversions instead of small
  bool chanest_noise_term = false;    // add N0 to the channel-estimate weight

  int data_len() const { return frame_len - redundancy - pilot_len; }
  void validate() const;  // throws InvalidParameter on any violation
};

struct FrameSignals {
  ComplexMatrix pilots;              // U x T, +-1 entries
  ComplexMatrix data;                // U x D, Gray-mapped QPSK
  std::vector<std::uint8_t> data_bits;  // 2*U*D bits, row-major (user, sample)
};

struct ChannelRealization {
  ComplexMatrix ue_channel;      // B x U, column u is gain_u * CN(0, I)
  ComplexMatrix jammer_channel;  // B x I, i.i.d. CN(0, 1)
  RealVector ue_gains;           // per-user amplitude, 10^(p/20), p ~ U[-3,3]
};

struct ColumnPartition {
  std::vector<int> training;  // silent columns the receiver trains on
  std::vector<int> pilots;
  std::vector<int> data;
};

struct BaselineLayout {
  ComplexMatrix frame;  // U x L
  ColumnPartition columns;
};

// Sylvester-Hadamard pilot block; users must be a power of two.
ComplexMatrix hadamard_pilots(int users);

// Gray map: bits (b0, b1) -> ((1-2*b0) + i*(1-2*b1)) / sqrt(2).
Complex qpsk_symbol(std::uint8_t b0, std::uint8_t b1);

ChannelRealization gen_channels(const SystemConfig& cfg, RandomStream& rng);
FrameSignals gen_frame_signals(const SystemConfig& cfg, RandomStream& rng);

// Nominal training positions of the interleaved layout: floor(j*L/R).
std::vector<int> baseline_training_positions(int frame_len, int redundancy);

// Interleaved reference layout: silent training columns at the nominal
// positions, then pilots and data filling the remaining columns in order.
BaselineLayout layout_baseline(const FrameSignals& sig,
                               const SystemConfig& cfg);

// Subspace layout: X = [pilots, data] * C_par.
ComplexMatrix layout_mash(const FrameSignals& sig, const SecretCodebook& cb);

// Scale the raw waveform so the realized receive energies satisfy
// ||J*W||_F^2 = 10^(rho/10) * ||H*X||_F^2 / U.
ComplexMatrix scale_jammer(const ComplexMatrix& waveform_raw,
                           const ComplexMatrix& jammer_channel,
                           const ComplexMatrix& ue_channel,
                           const ComplexMatrix& transmitted, double rho_db);

struct NoisyFrame {
  ComplexMatrix received;
  double noise_variance;  // N0 = ||H*X||_F^2 / (B * L * 10^(snr/10))
};

NoisyFrame add_noise(const ComplexMatrix& clean, const ComplexMatrix& ue_channel,
                     const ComplexMatrix& transmitted, double snr_db,
                     bool snr_infinite, RandomStream& rng);

}  // namespace mash
