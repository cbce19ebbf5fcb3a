#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "mash/matrix.hpp"

namespace mash {

// The eight interference behaviors exercised by the study. DataJam, PilotJam
// and MultiData aim at the NOMINAL interleaved frame positions: under the
// secret subspace layout the jammer has no way to know where pilots or data
// really are, so it attacks where the reference layout would put them.
enum class JammerKind {
  Barrage,      // i.i.d. Gaussian on every sample, one antenna
  DataJam,      // Gaussian bursts on the nominal data samples
  PilotJam,     // Gaussian bursts on the nominal pilot samples
  SparseJam,    // Gaussian bursts on ceil(fraction * L) random samples
  EigenBeam,    // right-eigenbeamformed wideband multi-antenna jammer
  MultiData,    // multi-antenna data jammer
  DynamicBeam,  // per-sample sparse beamforming matrix with hold probability
  Repeat,       // replays the legitimate transmission with a delay
};

struct JammerSpec {
  JammerKind kind = JammerKind::Barrage;
  int antennas = 1;
  double sparse_fraction = 0.1;  // SparseJam
  int active_row_cap = 8;        // DynamicBeam: nonzero rows per beam matrix
  double hold_prob = 0.95;       // DynamicBeam
  int repeat_delay = 1;          // Repeat, samples

  // Single-antenna kinds pin antennas to 1 regardless of the argument.
  static JammerSpec make(JammerKind kind, int antennas);
  void validate() const;
};

bool is_single_antenna(JammerKind kind);

// True for the kinds whose temporal extension is natively sphere-uniform.
bool is_barrage(JammerKind kind);

const char* jammer_name(JammerKind kind);
std::optional<JammerKind> jammer_from_name(std::string_view name);

// What a jammer is allowed to know: the nominal interleaved positions, its
// own channel (EigenBeam shapes beams from it), and the transmitted frame
// (Repeat records it off the air).
struct JammerContext {
  std::vector<int> training_idx;
  std::vector<int> pilot_idx;
  std::vector<int> data_idx;
  const ComplexMatrix* transmitted = nullptr;     // U x L
  const ComplexMatrix* jammer_channel = nullptr;  // B x I
};

// Unnormalized I x L waveform; power calibration happens in scale_jammer.
ComplexMatrix gen_jammer_waveform(const JammerSpec& spec,
                                  const JammerContext& ctx, int frame_len,
                                  RandomStream& rng);

// DynamicBeam internals, exposed so the hold/redraw statistics are testable:
// the per-sample beam matrices A_k, each with exactly min(cap, antennas)
// nonzero rows, redrawn with probability 1 - hold_prob per sample.
std::vector<ComplexMatrix> dynamic_beam_sequence(int antennas, int row_cap,
                                                 double hold_prob,
                                                 int frame_len,
                                                 RandomStream& rng);

}  // namespace mash
