#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mash/airlink.hpp"
#include "mash/jammers.hpp"

namespace mash {

enum class ReceiverKind {
  MashProjection,  // raise, project out the jammer subspace, LS + LMMSE
  MashLmmse,       // raise, jammer-covariance-whitened LMMSE
  BaselineLmmse,   // same estimator on the interleaved layout's slices
  Unmitigated,     // plain LS + LMMSE, jammer present
  Jammerless,      // plain LS + LMMSE, jammer disabled by the harness
};

struct ReceiverSpec {
  std::string name;
  ReceiverKind kind;
  bool mash_layout;    // subspace-embedded frame vs interleaved frame
  bool jammer_active;  // whether the harness injects the jammer
};

const std::vector<ReceiverSpec>& receiver_registry();
const ReceiverSpec* find_receiver(std::string_view name);  // nullptr: unknown

struct TrialResult {
  double err_num = 0.0;      // ||Shat - S||_F over the data block
  double sig_den = 0.0;      // ||S||_F over the data block
  long long bit_errors = 0;
  long long bits = 0;
  int est_rank = -1;
  bool failed = false;
  std::string error;
};

// Per-stage Frobenius norms of one trial, for debug dumps.
struct TrialDiag {
  double ue_channel_norm = 0.0;      // ||H||
  double jammer_channel_norm = 0.0;  // ||J||
  double frame_norm = 0.0;           // ||X||
  double waveform_norm = 0.0;        // ||W|| after power scaling
  double interference_norm = 0.0;    // ||J*W||
  double received_norm = 0.0;        // ||Y||
  double noise_variance = 0.0;
};

// One frame: draw channels/signals/jammer/noise from per-stage substreams of
// (cfg.master_seed, trial_index), run the receiver, score against the truth.
// Stream ids are a pure function of the trial index, so any two cells that
// share a trial index see the same randomness (common random numbers).
TrialResult run_trial(const SystemConfig& cfg, const JammerSpec& jammer,
                      const ReceiverSpec& receiver, std::uint64_t trial_index,
                      TrialDiag* diag = nullptr);

struct Aggregate {
  double mer_percent = 0.0;   // 100 * sum ||err||_F / sum ||S||_F
  double ber = 0.0;           // sum bit errors / sum bits
  double mean_est_rank = -1;  // mean over trials that report one, else -1
  long long trials = 0;
  long long trial_errors = 0;
};

Aggregate aggregate(const std::vector<TrialResult>& trials);

// "lo:hi:step" (inclusive) or a comma-separated list.
std::vector<double> parse_snr_axis(const std::string& text);

struct SweepPlan {
  std::vector<JammerSpec> jammers;
  std::vector<std::string> receivers;
  std::vector<double> snrs;
  int frames = 100;
  int parallelism = 1;
};

// Full cartesian sweep. Returns the CSV and, when out_path is nonempty,
// writes it atomically (temp file + rename). Row order and bytes are
// independent of parallelism. Throws SweepAborted when more than 0.1% of
// trials fail.
std::string run_sweep(const SystemConfig& base, const SweepPlan& plan,
                      const std::string& out_path);

struct VerifyOptions {
  int transform_checks = 50;   // spectrum/scope instances per jammer kind
  int uniformity_draws = 500;  // codebook draws for the direction test
  int duality_checks = 20;
  int nulling_checks = 20;     // noiseless end-to-end instances per kind
  std::string codebook_mode = "haar";  // "haar" | "permutation"
  int redundancy_override = -1;        // -1: keep cfg.redundancy
  // Restrict the per-kind checks to one jammer kind. The uniformity check
  // ignores this: it always drives the most structured waveform (pilot
  // bursts), the one a non-uniform codebook fails on.
  std::string only_kind;
};

struct VerifyCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

// Property checks behind the mitigation guarantee: spectrum preservation,
// spatial scope, temporal uniformity, embed/raise duality, noiseless
// nulling. The permutation codebook mode is the negative control — it keeps
// the algebraic contracts but must fail the uniformity check.
VerifyReport run_verify(const SystemConfig& cfg, const VerifyOptions& opt);

}  // namespace mash
