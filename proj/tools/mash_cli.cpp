#include <CLI11.hpp>

#include <cstdio>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "mash/errors.hpp"
#include "mash/harness.hpp"
#include "mash/jammers.hpp"

namespace {

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) out.push_back(item);
  return out;
}

std::vector<mash::JammerSpec> parse_jammers(const std::string& text,
                                            int antennas) {
  std::vector<mash::JammerSpec> specs;
  for (const auto& name : split_list(text)) {
    auto kind = mash::jammer_from_name(name);
    if (!kind)
      throw mash::InvalidParameter("unknown jammer kind '" + name + "'");
    specs.push_back(mash::JammerSpec::make(*kind, antennas));
  }
  if (specs.empty()) throw mash::InvalidParameter("empty jammer list");
  return specs;
}

int default_parallelism() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "mash-sim: massive MIMO uplink simulator with secret-subspace jammer "
      "mitigation"};
  app.require_subcommand(1);
  app.fallthrough();  // scenario options are valid after the subcommand too
  app.set_config("--config", "",
                 "key/value file; keys mirror the scenario option names");

  mash::SystemConfig cfg;
  std::string lmmse_form = "small";

  app.add_option("--bs_antennas,--bs-antennas", cfg.bs_antennas,
                 "receive antennas (B)")
      ->capture_default_str();
  app.add_option("--users", cfg.users, "single-antenna users (U)")
      ->capture_default_str();
  app.add_option("--jammer_antennas,--jammer-antennas", cfg.jammer_antennas,
                 "antennas of multi-antenna jammer kinds (I)")
      ->capture_default_str();
  app.add_option("--frame_len,--frame-len", cfg.frame_len,
                 "samples per frame (L)")
      ->capture_default_str();
  app.add_option("--redundancy", cfg.redundancy,
                 "jammer-training dimensions sacrificed per frame (R)")
      ->capture_default_str();
  app.add_option("--pilot_len,--pilot-len", cfg.pilot_len,
                 "pilot samples per frame (T), must equal users")
      ->capture_default_str();
  app.add_option("--rho_db,--rho-db", cfg.rho_db,
                 "jammer receive power over the average user's, dB")
      ->capture_default_str();
  app.add_option("--snr_db,--snr-db", cfg.snr_db,
                 "average receive SNR in dB (sweep: see --snr)")
      ->capture_default_str();
  app.add_flag("--snr_infinite,--snr-infinite", cfg.snr_infinite,
               "disable thermal noise");
  app.add_option("--master_seed,--seed", cfg.master_seed,
                 "master seed; every draw is a pure function of it")
      ->capture_default_str();
  app.add_option("--secret", cfg.secret, "shared codebook secret")
      ->capture_default_str();
  app.add_flag("--codebook_refresh,!--no-refresh", cfg.codebook_refresh,
               "re-derive the codebook every frame (default on)");
  app.add_option("--rank_threshold_factor,--rank-factor",
                 cfg.rank_threshold_factor,
                 "interference-rank threshold multiplier")
      ->capture_default_str();
  app.add_option("--lmmse_form,--lmmse-form", lmmse_form,
                 "mitigating LMMSE evaluation: large|small")
      ->check(CLI::IsMember({"large", "small"}))
      ->capture_default_str();
  app.add_flag("--chanest_noise_term,--chanest-noise", cfg.chanest_noise_term,
               "include the noise level in the channel-estimate weighting");

  // sweep
  auto* sweep_cmd =
      app.add_subcommand("sweep", "Monte Carlo grid sweep, CSV output");
  std::string jammers_arg = "barrage";
  std::string receivers_arg = "mash-p,mash-l,baseline-lmmse,unmitigated,jammerless";
  std::string snr_arg = "10";
  mash::SweepPlan plan;
  plan.parallelism = default_parallelism();
  std::string out_path = "sweep.csv";
  sweep_cmd->add_option("--jammers", jammers_arg,
                        "comma list: barrage,data,pilot,sparse,eigenbeam,"
                        "multidata,dynamic,repeat")
      ->capture_default_str();
  sweep_cmd->add_option("--receivers", receivers_arg,
                        "comma list: mash-p,mash-l,baseline-lmmse,"
                        "unmitigated,jammerless")
      ->capture_default_str();
  sweep_cmd->add_option("--snr", snr_arg, "SNR axis: list 'a,b,c' or range 'lo:hi:step'")
      ->capture_default_str();
  sweep_cmd->add_option("--frames", plan.frames, "frames per grid cell")
      ->capture_default_str();
  sweep_cmd->add_option("--parallelism", plan.parallelism, "worker threads")
      ->capture_default_str();
  sweep_cmd->add_option("--out", out_path, "CSV path ('' prints to stdout)")
      ->capture_default_str();

  // verify
  auto* verify_cmd = app.add_subcommand(
      "verify", "property checks behind the mitigation guarantee");
  mash::VerifyOptions vopt;
  verify_cmd->add_option("--transform-checks", vopt.transform_checks,
                         "spectrum/scope instances per jammer kind")
      ->capture_default_str();
  verify_cmd->add_option("--uniformity-draws", vopt.uniformity_draws,
                         "codebook draws for the direction test")
      ->capture_default_str();
  verify_cmd->add_option("--duality-checks", vopt.duality_checks,
                         "embed/raise round-trip payloads")
      ->capture_default_str();
  verify_cmd->add_option("--nulling-checks", vopt.nulling_checks,
                         "noiseless end-to-end instances per kind")
      ->capture_default_str();
  verify_cmd->add_option("--codebook", vopt.codebook_mode,
                         "haar | permutation (negative control)")
      ->check(CLI::IsMember({"haar", "permutation"}))
      ->capture_default_str();
  verify_cmd->add_option("--redundancy-override", vopt.redundancy_override,
                         "override R for the checks (-1: keep)")
      ->capture_default_str();
  verify_cmd->add_option("--jammer", vopt.only_kind,
                         "restrict the per-kind checks to one jammer kind");

  // trial
  auto* trial_cmd =
      app.add_subcommand("trial", "run one frame and dump per-stage norms");
  std::string trial_jammer = "barrage";
  std::string trial_receiver = "mash-l";
  std::uint64_t trial_index = 0;
  trial_cmd->add_option("--jammer", trial_jammer, "jammer kind")
      ->capture_default_str();
  trial_cmd->add_option("--receiver", trial_receiver, "receiver name")
      ->capture_default_str();
  trial_cmd->add_option("--trial", trial_index, "trial index")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);
  cfg.lmmse_large_form = lmmse_form == "large";

  try {
    cfg.validate();

    if (sweep_cmd->parsed()) {
      plan.jammers = parse_jammers(jammers_arg, cfg.jammer_antennas);
      plan.receivers = split_list(receivers_arg);
      plan.snrs = mash::parse_snr_axis(snr_arg);
      std::string csv = mash::run_sweep(cfg, plan, out_path);
      if (out_path.empty()) {
        std::fputs(csv.c_str(), stdout);
      } else {
        const std::size_t cells =
            plan.jammers.size() * plan.receivers.size() * plan.snrs.size();
        std::printf("wrote %zu cells x %d frames to %s\n", cells, plan.frames,
                    out_path.c_str());
      }
      return 0;
    }

    if (verify_cmd->parsed()) {
      mash::VerifyReport report = mash::run_verify(cfg, vopt);
      for (const auto& check : report.checks)
        std::printf("[%s] %s: %s\n", check.pass ? "PASS" : "FAIL",
                    check.name.c_str(), check.detail.c_str());
      return report.all_pass() ? 0 : 1;
    }

    // trial
    auto kind = mash::jammer_from_name(trial_jammer);
    if (!kind)
      throw mash::InvalidParameter("unknown jammer kind '" + trial_jammer +
                                   "'");
    const mash::ReceiverSpec* receiver = mash::find_receiver(trial_receiver);
    if (receiver == nullptr)
      throw mash::InvalidParameter("unknown receiver '" + trial_receiver +
                                   "'");
    mash::JammerSpec spec =
        mash::JammerSpec::make(*kind, cfg.jammer_antennas);
    mash::TrialDiag diag;
    mash::TrialResult res =
        mash::run_trial(cfg, spec, *receiver, trial_index, &diag);

    std::printf("jammer=%s receiver=%s trial=%llu\n",
                mash::jammer_name(spec.kind), receiver->name.c_str(),
                static_cast<unsigned long long>(trial_index));
    std::printf("||H||=%.6g ||J||=%.6g ||X||=%.6g ||W||=%.6g ||JW||=%.6g "
                "||Y||=%.6g N0=%.6g\n",
                diag.ue_channel_norm, diag.jammer_channel_norm,
                diag.frame_norm, diag.waveform_norm, diag.interference_norm,
                diag.received_norm, diag.noise_variance);
    if (res.failed) {
      std::printf("trial failed: %s\n", res.error.c_str());
      return 1;
    }
    std::printf("symbol_error=%.6g bit_errors=%lld/%lld est_rank=%d\n",
                res.sig_den > 0 ? res.err_num / res.sig_den : 0.0,
                res.bit_errors, res.bits, res.est_rank);
    return 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
