#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "mash/codebook.hpp"
#include "mash/errors.hpp"
#include "mash/harness.hpp"
#include "mash/receivers.hpp"
#include "mash/stats.hpp"

namespace mash {

namespace {

constexpr double kSvTol = 1e-10;       // relative singular-value deviation
constexpr double kAngleTol = 1e-8;     // principal angle, radians
constexpr double kDualityTol = 1e-10;  // relative embed/raise round-trip
constexpr double kNullingTol = 1e-8;   // absolute symbol recovery error
constexpr double kUniformityAlpha = 0.01;

std::vector<JammerKind> selected_kinds(const std::string& only_kind) {
  if (only_kind.empty())
    return {JammerKind::Barrage,   JammerKind::DataJam,
            JammerKind::PilotJam,  JammerKind::SparseJam,
            JammerKind::EigenBeam, JammerKind::MultiData,
            JammerKind::DynamicBeam, JammerKind::Repeat};
  auto kind = jammer_from_name(only_kind);
  if (!kind)
    throw InvalidParameter("verify: unknown jammer kind '" + only_kind + "'");
  return {*kind};
}

std::string fmt_e(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

SecretCodebook make_codebook(const SystemConfig& cfg, const std::string& mode,
                             std::uint64_t instance) {
  const std::string secret = cfg.secret + "#" + std::to_string(instance);
  if (mode == "haar")
    return SecretCodebook::derive(secret, cfg.frame_len, cfg.redundancy);
  return SecretCodebook::permutation(secret, cfg.frame_len, cfg.redundancy);
}

// One noiseless over-the-air instance: channels, signals, subspace frame,
// scaled jammer waveform. Same per-stage substream discipline as run_trial.
struct Instance {
  SecretCodebook cb;
  FrameSignals sig;
  ChannelRealization chan;
  ComplexMatrix x;  // U x L transmitted frame
  ComplexMatrix w;  // scaled jammer waveform
};

Instance build_instance(const SystemConfig& cfg, const JammerSpec& spec,
                        const std::string& mode, std::uint64_t idx) {
  SystemConfig local = cfg;
  local.jammer_antennas = spec.antennas;
  local.validate();

  RandomStream chan_rng(local.master_seed, idx * 8 + 0);
  RandomStream sig_rng(local.master_seed, idx * 8 + 1);
  RandomStream jam_rng(local.master_seed, idx * 8 + 2);

  ChannelRealization chan = gen_channels(local, chan_rng);
  FrameSignals sig = gen_frame_signals(local, sig_rng);
  BaselineLayout nominal = layout_baseline(sig, local);
  SecretCodebook cb = make_codebook(local, mode, idx);
  ComplexMatrix x = layout_mash(sig, cb);

  JammerContext ctx;
  ctx.training_idx = nominal.columns.training;
  ctx.pilot_idx = nominal.columns.pilots;
  ctx.data_idx = nominal.columns.data;
  ctx.transmitted = &x;
  ctx.jammer_channel = &chan.jammer_channel;
  ComplexMatrix w_raw =
      gen_jammer_waveform(spec, ctx, local.frame_len, jam_rng);
  ComplexMatrix w = scale_jammer(w_raw, chan.jammer_channel, chan.ue_channel,
                                 x, local.rho_db);
  return {std::move(cb), std::move(sig), std::move(chan), std::move(x),
          std::move(w)};
}

}  // namespace

VerifyReport run_verify(const SystemConfig& cfg_in, const VerifyOptions& opt) {
  if (opt.codebook_mode != "haar" && opt.codebook_mode != "permutation")
    throw InvalidParameter("verify: codebook_mode must be haar or permutation");
  if (opt.transform_checks < 1 || opt.uniformity_draws < 1 ||
      opt.duality_checks < 1 || opt.nulling_checks < 1)
    throw InvalidParameter("verify: check counts must be >= 1");
  const std::vector<JammerKind> kinds = selected_kinds(opt.only_kind);

  SystemConfig cfg = cfg_in;
  if (opt.redundancy_override >= 0) cfg.redundancy = opt.redundancy_override;
  cfg.validate();

  VerifyReport report;
  std::uint64_t instance = 0;

  // 1 + 2: raising must keep the interference spectrum and its receive-side
  // subspace; one pass over shared instances feeds both checks.
  {
    double worst_sv = 0.0, worst_angle = 0.0;
    bool ranks_ok = true;
    int n = 0;
    for (JammerKind kind : kinds) {
      JammerSpec spec = JammerSpec::make(kind, cfg.jammer_antennas);
      for (int k = 0; k < opt.transform_checks; ++k, ++n) {
        Instance inst =
            build_instance(cfg, spec, opt.codebook_mode, instance++);
        TransformReport tr = verify_barrage_transform(
            inst.chan.jammer_channel, inst.w, inst.cb, kSvTol, kAngleTol);
        ranks_ok = ranks_ok &&
                   tr.sv_original.size() == tr.sv_transformed.size();
        worst_sv = std::max(worst_sv, tr.max_rel_sv_deviation);
        worst_angle = std::max(worst_angle, tr.max_principal_angle_rad);
      }
    }
    report.checks.push_back(
        {"singular-value-preservation", ranks_ok && worst_sv <= kSvTol,
         "max relative deviation " + fmt_e(worst_sv) + " over " +
             std::to_string(n) + " instances (tol " + fmt_e(kSvTol) + ")"});
    report.checks.push_back(
        {"spatial-scope", ranks_ok && worst_angle <= kAngleTol,
         "max principal angle " + fmt_e(worst_angle) + " rad over " +
             std::to_string(n) + " instances (tol " + fmt_e(kAngleTol) +
             ")"});
  }

  // 3: raised interference must look direction-free in time. Drive the most
  // structured waveform (pilot bursts) and test the leading right singular
  // vector's first coordinate against the uniform-sphere law.
  {
    JammerSpec spec = JammerSpec::make(JammerKind::PilotJam, 1);
    std::vector<double> stats;
    stats.reserve(static_cast<std::size_t>(opt.uniformity_draws));
    for (int k = 0; k < opt.uniformity_draws; ++k) {
      Instance inst = build_instance(cfg, spec, opt.codebook_mode, instance++);
      ComplexMatrix raised = raise(inst.chan.jammer_channel * inst.w, inst.cb);
      const auto svd = compact_svd(raised);
      if (svd.rank() == 0)
        throw DegenerateInput("verify: raised interference vanished");
      stats.push_back(std::norm(svd.right(0, 0)));
    }
    const double dim = static_cast<double>(cfg.frame_len - 1);
    KsResult ks = ks_test(
        std::move(stats), [dim](double x) { return beta1_cdf(x, dim); });
    report.checks.push_back(
        {"temporal-uniformity", ks.p_value >= kUniformityAlpha,
         "KS p=" + fmt_e(ks.p_value) + " (D=" + fmt_e(ks.statistic) +
             ", n=" + std::to_string(ks.n) + ", alpha " +
             fmt_e(kUniformityAlpha) + ")"});
  }

  // 4: embedding then raising returns the payload behind R zero columns.
  {
    double worst = 0.0;
    for (int k = 0; k < opt.duality_checks; ++k) {
      SystemConfig local = cfg;
      RandomStream sig_rng(local.master_seed, instance * 8 + 1);
      FrameSignals sig = gen_frame_signals(local, sig_rng);
      SecretCodebook cb = make_codebook(local, opt.codebook_mode, instance);
      ++instance;
      ComplexMatrix payload(sig.pilots.rows(),
                            sig.pilots.cols() + sig.data.cols());
      payload << sig.pilots, sig.data;
      ComplexMatrix round = raise(embed(payload, cb), cb);
      const double scale = std::max(payload.norm(), 1e-300);
      const double zero_part = round.leftCols(cb.redundancy()).norm() / scale;
      const double echo_part =
          (round.rightCols(cb.payload_len()) - payload).norm() / scale;
      worst = std::max(worst, std::max(zero_part, echo_part));
    }
    report.checks.push_back(
        {"embed-raise-duality", worst <= kDualityTol,
         "max relative round-trip error " + fmt_e(worst) + " over " +
             std::to_string(opt.duality_checks) + " payloads (tol " +
             fmt_e(kDualityTol) + ")"});
  }

  // 5: with no thermal noise the projection receiver must null the jammer
  // and hand back the exact payload.
  {
    double worst = 0.0;
    std::string worst_kind = "none";
    int worst_rank = 0, worst_est = 0;
    int n = 0;
    for (JammerKind kind : kinds) {
      JammerSpec spec = JammerSpec::make(kind, cfg.jammer_antennas);
      for (int k = 0; k < opt.nulling_checks; ++k, ++n) {
        Instance inst =
            build_instance(cfg, spec, opt.codebook_mode, instance++);
        ComplexMatrix y =
            inst.chan.ue_channel * inst.x + inst.chan.jammer_channel * inst.w;
        RaisedParts parts =
            split_raised(raise(y, inst.cb), cfg.redundancy, cfg.pilot_len);
        DetectionResult det = detect_projection(
            parts, inst.sig.pilots, 0.0, cfg.rank_threshold_factor);
        const double err =
            (det.symbols - inst.sig.data).cwiseAbs().maxCoeff();
        if (err > worst) {
          worst = err;
          worst_kind = jammer_name(kind);
          worst_rank = static_cast<int>(
              compact_svd(inst.chan.jammer_channel * inst.w).rank());
          worst_est = det.est_rank;
        }
      }
    }
    std::string detail = "max symbol error " + fmt_e(worst) + " over " +
                         std::to_string(n) + " instances (tol " +
                         fmt_e(kNullingTol) + ")";
    if (worst > kNullingTol)
      detail += "; worst kind " + worst_kind + " with interference rank " +
                std::to_string(worst_rank) + ", estimated " +
                std::to_string(worst_est) +
                "; exact nulling needs R >= I* (R=" +
                std::to_string(cfg.redundancy) + ")";
    report.checks.push_back(
        {"noiseless-nulling", worst <= kNullingTol, std::move(detail)});
  }

  return report;
}

}  // namespace mash
