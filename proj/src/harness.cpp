#include "mash/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

#include "mash/codebook.hpp"
#include "mash/errors.hpp"
#include "mash/receivers.hpp"

namespace mash {

const std::vector<ReceiverSpec>& receiver_registry() {
  static const std::vector<ReceiverSpec> registry = {
      {"mash-p", ReceiverKind::MashProjection, true, true},
      {"mash-l", ReceiverKind::MashLmmse, true, true},
      {"baseline-lmmse", ReceiverKind::BaselineLmmse, false, true},
      {"unmitigated", ReceiverKind::Unmitigated, false, true},
      {"jammerless", ReceiverKind::Jammerless, false, false},
  };
  return registry;
}

const ReceiverSpec* find_receiver(std::string_view name) {
  for (const auto& r : receiver_registry())
    if (r.name == name) return &r;
  return nullptr;
}

namespace {

RaisedParts slice_columns(const ComplexMatrix& y, const ColumnPartition& p) {
  RaisedParts parts;
  parts.jammer_only.resize(y.rows(), static_cast<Eigen::Index>(p.training.size()));
  parts.training.resize(y.rows(), static_cast<Eigen::Index>(p.pilots.size()));
  parts.data.resize(y.rows(), static_cast<Eigen::Index>(p.data.size()));
  for (std::size_t k = 0; k < p.training.size(); ++k)
    parts.jammer_only.col(static_cast<Eigen::Index>(k)) = y.col(p.training[k]);
  for (std::size_t k = 0; k < p.pilots.size(); ++k)
    parts.training.col(static_cast<Eigen::Index>(k)) = y.col(p.pilots[k]);
  for (std::size_t k = 0; k < p.data.size(); ++k)
    parts.data.col(static_cast<Eigen::Index>(k)) = y.col(p.data[k]);
  return parts;
}

long long count_bit_errors(const std::vector<std::uint8_t>& a,
                           const std::vector<std::uint8_t>& b) {
  if (a.size() != b.size())
    throw InvalidShape("trial: detected bit count mismatch");
  long long errors = 0;
  for (std::size_t k = 0; k < a.size(); ++k) errors += a[k] != b[k];
  return errors;
}

std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double parse_number(const std::string& text) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    throw InvalidParameter("snr axis: bad number '" + text + "'");
  }
  if (pos != text.size() || !std::isfinite(v))
    throw InvalidParameter("snr axis: bad number '" + text + "'");
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) out.push_back(item);
  if (!text.empty() && text.back() == sep) out.push_back("");
  return out;
}

}  // namespace

TrialResult run_trial(const SystemConfig& cfg, const JammerSpec& jammer,
                      const ReceiverSpec& receiver, std::uint64_t trial_index,
                      TrialDiag* diag) {
  TrialResult out;
  try {
    jammer.validate();
    SystemConfig local = cfg;
    local.jammer_antennas = jammer.antennas;
    local.validate();

    // one substream per stage; cells sharing a trial index share draws
    const std::uint64_t base = trial_index * 8;
    RandomStream chan_rng(local.master_seed, base + 0);
    RandomStream sig_rng(local.master_seed, base + 1);
    RandomStream jam_rng(local.master_seed, base + 2);
    RandomStream noise_rng(local.master_seed, base + 3);

    ChannelRealization chan = gen_channels(local, chan_rng);
    FrameSignals sig = gen_frame_signals(local, sig_rng);
    BaselineLayout nominal = layout_baseline(sig, local);

    std::optional<SecretCodebook> cb;
    ComplexMatrix x;
    if (receiver.mash_layout) {
      std::string secret = local.secret;
      if (local.codebook_refresh) secret += "#" + std::to_string(trial_index);
      cb = SecretCodebook::derive(secret, local.frame_len, local.redundancy);
      x = layout_mash(sig, *cb);
    } else {
      x = nominal.frame;
    }

    ComplexMatrix clean = chan.ue_channel * x;
    if (receiver.jammer_active) {
      JammerContext ctx;
      ctx.training_idx = nominal.columns.training;
      ctx.pilot_idx = nominal.columns.pilots;
      ctx.data_idx = nominal.columns.data;
      ctx.transmitted = &x;
      ctx.jammer_channel = &chan.jammer_channel;
      ComplexMatrix w_raw =
          gen_jammer_waveform(jammer, ctx, local.frame_len, jam_rng);
      ComplexMatrix w = scale_jammer(w_raw, chan.jammer_channel,
                                     chan.ue_channel, x, local.rho_db);
      ComplexMatrix interference = chan.jammer_channel * w;
      if (diag != nullptr) {
        diag->waveform_norm = w.norm();
        diag->interference_norm = interference.norm();
      }
      clean += interference;
    }

    NoisyFrame rx = add_noise(clean, chan.ue_channel, x, local.snr_db,
                              local.snr_infinite, noise_rng);
    if (diag != nullptr) {
      diag->ue_channel_norm = chan.ue_channel.norm();
      diag->jammer_channel_norm = chan.jammer_channel.norm();
      diag->frame_norm = x.norm();
      diag->received_norm = rx.received.norm();
      diag->noise_variance = rx.noise_variance;
    }
    const LmmseForm form =
        local.lmmse_large_form ? LmmseForm::Large : LmmseForm::Small;

    DetectionResult det;
    switch (receiver.kind) {
      case ReceiverKind::MashProjection: {
        RaisedParts parts = split_raised(raise(rx.received, *cb),
                                         local.redundancy, local.pilot_len);
        det = detect_projection(parts, sig.pilots, rx.noise_variance,
                                local.rank_threshold_factor);
        break;
      }
      case ReceiverKind::MashLmmse: {
        RaisedParts parts = split_raised(raise(rx.received, *cb),
                                         local.redundancy, local.pilot_len);
        det = detect_lmmse(parts, sig.pilots, rx.noise_variance, form,
                           local.chanest_noise_term);
        break;
      }
      case ReceiverKind::BaselineLmmse: {
        RaisedParts parts = slice_columns(rx.received, nominal.columns);
        det = detect_lmmse(parts, sig.pilots, rx.noise_variance, form,
                           local.chanest_noise_term);
        break;
      }
      case ReceiverKind::Unmitigated:
      case ReceiverKind::Jammerless: {
        RaisedParts parts = slice_columns(rx.received, nominal.columns);
        det = detect_plain(parts.training, parts.data, sig.pilots,
                           rx.noise_variance);
        break;
      }
    }

    out.err_num = (det.symbols - sig.data).norm();
    out.sig_den = sig.data.norm();
    out.bit_errors = count_bit_errors(det.bits, sig.data_bits);
    out.bits = static_cast<long long>(sig.data_bits.size());
    out.est_rank = det.est_rank;
  } catch (const std::exception& e) {
    out.failed = true;
    out.error = e.what();
  }
  return out;
}

Aggregate aggregate(const std::vector<TrialResult>& trials) {
  Aggregate agg;
  agg.trials = static_cast<long long>(trials.size());
  double num = 0.0, den = 0.0, rank_sum = 0.0;
  long long bit_errors = 0, bits = 0, rank_n = 0;
  for (const auto& t : trials) {
    if (t.failed) {
      ++agg.trial_errors;
      continue;
    }
    num += t.err_num;
    den += t.sig_den;
    bit_errors += t.bit_errors;
    bits += t.bits;
    if (t.est_rank >= 0) {
      rank_sum += t.est_rank;
      ++rank_n;
    }
  }
  agg.mer_percent = den > 0.0 ? 100.0 * num / den : 0.0;
  agg.ber = bits > 0 ? static_cast<double>(bit_errors) / static_cast<double>(bits)
                     : 0.0;
  agg.mean_est_rank = rank_n > 0 ? rank_sum / static_cast<double>(rank_n) : -1.0;
  return agg;
}

std::vector<double> parse_snr_axis(const std::string& text) {
  if (text.empty()) throw InvalidParameter("snr axis: empty");
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    auto parts = split(text, ':');
    if (parts.size() != 3)
      throw InvalidParameter("snr axis: want lo:hi:step");
    const double lo = parse_number(parts[0]);
    const double hi = parse_number(parts[1]);
    const double step = parse_number(parts[2]);
    if (step <= 0.0) throw InvalidParameter("snr axis: step must be > 0");
    if (lo > hi) throw InvalidParameter("snr axis: lo must not exceed hi");
    const double slack = 1e-9 * std::max(1.0, std::abs(hi));
    const long long steps =
        static_cast<long long>(std::floor((hi - lo + slack) / step));
    for (long long k = 0; k <= steps; ++k)
      out.push_back(lo + static_cast<double>(k) * step);
  } else {
    for (const auto& item : split(text, ','))
      out.push_back(parse_number(item));
  }
  return out;
}

std::string run_sweep(const SystemConfig& base, const SweepPlan& plan,
                      const std::string& out_path) {
  base.validate();
  if (plan.frames < 1) throw InvalidParameter("sweep: frames must be >= 1");
  if (plan.parallelism < 1)
    throw InvalidParameter("sweep: parallelism must be >= 1");
  if (plan.jammers.empty() || plan.receivers.empty() || plan.snrs.empty())
    throw InvalidParameter("sweep: empty jammer, receiver, or snr axis");
  for (const auto& j : plan.jammers) j.validate();

  std::vector<const ReceiverSpec*> receivers;
  for (const auto& name : plan.receivers) {
    const ReceiverSpec* r = find_receiver(name);
    if (r == nullptr)
      throw InvalidParameter("sweep: unknown receiver '" + name + "'");
    receivers.push_back(r);
  }

  struct Cell {
    const JammerSpec* jammer;
    const ReceiverSpec* receiver;
    double snr;
  };
  std::vector<Cell> cells;
  for (const auto& jam : plan.jammers)
    for (const ReceiverSpec* rx : receivers)
      for (double snr : plan.snrs) cells.push_back({&jam, rx, snr});

  const std::size_t per_cell = static_cast<std::size_t>(plan.frames);
  std::vector<TrialResult> results(cells.size() * per_cell);

  // work-stealing over independent (cell, frame) pairs; result slots are
  // preassigned, so the output cannot depend on the thread count
  std::atomic<std::size_t> cursor{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t k = cursor.fetch_add(1);
      if (k >= results.size()) return;
      const Cell& cell = cells[k / per_cell];
      SystemConfig cfg = base;
      cfg.snr_db = cell.snr;
      results[k] =
          run_trial(cfg, *cell.jammer, *cell.receiver, k % per_cell);
    }
  };
  const int threads = std::min<int>(
      plan.parallelism, static_cast<int>(results.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  long long total_errors = 0;
  for (const auto& r : results) total_errors += r.failed ? 1 : 0;
  if (total_errors * 1000 > static_cast<long long>(results.size())) {
    std::string first;
    for (const auto& r : results)
      if (r.failed) {
        first = r.error;
        break;
      }
    throw SweepAborted("sweep: " + std::to_string(total_errors) + " of " +
                       std::to_string(results.size()) +
                       " trials failed; first error: " + first);
  }

  std::ostringstream csv;
  csv << "jammer,receiver,snr_db,frames,ber,mer_percent,mean_est_rank,"
         "trial_errors\n";
  for (std::size_t c = 0; c < cells.size(); ++c) {
    std::vector<TrialResult> slice(
        results.begin() + static_cast<std::ptrdiff_t>(c * per_cell),
        results.begin() + static_cast<std::ptrdiff_t>((c + 1) * per_cell));
    Aggregate agg = aggregate(slice);
    csv << jammer_name(cells[c].jammer->kind) << ','
        << cells[c].receiver->name << ',' << fmt_g(cells[c].snr) << ','
        << plan.frames << ',' << fmt_g(agg.ber) << ','
        << fmt_g(agg.mer_percent) << ',' << fmt_g(agg.mean_est_rank) << ','
        << agg.trial_errors << '\n';
  }
  std::string text = csv.str();

  if (!out_path.empty()) {
    const std::string tmp = out_path + ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out.good())
        throw InvalidParameter("sweep: cannot write '" + tmp + "'");
      out << text;
    }
    if (std::rename(tmp.c_str(), out_path.c_str()) != 0)
      throw InvalidParameter("sweep: cannot move output into '" + out_path +
                             "'");
  }
  return text;
}

}  // namespace mash
