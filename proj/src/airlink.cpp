#include "mash/airlink.hpp"

#include <cmath>

#include "mash/errors.hpp"

namespace mash {

void SystemConfig::validate() const {
  if (bs_antennas < 1 || users < 1 || jammer_antennas < 1 || frame_len < 1 ||
      pilot_len < 1 || redundancy < 1)
    throw InvalidParameter("config: all counts must be positive");
  if (pilot_len != users)
    throw InvalidParameter("config: pilot_len must equal users");
  if ((users & (users - 1)) != 0)
    throw InvalidParameter(
        "config: users must be a power of two for the Sylvester pilots");
  if (jammer_antennas >= bs_antennas)
    throw InvalidParameter("config: jammer_antennas must be < bs_antennas");
  if (data_len() < 1)
    throw InvalidParameter(
        "config: frame_len must exceed redundancy + pilot_len");
  if (rank_threshold_factor <= 0.0)
    throw InvalidParameter("config: rank_threshold_factor must be positive");
}

ComplexMatrix hadamard_pilots(int users) {
  if (users < 1 || (users & (users - 1)) != 0)
    throw InvalidParameter("hadamard_pilots: users must be a power of two");
  ComplexMatrix h(1, 1);
  h(0, 0) = 1.0;
  for (int n = 1; n < users; n *= 2) {
    ComplexMatrix next(2 * n, 2 * n);
    next << h, h, h, -h;
    h = std::move(next);
  }
  return h;
}

Complex qpsk_symbol(std::uint8_t b0, std::uint8_t b1) {
  static const double s = 1.0 / std::sqrt(2.0);
  return {b0 ? -s : s, b1 ? -s : s};
}

ChannelRealization gen_channels(const SystemConfig& cfg, RandomStream& rng) {
  ChannelRealization ch;
  ch.ue_channel.resize(cfg.bs_antennas, cfg.users);
  ch.ue_gains.resize(cfg.users);
  for (int u = 0; u < cfg.users; ++u) {
    const double power_db = -3.0 + 6.0 * rng.uniform();
    const double gain = std::pow(10.0, power_db / 20.0);
    ch.ue_gains(u) = gain;
    for (int b = 0; b < cfg.bs_antennas; ++b)
      ch.ue_channel(b, u) = gain * rng.complex_gaussian(1.0);
  }
  ch.jammer_channel =
      gaussian_matrix(cfg.bs_antennas, cfg.jammer_antennas, 1.0, rng);
  return ch;
}

FrameSignals gen_frame_signals(const SystemConfig& cfg, RandomStream& rng) {
  FrameSignals sig;
  sig.pilots = hadamard_pilots(cfg.users);
  const int d = cfg.data_len();
  sig.data_bits.resize(static_cast<std::size_t>(2 * cfg.users * d));
  for (auto& bit : sig.data_bits)
    bit = static_cast<std::uint8_t>(rng.below(2));
  sig.data.resize(cfg.users, d);
  for (int u = 0; u < cfg.users; ++u)
    for (int k = 0; k < d; ++k) {
      const std::size_t at = 2 * (static_cast<std::size_t>(u) * d + k);
      sig.data(u, k) = qpsk_symbol(sig.data_bits[at], sig.data_bits[at + 1]);
    }
  return sig;
}

std::vector<int> baseline_training_positions(int frame_len, int redundancy) {
  if (redundancy < 0 || redundancy > frame_len)
    throw InvalidParameter("baseline_training_positions: redundancy range");
  std::vector<int> idx;
  idx.reserve(static_cast<std::size_t>(redundancy));
  for (int j = 0; j < redundancy; ++j)
    idx.push_back(static_cast<int>((static_cast<long long>(j) * frame_len) /
                                   redundancy));
  return idx;
}

BaselineLayout layout_baseline(const FrameSignals& sig,
                               const SystemConfig& cfg) {
  const int l = cfg.frame_len;
  BaselineLayout lay;
  lay.columns.training = baseline_training_positions(l, cfg.redundancy);
  std::vector<bool> is_training(static_cast<std::size_t>(l), false);
  for (int k : lay.columns.training) is_training[static_cast<std::size_t>(k)] = true;

  for (int k = 0; k < l; ++k) {
    if (is_training[static_cast<std::size_t>(k)]) continue;
    if (static_cast<int>(lay.columns.pilots.size()) < cfg.pilot_len)
      lay.columns.pilots.push_back(k);
    else
      lay.columns.data.push_back(k);
  }
  if (static_cast<int>(lay.columns.data.size()) != cfg.data_len())
    throw InvalidParameter("layout_baseline: frame partition mismatch");

  lay.frame = ComplexMatrix::Zero(sig.pilots.rows(), l);
  for (std::size_t i = 0; i < lay.columns.pilots.size(); ++i)
    lay.frame.col(lay.columns.pilots[i]) =
        sig.pilots.col(static_cast<Eigen::Index>(i));
  for (std::size_t i = 0; i < lay.columns.data.size(); ++i)
    lay.frame.col(lay.columns.data[i]) =
        sig.data.col(static_cast<Eigen::Index>(i));
  return lay;
}

ComplexMatrix layout_mash(const FrameSignals& sig, const SecretCodebook& cb) {
  ComplexMatrix payload(sig.pilots.rows(), sig.pilots.cols() + sig.data.cols());
  payload << sig.pilots, sig.data;
  return embed(payload, cb);
}

ComplexMatrix scale_jammer(const ComplexMatrix& waveform_raw,
                           const ComplexMatrix& jammer_channel,
                           const ComplexMatrix& ue_channel,
                           const ComplexMatrix& transmitted, double rho_db) {
  if (jammer_channel.cols() != waveform_raw.rows())
    throw InvalidShape("scale_jammer: J/W inner dimension");
  if (ue_channel.cols() != transmitted.rows())
    throw InvalidShape("scale_jammer: H/X inner dimension");
  const double rx_jam = (jammer_channel * waveform_raw).squaredNorm();
  if (rx_jam == 0.0)
    throw CannotNormalize("scale_jammer: J*W carries no energy");
  const double rx_sig = (ue_channel * transmitted).squaredNorm();
  const double target = std::pow(10.0, rho_db / 10.0) * rx_sig /
                        static_cast<double>(transmitted.rows());
  return std::sqrt(target / rx_jam) * waveform_raw;
}

NoisyFrame add_noise(const ComplexMatrix& clean,
                     const ComplexMatrix& ue_channel,
                     const ComplexMatrix& transmitted, double snr_db,
                     bool snr_infinite, RandomStream& rng) {
  if (snr_infinite) return {clean, 0.0};
  const double rx_sig = (ue_channel * transmitted).squaredNorm();
  if (rx_sig == 0.0) throw DegenerateInput("add_noise: zero signal energy");
  const double n0 =
      rx_sig / (static_cast<double>(clean.rows()) *
                static_cast<double>(clean.cols()) * std::pow(10.0, snr_db / 10.0));
  NoisyFrame out;
  out.noise_variance = n0;
  out.received =
      clean + gaussian_matrix(clean.rows(), clean.cols(), n0, rng);
  return out;
}

}  // namespace mash
