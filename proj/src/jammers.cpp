#include "mash/jammers.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "mash/errors.hpp"

namespace mash {

bool is_single_antenna(JammerKind kind) {
  switch (kind) {
    case JammerKind::Barrage:
    case JammerKind::DataJam:
    case JammerKind::PilotJam:
    case JammerKind::SparseJam:
      return true;
    default:
      return false;
  }
}

bool is_barrage(JammerKind kind) {
  return kind == JammerKind::Barrage || kind == JammerKind::EigenBeam;
}

const char* jammer_name(JammerKind kind) {
  switch (kind) {
    case JammerKind::Barrage: return "barrage";
    case JammerKind::DataJam: return "data";
    case JammerKind::PilotJam: return "pilot";
    case JammerKind::SparseJam: return "sparse";
    case JammerKind::EigenBeam: return "eigenbeam";
    case JammerKind::MultiData: return "multidata";
    case JammerKind::DynamicBeam: return "dynamic";
    case JammerKind::Repeat: return "repeat";
  }
  return "unknown";
}

std::optional<JammerKind> jammer_from_name(std::string_view name) {
  for (JammerKind k :
       {JammerKind::Barrage, JammerKind::DataJam, JammerKind::PilotJam,
        JammerKind::SparseJam, JammerKind::EigenBeam, JammerKind::MultiData,
        JammerKind::DynamicBeam, JammerKind::Repeat})
    if (name == jammer_name(k)) return k;
  return std::nullopt;
}

JammerSpec JammerSpec::make(JammerKind kind, int antennas) {
  JammerSpec s;
  s.kind = kind;
  s.antennas = is_single_antenna(kind) ? 1 : antennas;
  return s;
}

void JammerSpec::validate() const {
  if (antennas < 1) throw InvalidParameter("jammer: antennas must be >= 1");
  if (is_single_antenna(kind) && antennas != 1)
    throw InvalidParameter("jammer: this kind transmits from one antenna");
  if (sparse_fraction <= 0.0 || sparse_fraction > 1.0)
    throw InvalidParameter("jammer: sparse_fraction must lie in (0, 1]");
  if (hold_prob < 0.0 || hold_prob > 1.0)
    throw InvalidParameter("jammer: hold_prob must lie in [0, 1]");
  if (active_row_cap < 1)
    throw InvalidParameter("jammer: active_row_cap must be >= 1");
  if (repeat_delay < 1)
    throw InvalidParameter("jammer: repeat_delay must be >= 1");
}

namespace {

ComplexMatrix burst_on_columns(int rows, int frame_len,
                               const std::vector<int>& columns,
                               RandomStream& rng) {
  ComplexMatrix w = ComplexMatrix::Zero(rows, frame_len);
  for (int k : columns) {
    if (k < 0 || k >= frame_len)
      throw InvalidParameter("jammer: column index outside frame");
    for (int r = 0; r < rows; ++r) w(r, k) = rng.complex_gaussian(1.0);
  }
  return w;
}

ComplexMatrix draw_beam_matrix(int antennas, int rows_live,
                               RandomStream& rng) {
  ComplexMatrix a = ComplexMatrix::Zero(antennas, antennas);
  auto rows = rng.sample_indices(static_cast<std::size_t>(antennas),
                                 static_cast<std::size_t>(rows_live));
  std::sort(rows.begin(), rows.end());
  for (std::size_t r : rows)
    for (int c = 0; c < antennas; ++c)
      a(static_cast<Eigen::Index>(r), c) = rng.complex_gaussian(1.0);
  return a;
}

}  // namespace

std::vector<ComplexMatrix> dynamic_beam_sequence(int antennas, int row_cap,
                                                 double hold_prob,
                                                 int frame_len,
                                                 RandomStream& rng) {
  if (antennas < 1 || frame_len < 1)
    throw InvalidParameter("dynamic_beam_sequence: dimensions");
  const int live = std::min(row_cap, antennas);
  std::vector<ComplexMatrix> seq;
  seq.reserve(static_cast<std::size_t>(frame_len));
  seq.push_back(draw_beam_matrix(antennas, live, rng));
  for (int k = 1; k < frame_len; ++k) {
    if (rng.uniform() < hold_prob)
      seq.push_back(seq.back());
    else
      seq.push_back(draw_beam_matrix(antennas, live, rng));
  }
  return seq;
}

ComplexMatrix gen_jammer_waveform(const JammerSpec& spec,
                                  const JammerContext& ctx, int frame_len,
                                  RandomStream& rng) {
  spec.validate();
  if (frame_len < 1) throw InvalidParameter("jammer: frame_len must be >= 1");
  const int i = spec.antennas;

  switch (spec.kind) {
    case JammerKind::Barrage:
      return gaussian_matrix(1, frame_len, 1.0, rng);

    case JammerKind::DataJam:
      if (ctx.data_idx.empty())
        throw MissingContext("jammer: data positions unknown");
      return burst_on_columns(1, frame_len, ctx.data_idx, rng);

    case JammerKind::PilotJam:
      if (ctx.pilot_idx.empty())
        throw MissingContext("jammer: pilot positions unknown");
      return burst_on_columns(1, frame_len, ctx.pilot_idx, rng);

    case JammerKind::SparseJam: {
      const int hits = static_cast<int>(
          std::ceil(spec.sparse_fraction * static_cast<double>(frame_len)));
      auto idx = rng.sample_indices(static_cast<std::size_t>(frame_len),
                                    static_cast<std::size_t>(hits));
      std::vector<int> cols(idx.begin(), idx.end());
      std::sort(cols.begin(), cols.end());
      return burst_on_columns(1, frame_len, cols, rng);
    }

    case JammerKind::EigenBeam: {
      if (ctx.jammer_channel == nullptr)
        throw MissingContext("jammer: channel knowledge required");
      if (ctx.jammer_channel->cols() != i)
        throw InvalidShape("jammer: channel antenna count mismatch");
      // beams along the right singular vectors of its own channel
      Eigen::JacobiSVD<ComplexMatrix> svd(*ctx.jammer_channel,
                                          Eigen::ComputeFullV);
      return svd.matrixV() * gaussian_matrix(i, frame_len, 1.0, rng);
    }

    case JammerKind::MultiData:
      if (ctx.data_idx.empty())
        throw MissingContext("jammer: data positions unknown");
      return burst_on_columns(i, frame_len, ctx.data_idx, rng);

    case JammerKind::DynamicBeam: {
      auto beams = dynamic_beam_sequence(i, spec.active_row_cap,
                                         spec.hold_prob, frame_len, rng);
      ComplexMatrix w(i, frame_len);
      for (int k = 0; k < frame_len; ++k) {
        ComplexVector drive(i);
        for (int r = 0; r < i; ++r) drive(r) = rng.complex_gaussian(1.0);
        w.col(k) = beams[static_cast<std::size_t>(k)] * drive;
      }
      return w;
    }

    case JammerKind::Repeat: {
      if (ctx.transmitted == nullptr)
        throw MissingContext("jammer: transmitted frame unknown");
      if (ctx.transmitted->rows() < i)
        throw InvalidParameter(
            "jammer: repeat antennas exceed available streams");
      if (ctx.transmitted->cols() != frame_len)
        throw InvalidShape("jammer: transmitted frame length mismatch");
      ComplexMatrix w = ComplexMatrix::Zero(i, frame_len);
      const int d = spec.repeat_delay;
      if (d < frame_len)
        w.rightCols(frame_len - d) =
            ctx.transmitted->topRows(i).leftCols(frame_len - d);
      return w;
    }
  }
  throw InvalidParameter("jammer: unknown kind");
}

}  // namespace mash
