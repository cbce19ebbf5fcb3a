#include "mash/receivers.hpp"

#include <algorithm>
#include <cmath>

#include "mash/errors.hpp"

namespace mash {

namespace {

// c = ||S_T||^2 / U; the LS estimate Y_T * S_T^H / c is exact for pilot
// blocks with orthogonal rows.
double pilot_gain(const ComplexMatrix& pilots) {
  const double c = pilots.squaredNorm() / static_cast<double>(pilots.rows());
  if (c <= 0.0) throw DegenerateInput("receiver: pilot block has no energy");
  return c;
}

void check_observations(const RaisedParts& parts, const ComplexMatrix& pilots,
                        double noise_var) {
  if (noise_var < 0.0)
    throw InvalidParameter("receiver: noise_var must be >= 0");
  if (parts.training.rows() != parts.data.rows() ||
      parts.training.rows() != parts.jammer_only.rows())
    throw InvalidShape("receiver: observation blocks disagree on antennas");
  if (pilots.cols() != parts.training.cols())
    throw InvalidShape("receiver: pilot block length mismatch");
  if (parts.training.cols() < 1 || parts.data.cols() < 1)
    throw InvalidShape("receiver: empty training or data block");
}

ComplexMatrix equalize_lmmse(const ComplexMatrix& chanest,
                             const ComplexMatrix& data, double noise_var) {
  const Eigen::Index u = chanest.cols();
  ComplexMatrix gram = chanest.adjoint() * chanest;
  gram += noise_var * ComplexMatrix::Identity(u, u);
  return hermitian_solve(gram, chanest.adjoint() * data);
}

double training_residual(const ComplexMatrix& observed,
                         const ComplexMatrix& chanest,
                         const ComplexMatrix& pilots) {
  const double denom = std::max(observed.norm(), 1e-300);
  return (observed - chanest * pilots).norm() / denom;
}

DetectionResult finish(ComplexMatrix symbols, int est_rank, double residual) {
  DetectionResult res;
  res.bits = demap_bits(symbols);
  res.symbols = std::move(symbols);
  res.est_rank = est_rank;
  res.pilot_residual = residual;
  return res;
}

}  // namespace

RaisedParts split_raised(const ComplexMatrix& raised, int redundancy,
                         int pilot_len) {
  if (redundancy < 0 || pilot_len < 1)
    throw InvalidPartition("split_raised: need redundancy >= 0, pilot_len >= 1");
  if (redundancy + pilot_len >= raised.cols())
    throw InvalidPartition("split_raised: no data columns left");
  RaisedParts parts;
  parts.jammer_only = raised.leftCols(redundancy);
  parts.training = raised.middleCols(redundancy, pilot_len);
  parts.data = raised.rightCols(raised.cols() - redundancy - pilot_len);
  return parts;
}

int estimate_rank(const ComplexMatrix& jammer_only, double noise_var,
                  double factor, int max_rank) {
  if (noise_var < 0.0)
    throw InvalidParameter("estimate_rank: noise_var must be >= 0");
  if (factor <= 0.0)
    throw InvalidParameter("estimate_rank: factor must be > 0");
  if (jammer_only.size() == 0) return 0;
  const auto svd = compact_svd(jammer_only);
  const double threshold =
      factor * std::sqrt(static_cast<double>(jammer_only.rows()) * noise_var);
  int count = 0;
  for (Eigen::Index k = 0; k < svd.singular_values.size(); ++k)
    if (svd.singular_values(k) > threshold) ++count;
  return std::min(count, max_rank);
}

std::pair<std::uint8_t, std::uint8_t> qpsk_demap(Complex symbol) {
  return {static_cast<std::uint8_t>(symbol.real() < 0.0),
          static_cast<std::uint8_t>(symbol.imag() < 0.0)};
}

std::vector<std::uint8_t> demap_bits(const ComplexMatrix& symbols) {
  std::vector<std::uint8_t> bits;
  bits.reserve(static_cast<std::size_t>(symbols.size()) * 2);
  for (Eigen::Index u = 0; u < symbols.rows(); ++u)
    for (Eigen::Index k = 0; k < symbols.cols(); ++k) {
      auto [b0, b1] = qpsk_demap(symbols(u, k));
      bits.push_back(b0);
      bits.push_back(b1);
    }
  return bits;
}

DetectionResult detect_projection(const RaisedParts& parts,
                                  const ComplexMatrix& pilots,
                                  double noise_var,
                                  double rank_threshold_factor) {
  check_observations(parts, pilots, noise_var);
  if (rank_threshold_factor <= 0.0)
    throw InvalidParameter("receiver: rank_threshold_factor must be > 0");

  const Eigen::Index b = parts.training.rows();
  const int max_rank =
      static_cast<int>(std::min(b, parts.jammer_only.cols()));
  const int est_rank = estimate_rank(parts.jammer_only, noise_var,
                                     rank_threshold_factor, max_rank);

  ComplexMatrix proj_t = parts.training;
  ComplexMatrix proj_d = parts.data;
  if (est_rank > 0) {
    // P = I - U U^H applied without forming the B x B projector
    const auto svd = compact_svd(parts.jammer_only);
    ComplexMatrix basis = svd.left.leftCols(est_rank);
    proj_t -= basis * (basis.adjoint() * proj_t);
    proj_d -= basis * (basis.adjoint() * proj_d);
  }

  ComplexMatrix chanest = proj_t * pilots.adjoint() / pilot_gain(pilots);
  ComplexMatrix symbols = equalize_lmmse(chanest, proj_d, noise_var);
  return finish(std::move(symbols), est_rank,
                training_residual(proj_t, chanest, pilots));
}

DetectionResult detect_lmmse(const RaisedParts& parts,
                             const ComplexMatrix& pilots, double noise_var,
                             LmmseForm form, bool chanest_noise_term) {
  check_observations(parts, pilots, noise_var);
  const Eigen::Index r = parts.jammer_only.cols();
  if (r < 1)
    throw InvalidShape("receiver: lmmse needs jammer-only observations");

  const Eigen::Index b = parts.training.rows();
  const double u = static_cast<double>(pilots.rows());
  const double c = pilot_gain(pilots);
  const double scale = chanest_noise_term ? 1.0 + noise_var / u : 1.0;

  ComplexMatrix chanest;
  ComplexMatrix symbols;

  if (form == LmmseForm::Large) {
    ComplexMatrix cov =
        parts.jammer_only * parts.jammer_only.adjoint() / static_cast<double>(r);
    ComplexMatrix weight = cov / u;
    weight += scale * ComplexMatrix::Identity(b, b);
    chanest = hermitian_solve(weight, parts.training) * pilots.adjoint() / c;

    ComplexMatrix mix = chanest * chanest.adjoint() + cov;
    mix += noise_var * ComplexMatrix::Identity(b, b);
    symbols = chanest.adjoint() * hermitian_solve(mix, parts.data);
  } else {
    ComplexMatrix g = parts.training * pilots.adjoint() / c;
    ComplexMatrix inner = parts.jammer_only.adjoint() * parts.jammer_only;
    inner += scale * u * static_cast<double>(r) *
             ComplexMatrix::Identity(r, r);
    chanest =
        (g - parts.jammer_only *
                 hermitian_solve(inner, parts.jammer_only.adjoint() * g)) /
        scale;

    ComplexMatrix f(b, chanest.cols() + r);
    f << chanest, parts.jammer_only / std::sqrt(static_cast<double>(r));
    ComplexMatrix gram = f.adjoint() * f;
    gram += noise_var * ComplexMatrix::Identity(gram.rows(), gram.cols());
    symbols = hermitian_solve(gram, f.adjoint() * parts.data)
                  .topRows(chanest.cols());
  }

  return finish(std::move(symbols), -1,
                training_residual(parts.training, chanest, pilots));
}

DetectionResult detect_plain(const ComplexMatrix& training,
                             const ComplexMatrix& data,
                             const ComplexMatrix& pilots, double noise_var) {
  RaisedParts parts;
  parts.jammer_only = ComplexMatrix(training.rows(), 0);
  parts.training = training;
  parts.data = data;
  check_observations(parts, pilots, noise_var);

  ComplexMatrix chanest = training * pilots.adjoint() / pilot_gain(pilots);
  ComplexMatrix symbols = equalize_lmmse(chanest, data, noise_var);
  return finish(std::move(symbols), -1,
                training_residual(training, chanest, pilots));
}

}  // namespace mash
