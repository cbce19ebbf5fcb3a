#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "mash/airlink.hpp"
#include "mash/errors.hpp"
#include "mash/jammers.hpp"
#include "mash/matrix.hpp"
#include "mash/random.hpp"
#include "mash/stats.hpp"

using namespace mash;

namespace {

JammerContext make_context(const SystemConfig& cfg, const ComplexMatrix* x,
                           const ComplexMatrix* j) {
  static FrameSignals sig;  // pilots/data content is irrelevant to the indices
  RandomStream rng(999, 0);
  sig = gen_frame_signals(cfg, rng);
  BaselineLayout lay = layout_baseline(sig, cfg);
  JammerContext ctx;
  ctx.training_idx = lay.columns.training;
  ctx.pilot_idx = lay.columns.pilots;
  ctx.data_idx = lay.columns.data;
  ctx.transmitted = x;
  ctx.jammer_channel = j;
  return ctx;
}

std::set<int> nonzero_columns(const ComplexMatrix& w) {
  std::set<int> cols;
  for (Eigen::Index k = 0; k < w.cols(); ++k)
    if (w.col(k).norm() > 0.0) cols.insert(static_cast<int>(k));
  return cols;
}

}  // namespace

TEST_SUITE("jammers") {

TEST_CASE("spec construction and validation") {
  // single-antenna kinds pin the antenna count no matter what was asked for
  for (JammerKind k : {JammerKind::Barrage, JammerKind::DataJam,
                       JammerKind::PilotJam, JammerKind::SparseJam}) {
    JammerSpec s = JammerSpec::make(k, 10);
    CHECK(s.antennas == 1);
    CHECK_NOTHROW(s.validate());
  }
  for (JammerKind k : {JammerKind::EigenBeam, JammerKind::MultiData,
                       JammerKind::DynamicBeam, JammerKind::Repeat}) {
    JammerSpec s = JammerSpec::make(k, 10);
    CHECK(s.antennas == 10);
    CHECK_NOTHROW(s.validate());
  }

  JammerSpec bad = JammerSpec::make(JammerKind::Barrage, 1);
  bad.antennas = 2;
  CHECK_THROWS_AS(bad.validate(), InvalidParameter);

  JammerSpec frac = JammerSpec::make(JammerKind::SparseJam, 1);
  frac.sparse_fraction = 0.0;
  CHECK_THROWS_AS(frac.validate(), InvalidParameter);
  frac.sparse_fraction = 1.5;
  CHECK_THROWS_AS(frac.validate(), InvalidParameter);

  JammerSpec hold = JammerSpec::make(JammerKind::DynamicBeam, 10);
  hold.hold_prob = 1.5;
  CHECK_THROWS_AS(hold.validate(), InvalidParameter);

  JammerSpec rep = JammerSpec::make(JammerKind::Repeat, 10);
  rep.repeat_delay = 0;
  CHECK_THROWS_AS(rep.validate(), InvalidParameter);
}

TEST_CASE("kind names round-trip") {
  const char* names[] = {"barrage", "data",      "pilot",   "sparse",
                         "eigenbeam", "multidata", "dynamic", "repeat"};
  for (const char* n : names) {
    auto k = jammer_from_name(n);
    REQUIRE(k.has_value());
    CHECK(jammer_name(*k) == std::string(n));
  }
  CHECK(!jammer_from_name("nonsense").has_value());
}

TEST_CASE("barrage flag covers exactly the two wideband kinds") {
  CHECK(is_barrage(JammerKind::Barrage));
  CHECK(is_barrage(JammerKind::EigenBeam));
  CHECK(!is_barrage(JammerKind::DataJam));
  CHECK(!is_barrage(JammerKind::PilotJam));
  CHECK(!is_barrage(JammerKind::SparseJam));
  CHECK(!is_barrage(JammerKind::MultiData));
  CHECK(!is_barrage(JammerKind::DynamicBeam));
  CHECK(!is_barrage(JammerKind::Repeat));
}

TEST_CASE("temporal supports per kind") {
  SystemConfig cfg;
  RandomStream xrng(1, 0);
  ComplexMatrix x = gaussian_matrix(16, 100, 1.0, xrng);
  ComplexMatrix j = gaussian_matrix(64, 10, 1.0, xrng);
  JammerContext ctx = make_context(cfg, &x, &j);

  SUBCASE("barrage occupies every sample") {
    RandomStream rng(2, 0);
    ComplexMatrix w = gen_jammer_waveform(
        JammerSpec::make(JammerKind::Barrage, 1), ctx, 100, rng);
    REQUIRE(w.rows() == 1);
    CHECK(nonzero_columns(w).size() == 100);
  }
  SUBCASE("data jammer hits exactly the nominal data samples") {
    RandomStream rng(2, 1);
    ComplexMatrix w = gen_jammer_waveform(
        JammerSpec::make(JammerKind::DataJam, 1), ctx, 100, rng);
    std::set<int> expect(ctx.data_idx.begin(), ctx.data_idx.end());
    CHECK(nonzero_columns(w) == expect);
  }
  SUBCASE("pilot jammer hits exactly the nominal pilot samples") {
    RandomStream rng(2, 2);
    ComplexMatrix w = gen_jammer_waveform(
        JammerSpec::make(JammerKind::PilotJam, 1), ctx, 100, rng);
    std::set<int> expect(ctx.pilot_idx.begin(), ctx.pilot_idx.end());
    CHECK(nonzero_columns(w) == expect);
  }
  SUBCASE("sparse jammer hits ceil(0.1 * L) random samples") {
    RandomStream rng(2, 3);
    ComplexMatrix w = gen_jammer_waveform(
        JammerSpec::make(JammerKind::SparseJam, 1), ctx, 100, rng);
    std::set<int> cols = nonzero_columns(w);
    CHECK(cols.size() == 10);
    RandomStream rng2(2, 4);
    ComplexMatrix w2 = gen_jammer_waveform(
        JammerSpec::make(JammerKind::SparseJam, 1), ctx, 100, rng2);
    CHECK(nonzero_columns(w2) != cols);  // support is stream-dependent
  }
  SUBCASE("multidata is the wide data jammer") {
    RandomStream rng(2, 5);
    ComplexMatrix w = gen_jammer_waveform(
        JammerSpec::make(JammerKind::MultiData, 10), ctx, 100, rng);
    REQUIRE(w.rows() == 10);
    std::set<int> expect(ctx.data_idx.begin(), ctx.data_idx.end());
    CHECK(nonzero_columns(w) == expect);
  }
  SUBCASE("repeat jammer replays the legitimate frame one sample late") {
    RandomStream rng(2, 6);
    ComplexMatrix w = gen_jammer_waveform(
        JammerSpec::make(JammerKind::Repeat, 10), ctx, 100, rng);
    REQUIRE(w.rows() == 10);
    CHECK(w.col(0).norm() == 0.0);
    for (int k = 1; k < 100; ++k)
      CHECK((w.col(k) - x.topRows(10).col(k - 1)).norm() == 0.0);
  }
}

TEST_CASE("dynamic beamformer structure") {
  RandomStream rng(3, 0);
  auto seq = dynamic_beam_sequence(10, 8, 0.95, 100, rng);
  REQUIRE(seq.size() == 100);
  for (const ComplexMatrix& a : seq) {
    int live_rows = 0;
    for (Eigen::Index r = 0; r < a.rows(); ++r)
      if (a.row(r).norm() > 0.0) ++live_rows;
    CHECK(live_rows == 8);
  }

  SUBCASE("per-column support of the waveform obeys the row cap") {
    SystemConfig cfg;
    RandomStream xrng(3, 1);
    ComplexMatrix x = gaussian_matrix(16, 100, 1.0, xrng);
    JammerContext ctx = make_context(cfg, &x, nullptr);
    RandomStream wrng(3, 2);
    ComplexMatrix w = gen_jammer_waveform(
        JammerSpec::make(JammerKind::DynamicBeam, 10), ctx, 100, wrng);
    for (Eigen::Index k = 0; k < 100; ++k) {
      int live = 0;
      for (Eigen::Index r = 0; r < 10; ++r)
        if (w(r, k) != Complex(0.0, 0.0)) ++live;
      CHECK(live <= 8);
    }
  }

  SUBCASE("redraw count matches the hold probability") {
    // redraws per frame ~ Binomial(L-1, 0.05); mean over 500 frames must sit
    // within 3 sigma of 1 + 4.95
    RandomStream r2(3, 3);
    double total_distinct = 0.0;
    const int frames = 500;
    for (int f = 0; f < frames; ++f) {
      auto s = dynamic_beam_sequence(10, 8, 0.95, 100, r2);
      int distinct = 1;
      for (std::size_t k = 1; k < s.size(); ++k)
        if (s[k] != s[k - 1]) ++distinct;
      total_distinct += distinct;
    }
    const double mean = total_distinct / frames;
    const double expect = 1.0 + 99.0 * 0.05;
    const double sigma = std::sqrt(99.0 * 0.05 * 0.95 / frames);
    CHECK(std::abs(mean - expect) <= 3.0 * sigma);
  }

  SUBCASE("row cap wider than the array uses every antenna") {
    RandomStream r3(3, 4);
    auto s = dynamic_beam_sequence(4, 8, 0.95, 10, r3);
    for (const ComplexMatrix& a : s) {
      int live = 0;
      for (Eigen::Index r = 0; r < 4; ++r)
        if (a.row(r).norm() > 0.0) ++live;
      CHECK(live == 4);
    }
  }
}

TEST_CASE("missing context is rejected") {
  SystemConfig cfg;
  JammerContext empty;
  RandomStream rng(4, 0);
  CHECK_THROWS_AS(gen_jammer_waveform(JammerSpec::make(JammerKind::DataJam, 1),
                                      empty, 100, rng),
                  MissingContext);
  CHECK_THROWS_AS(gen_jammer_waveform(
                      JammerSpec::make(JammerKind::PilotJam, 1), empty, 100, rng),
                  MissingContext);
  CHECK_THROWS_AS(gen_jammer_waveform(JammerSpec::make(JammerKind::Repeat, 10),
                                      empty, 100, rng),
                  MissingContext);
  CHECK_THROWS_AS(gen_jammer_waveform(
                      JammerSpec::make(JammerKind::EigenBeam, 10), empty, 100, rng),
                  MissingContext);

  SUBCASE("repeat jammer cannot outnumber the replayed streams") {
    ComplexMatrix x = gaussian_matrix(4, 100, 1.0, rng);
    JammerContext ctx;
    ctx.transmitted = &x;
    CHECK_THROWS_AS(gen_jammer_waveform(
                        JammerSpec::make(JammerKind::Repeat, 10), ctx, 100, rng),
                    InvalidParameter);
  }
}

// The defining property of a barrage jammer: the temporal extension (right
// singular vectors of J*W) is uniformly distributed on the unit sphere, so
// the first-coordinate projection statistic follows Beta(1, L-1). Kinds
// flagged is_barrage satisfy it natively; the pilot jammer must not.
TEST_CASE("native temporal uniformity holds exactly for barrage kinds") {
  SystemConfig cfg;
  const double b = 99.0;  // L - 1
  auto cdf = [b](double x) { return beta1_cdf(x, b); };
  const int draws = 800;

  auto projection_samples = [&](JammerKind kind, int antennas,
                                std::uint64_t stream) {
    std::vector<double> out;
    RandomStream rng(71, stream);
    for (int i = 0; i < draws; ++i) {
      ComplexMatrix j = gaussian_matrix(64, antennas, 1.0, rng);
      ComplexMatrix x = gaussian_matrix(16, 100, 1.0, rng);
      JammerContext ctx = make_context(cfg, &x, &j);
      ComplexMatrix w =
          gen_jammer_waveform(JammerSpec::make(kind, antennas), ctx, 100, rng);
      CompactSvd f = compact_svd(j * w);
      out.push_back(std::norm(f.right(0, 0)));
    }
    return out;
  };

  SUBCASE("single-antenna barrage passes") {
    auto ks = ks_test(projection_samples(JammerKind::Barrage, 1, 0), cdf);
    CHECK(ks.p_value > 0.01);
  }
  SUBCASE("eigenbeam barrage passes") {
    auto ks = ks_test(projection_samples(JammerKind::EigenBeam, 10, 1), cdf);
    CHECK(ks.p_value > 0.01);
  }
  SUBCASE("pilot jammer fails: support pinned to 16 fixed samples") {
    auto ks = ks_test(projection_samples(JammerKind::PilotJam, 1, 2), cdf);
    CHECK(ks.p_value < 0.01);
  }
}

}  // TEST_SUITE
