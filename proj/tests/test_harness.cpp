#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mash/errors.hpp"
#include "mash/harness.hpp"
#include "mash/jammers.hpp"

using namespace mash;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const VerifyCheck& named_check(const VerifyReport& report,
                               const std::string& name) {
  for (const auto& c : report.checks)
    if (c.name == name) return c;
  FAIL("missing check: ", name);
  static VerifyCheck dummy;
  return dummy;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("receiver registry exposes the five detection paths") {
  REQUIRE(receiver_registry().size() == 5);
  for (const char* name :
       {"mash-p", "mash-l", "baseline-lmmse", "unmitigated", "jammerless"})
    CHECK(find_receiver(name) != nullptr);
  CHECK(find_receiver("nope") == nullptr);

  CHECK(find_receiver("mash-p")->mash_layout);
  CHECK(find_receiver("mash-l")->mash_layout);
  CHECK_FALSE(find_receiver("baseline-lmmse")->mash_layout);
  CHECK_FALSE(find_receiver("unmitigated")->mash_layout);
  CHECK(find_receiver("unmitigated")->jammer_active);
  CHECK_FALSE(find_receiver("jammerless")->jammer_active);
}

TEST_CASE("trials are deterministic in the seed and trial index") {
  SystemConfig cfg;
  cfg.master_seed = 9;
  JammerSpec jam = JammerSpec::make(JammerKind::Barrage, 1);
  const ReceiverSpec& rx = *find_receiver("mash-l");

  TrialResult a = run_trial(cfg, jam, rx, 4);
  TrialResult b = run_trial(cfg, jam, rx, 4);
  CHECK(a.err_num == b.err_num);
  CHECK(a.bit_errors == b.bit_errors);
  CHECK(a.bits == b.bits);

  TrialResult c = run_trial(cfg, jam, rx, 5);
  CHECK(a.err_num != c.err_num);
}

TEST_CASE("jammerless trial at infinite snr recovers the payload exactly") {
  SystemConfig cfg;
  cfg.snr_infinite = true;
  JammerSpec jam = JammerSpec::make(JammerKind::Barrage, 1);
  TrialResult res = run_trial(cfg, jam, *find_receiver("jammerless"), 0);
  REQUIRE_FALSE(res.failed);
  CHECK(res.bit_errors == 0);
  CHECK(res.bits == 2 * 16 * 68);
  CHECK(res.err_num / res.sig_den < 1e-8);
  CHECK(res.est_rank == -1);
}

TEST_CASE("projection receiver neutralizes a strong barrage in a full trial") {
  SystemConfig cfg;
  cfg.snr_db = 20.0;
  cfg.master_seed = 21;
  JammerSpec jam = JammerSpec::make(JammerKind::Barrage, 1);

  TrialResult mp = run_trial(cfg, jam, *find_receiver("mash-p"), 0);
  REQUIRE_FALSE(mp.failed);
  CHECK(mp.est_rank == 1);
  CHECK(mp.bit_errors == 0);

  TrialResult um = run_trial(cfg, jam, *find_receiver("unmitigated"), 0);
  REQUIRE_FALSE(um.failed);
  CHECK(um.bit_errors > 30);  // 30 dB jammer, no mitigation
}

TEST_CASE("mitigating receiver beats the unmitigated one on aggregate error") {
  SystemConfig cfg;
  cfg.master_seed = 33;
  JammerSpec jam = JammerSpec::make(JammerKind::Barrage, 1);

  std::vector<TrialResult> mit, unmit;
  for (std::uint64_t k = 0; k < 5; ++k) {
    mit.push_back(run_trial(cfg, jam, *find_receiver("mash-l"), k));
    unmit.push_back(run_trial(cfg, jam, *find_receiver("unmitigated"), k));
  }
  Aggregate am = aggregate(mit);
  Aggregate au = aggregate(unmit);
  CHECK(am.trial_errors == 0);
  CHECK(au.trial_errors == 0);
  CHECK(am.mer_percent < 35.0);
  CHECK(au.mer_percent > am.mer_percent + 10.0);
  CHECK(au.ber > 10.0 * am.ber);
}

TEST_CASE("aggregate folds trials into ratio metrics") {
  std::vector<TrialResult> trials(3);
  trials[0].err_num = 1.0;
  trials[0].sig_den = 4.0;
  trials[0].bit_errors = 5;
  trials[0].bits = 100;
  trials[0].est_rank = 2;
  trials[1].err_num = 3.0;
  trials[1].sig_den = 4.0;
  trials[1].bit_errors = 0;
  trials[1].bits = 100;
  trials[1].est_rank = 4;
  trials[2].failed = true;
  trials[2].error = "boom";

  Aggregate agg = aggregate(trials);
  CHECK(agg.trials == 3);
  CHECK(agg.trial_errors == 1);
  CHECK(agg.mer_percent == doctest::Approx(50.0));
  CHECK(agg.ber == doctest::Approx(0.025));
  CHECK(agg.mean_est_rank == doctest::Approx(3.0));

  // no rank reports -> sentinel
  trials[0].est_rank = -1;
  trials[1].est_rank = -1;
  CHECK(aggregate(trials).mean_est_rank == -1.0);
}

TEST_CASE("snr axis accepts lists and ranges") {
  CHECK(parse_snr_axis("0:20:5") == std::vector<double>{0, 5, 10, 15, 20});
  CHECK(parse_snr_axis("7") == std::vector<double>{7});
  CHECK(parse_snr_axis("1,2.5,4") == std::vector<double>{1, 2.5, 4});
  CHECK(parse_snr_axis("-6:0:3") == std::vector<double>{-6, -3, 0});
  CHECK_THROWS_AS(parse_snr_axis("5:1:1"), InvalidParameter);
  CHECK_THROWS_AS(parse_snr_axis("0:10:0"), InvalidParameter);
  CHECK_THROWS_AS(parse_snr_axis("abc"), InvalidParameter);
  CHECK_THROWS_AS(parse_snr_axis(""), InvalidParameter);
  CHECK_THROWS_AS(parse_snr_axis("1,,2"), InvalidParameter);
}

TEST_CASE("sweep emits one row per cell and is parallelism-invariant") {
  SystemConfig cfg;
  cfg.master_seed = 5;
  SweepPlan plan;
  plan.jammers = {JammerSpec::make(JammerKind::Barrage, 1)};
  plan.receivers = {"mash-l", "jammerless"};
  plan.snrs = {10.0};
  plan.frames = 3;

  plan.parallelism = 1;
  std::string serial = run_sweep(cfg, plan, "/tmp/mash_sweep_serial.csv");
  plan.parallelism = 2;
  std::string threaded = run_sweep(cfg, plan, "/tmp/mash_sweep_threaded.csv");

  CHECK(serial == threaded);
  CHECK(slurp("/tmp/mash_sweep_serial.csv") ==
        slurp("/tmp/mash_sweep_threaded.csv"));
  CHECK(serial == slurp("/tmp/mash_sweep_serial.csv"));

  std::istringstream lines(serial);
  std::string header;
  std::getline(lines, header);
  CHECK(header ==
        "jammer,receiver,snr_db,frames,ber,mer_percent,mean_est_rank,"
        "trial_errors");
  int rows = 0;
  std::string row;
  while (std::getline(lines, row)) {
    ++rows;
    CHECK(row.rfind("barrage,", 0) == 0);
    CHECK(row.find(",10,3,") != std::string::npos);  // snr and frame count
    CHECK(row.back() == '0');                        // no trial errors
  }
  CHECK(rows == 2);
  std::remove("/tmp/mash_sweep_serial.csv");
  std::remove("/tmp/mash_sweep_threaded.csv");
}

TEST_CASE("sweep aborts when trials keep failing") {
  // the B x B equalizer weight is singular at zero noise: every trial throws
  SystemConfig cfg;
  cfg.snr_infinite = true;
  cfg.lmmse_large_form = true;
  SweepPlan plan;
  plan.jammers = {JammerSpec::make(JammerKind::Barrage, 1)};
  plan.receivers = {"mash-l"};
  plan.snrs = {10.0};
  plan.frames = 2;
  CHECK_THROWS_AS(run_sweep(cfg, plan, ""), SweepAborted);

  plan.receivers = {"no-such-receiver"};
  cfg.snr_infinite = false;
  CHECK_THROWS_AS(run_sweep(cfg, plan, ""), InvalidParameter);
}

TEST_CASE("verify passes on the real codebook") {
  SystemConfig cfg;
  cfg.master_seed = 11;
  VerifyOptions opt;
  opt.transform_checks = 3;
  opt.uniformity_draws = 200;
  opt.duality_checks = 3;
  opt.nulling_checks = 1;

  VerifyReport report = run_verify(cfg, opt);
  REQUIRE(report.checks.size() == 5);
  for (const auto& c : report.checks) {
    CAPTURE(c.name);
    CAPTURE(c.detail);
    CHECK(c.pass);
  }
  CHECK(report.all_pass());
}

TEST_CASE("verify flags a permutation codebook as non-uniform") {
  SystemConfig cfg;
  cfg.master_seed = 12;
  VerifyOptions opt;
  opt.transform_checks = 2;
  opt.uniformity_draws = 200;
  opt.duality_checks = 2;
  opt.nulling_checks = 1;
  opt.codebook_mode = "permutation";
  opt.only_kind = "barrage";

  VerifyReport report = run_verify(cfg, opt);
  // permutations are unitary, so the spectrum-preservation contract holds...
  CHECK(named_check(report, "singular-value-preservation").pass);
  CHECK(named_check(report, "spatial-scope").pass);
  CHECK(named_check(report, "embed-raise-duality").pass);
  // ...but the raised interference is no longer direction-free
  CHECK_FALSE(named_check(report, "temporal-uniformity").pass);
  CHECK_FALSE(report.all_pass());
}

TEST_CASE("verify explains an infeasible redundancy budget") {
  SystemConfig cfg;
  cfg.master_seed = 13;
  VerifyOptions opt;
  opt.transform_checks = 1;
  opt.uniformity_draws = 50;
  opt.duality_checks = 1;
  opt.nulling_checks = 1;
  opt.redundancy_override = 1;    // far below the jammer's 10 antennas
  opt.only_kind = "multidata";

  VerifyReport report = run_verify(cfg, opt);
  const VerifyCheck& nulling = named_check(report, "noiseless-nulling");
  CHECK_FALSE(nulling.pass);
  CHECK(nulling.detail.find("R >= I*") != std::string::npos);

  opt.codebook_mode = "bogus";
  CHECK_THROWS_AS(run_verify(cfg, opt), InvalidParameter);
  opt.codebook_mode = "haar";
  opt.only_kind = "bogus";
  CHECK_THROWS_AS(run_verify(cfg, opt), InvalidParameter);
}

}  // TEST_SUITE
