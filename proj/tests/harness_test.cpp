#include <doctest.h>

#include "papr/harness.hpp"

using namespace papr;

TEST_CASE("config round trip") {
  ExperimentConfig cfg;
  cfg.waveform = Waveform::AFDM;
  cfg.alpha1 = 1.0 / 512.0;
  cfg.n_subcarriers = 128;
  cfg.scheme = SchemeChoice::FCR;
  cfg.n_filtered = 24;
  cfg.esn0_grid_db = {0.0, 7.5, 30.0};
  cfg.master_seed = 0xDEADBEEFull;
  cfg.out_path = "out.csv";

  const ExperimentConfig back = parse_config(emit_config(cfg));
  CHECK(back == cfg);
}

TEST_CASE("config errors name the offending field") {
  CHECK_THROWS_WITH_AS(parse_config("[system]\nn_subcarriers = 1\n"),
                       doctest::Contains("n_subcarriers"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_config("[system]\nbogus_key = 3\n"),
                       doctest::Contains("bogus_key"), std::invalid_argument);
  CHECK_THROWS(parse_config("[nope]\n"));
  CHECK_THROWS_WITH_AS(parse_config("[ti]\nscheme = maybe\n"),
                       doctest::Contains("scheme"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_config("[system]\nalpha1 = 2.0\n"),
                       doctest::Contains("alpha1"), std::invalid_argument);
}

TEST_CASE("comments and blank lines are ignored") {
  const ExperimentConfig cfg = parse_config(
      "# experiment\n"
      "[system]\n"
      "n_subcarriers = 64   # small\n"
      "\n"
      "[run]\n"
      "n_blocks = 5\n");
  CHECK(cfg.n_subcarriers == 64);
  CHECK(cfg.n_blocks == 5);
}

TEST_CASE("ccdf command is deterministic across worker counts") {
  ExperimentConfig cfg;
  cfg.n_subcarriers = 64;
  cfg.oversampling = 4;
  cfg.scheme = SchemeChoice::CR;
  cfg.max_iters = 5;
  cfg.n_peaks = 8;
  cfg.dfs_enabled = true;
  cfg.n_blocks = 64;
  cfg.master_seed = 12345;

  const std::string one = cmd_ccdf(cfg, 1);
  const std::string eight = cmd_ccdf(cfg, 8);
  CHECK(one == eight);
  CHECK(one.substr(0, 17) == "threshold_db,ccdf");
}

TEST_CASE("covcheck rows cover lags 1..L") {
  ExperimentConfig cfg;
  cfg.n_subcarriers = 64;
  cfg.oversampling = 4;
  cfg.n_blocks = 200;
  const auto rows = run_covcheck(cfg);
  REQUIRE(rows.size() == 4);
  for (int d = 1; d <= 4; ++d) CHECK(rows[d - 1].delta_n == d);
  // lag L: the numerator sine vanishes
  CHECK(rows[3].closed_form < 1e-30);
  CHECK(rows[0].closed_form > 0.0);
}

TEST_CASE("complexity rows expose the counter law") {
  ExperimentConfig cfg;
  cfg.n_subcarriers = 64;
  cfg.oversampling = 4;
  cfg.scheme = SchemeChoice::FCR;
  cfg.max_iters = 5;
  cfg.n_peaks = 4;
  cfg.n_filtered = 8;
  cfg.n_blocks = 3;
  const auto rows = run_complexity(cfg);
  REQUIRE(rows.size() == 3);
  for (const auto& r : rows) {
    CHECK(r.per_iter_nwcs == 4u * 8u * 4u);
    CHECK(r.total_nwcs % r.per_iter_nwcs == 0);
  }
}

TEST_CASE("csv emission shapes") {
  ExperimentConfig cfg;
  cfg.n_subcarriers = 32;
  cfg.oversampling = 2;
  cfg.n_blocks = 10;
  cfg.n_calib_blocks = 5;
  cfg.esn0_grid_db = {10.0};

  const std::string ser = cmd_ser(cfg, 1);
  CHECK(ser.substr(0, 19) == "esn0_db,ser,symbols");
  const std::string power = cmd_power(cfg, 1);
  CHECK(power == "scheme,power_increase_db\nnone,0\n");
  const std::string cov = cmd_covcheck(cfg, 1);
  CHECK(cov.substr(0, cov.find('\n')) ==
        "delta_n,empirical_cov,closed_form,rel_error");
}
