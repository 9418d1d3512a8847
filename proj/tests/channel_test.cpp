#include <doctest.h>

#include <cmath>
#include <random>

#include "papr/channel.hpp"
#include "papr/rng.hpp"

using namespace papr;

namespace {

CVec random_cvec(Index n, std::mt19937_64& rng) {
  std::normal_distribution<Scalar> gauss(0.0, 1.0);
  CVec v(n);
  for (Index i = 0; i < n; ++i) v[i] = Complex(gauss(rng), gauss(rng));
  return v;
}

// Closed-form square-QAM SER over AWGN at symbol SNR = Es/N0, for a
// receiver that always applies the modulo fold: edge levels wrap to the
// opposite side of the cell, so every PAM level sees two error neighbors.
Scalar qam_ser_modulo(int order, Scalar esn0_linear) {
  const Scalar arg = std::sqrt(3.0 * esn0_linear / Scalar(order - 1));
  const Scalar q = 0.5 * std::erfc(arg / std::sqrt(2.0));
  const Scalar p = 2.0 * q;
  return 1.0 - (1.0 - p) * (1.0 - p);
}

}  // namespace

TEST_CASE("soft limiter") {
  std::mt19937_64 rng(3);
  const CVec x = random_cvec(256, rng);
  const SoftLimiter lim{1.0};
  const CVec y = soft_limit(x, lim);
  for (Index i = 0; i < x.size(); ++i) {
    CHECK(std::abs(y[i]) ==
          doctest::Approx(std::min(std::abs(x[i]), 1.0)).epsilon(1e-12));
    if (std::abs(x[i]) > 0.0)
      CHECK(std::abs(std::arg(y[i]) - std::arg(x[i])) < 1e-12);
    CHECK(std::abs(y[i]) <= std::abs(x[i]) + 1e-15);
  }
  // idempotent (to one rescale rounding)
  const CVec z = soft_limit(y, lim);
  CHECK((z - y).cwiseAbs().maxCoeff() < 1e-14);

  // below-threshold input is untouched
  const SoftLimiter loose{100.0};
  CHECK((soft_limit(x, loose) - x).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("awgn statistics") {
  std::mt19937_64 rng(5);
  const CVec zero = CVec::Zero(100000);
  CHECK((add_awgn(zero, 0.0, rng) - zero).cwiseAbs().maxCoeff() == 0.0);

  const Scalar n0 = 0.37;
  const CVec w = add_awgn(zero, n0, rng);
  Scalar var = 0.0, var_re = 0.0, var_im = 0.0;
  for (Index i = 0; i < w.size(); ++i) {
    var += std::norm(w[i]);
    var_re += w[i].real() * w[i].real();
    var_im += w[i].imag() * w[i].imag();
  }
  const Scalar n = Scalar(w.size());
  CHECK(var / n == doctest::Approx(n0).epsilon(0.02));
  CHECK(var_re / n == doctest::Approx(n0 / 2.0).epsilon(0.03));
  CHECK(var_im / n == doctest::Approx(n0 / 2.0).epsilon(0.03));
}

TEST_CASE("noiseless loopback recovers symbols through arbitrary injections") {
  const TransformPlan plan = make_plan(64, 4, {1.0 / 128.0, 0.0});
  const QamConstellation q64(64);
  const Scalar delta = lattice_step(q64);
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> sym(0, 63);
  std::uniform_int_distribution<int> gi(-5, 5);

  for (int trial = 0; trial < 20; ++trial) {
    std::vector<int> tx(64);
    CVec st(64);
    for (int i = 0; i < 64; ++i) {
      tx[i] = sym(rng);
      st[i] = q64.point(tx[i]) +
              delta * Complex(Scalar(gi(rng)), Scalar(gi(rng)));
    }
    const CVec y =
        daft(plan, idaft(plan, st)) / Scalar(plan.oversampling());
    const std::vector<int> rx = receive(y, delta, q64);
    CHECK(rx == tx);
  }
}

TEST_CASE("power increase is 0 dB without injection") {
  const TransformPlan plan = make_plan(32, 4);
  const QamConstellation q64(64);
  TiConfig cfg;
  cfg.max_iters = 1;
  cfg.beta = 4.0;
  // a config that never finds a valid candidate is not constructible, so
  // check the b = 0 identity directly instead
  std::mt19937_64 rng(11);
  const CVec s = map_symbols(rng, q64, 32);
  const CVec same = apply_ti(s, lattice_step(q64), TiVector(32));
  CHECK((same - s).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("ser matches the analytic QAM curve without limiter or TI" *
          doctest::timeout(300)) {
  const TransformPlan plan = make_plan(64, 4);
  const QamConstellation q64(64);
  SerConfig cfg;
  cfg.use_ti = false;
  cfg.limiter_enabled = false;

  const std::vector<Scalar> grid = {14.0, 18.0};
  const auto points = run_ser_curve(plan, q64, cfg, grid, 3000, 99);
  for (const SerPoint& p : points) {
    const Scalar expect = qam_ser_modulo(64, std::pow(10.0, p.esn0_db / 10.0));
    const Scalar se =
        std::sqrt(expect * (1.0 - expect) / Scalar(p.symbols));
    CHECK(std::abs(p.ser() - expect) < 5.0 * se + 0.1 * expect);
  }
}

TEST_CASE("ser curve is deterministic across worker counts") {
  const TransformPlan plan = make_plan(32, 4);
  const QamConstellation q16(16);
  SerConfig cfg;
  cfg.limiter_enabled = true;
  cfg.limiter_clip_db = 4.5;

  const std::vector<Scalar> grid = {10.0, 20.0};
  const auto a = run_ser_curve(plan, q16, cfg, grid, 200, 7, 1);
  const auto b = run_ser_curve(plan, q16, cfg, grid, 200, 7, 4);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].symbol_errors == b[i].symbol_errors);
    CHECK(a[i].symbols == b[i].symbols);
  }
}

TEST_CASE("huge noise drives SER to the guessing limit") {
  const TransformPlan plan = make_plan(32, 4);
  const QamConstellation q16(16);
  SerConfig cfg;
  cfg.limiter_enabled = false;
  const auto points = run_ser_curve(plan, q16, cfg, {-60.0}, 300, 13);
  CHECK(points[0].ser() == doctest::Approx(15.0 / 16.0).epsilon(0.03));
}
