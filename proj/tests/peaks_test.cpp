#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "papr/constellation.hpp"
#include "papr/peaks.hpp"
#include "papr/transform.hpp"

using namespace papr;

namespace {

CVec random_cvec(Index n, std::mt19937_64& rng) {
  std::normal_distribution<Scalar> gauss(0.0, 1.0);
  CVec v(n);
  for (Index i = 0; i < n; ++i) v[i] = Complex(gauss(rng), gauss(rng));
  return v;
}

// Literal per-index application of the local-peak definition.
std::vector<Index> brute_force_peaks(const CVec& x) {
  const Index ln = x.size();
  std::vector<Index> out;
  for (Index i = 0; i < ln; ++i) {
    const Scalar m = std::abs(x[i]);
    if (m >= std::abs(x[(i + ln - 1) % ln]) && m >= std::abs(x[(i + 1) % ln]))
      out.push_back(i);
  }
  return out;
}

}  // namespace

TEST_CASE("constant-magnitude signal: every index is a peak") {
  CVec x = CVec::Constant(12, Complex(0.3, -0.4));
  const PeakSet p = find_local_peaks(x);
  CHECK(p.size() == 12);
  // ties broken by ascending index
  for (Index i = 0; i < 12; ++i) CHECK(p.indices[i] == i);
}

TEST_CASE("impulse on a zero signal") {
  CVec x = CVec::Zero(16);
  x[5] = Complex(2.0, 0.0);
  const PeakSet p = find_local_peaks(x);
  // 5 plus all zero samples except the neighbors 4 and 6
  CHECK(p.size() == 14);
  CHECK(p.indices[0] == 5);
  CHECK(std::find(p.indices.begin(), p.indices.end(), 4) == p.indices.end());
  CHECK(std::find(p.indices.begin(), p.indices.end(), 6) == p.indices.end());
}

TEST_CASE("find_local_peaks matches brute force and is sorted") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const CVec x = random_cvec(256, rng);
    const PeakSet p = find_local_peaks(x);
    std::vector<Index> expect = brute_force_peaks(x);
    std::vector<Index> got = p.indices;
    std::sort(got.begin(), got.end());
    CHECK(got == expect);
    for (Index i = 0; i + 1 < p.size(); ++i)
      CHECK(p.magnitudes[i] >= p.magnitudes[i + 1]);
    // the global argmax is always present
    Index argmax = 0;
    x.cwiseAbs().maxCoeff(&argmax);
    CHECK(p.indices[0] == argmax);
  }
}

TEST_CASE("peak set is invariant under global phase rotation") {
  std::mt19937_64 rng(37);
  const CVec x = random_cvec(128, rng);
  const CVec y = x * Complex(std::cos(1.1), std::sin(1.1));
  CHECK(find_local_peaks(x).indices == find_local_peaks(y).indices);
}

TEST_CASE("top_peaks") {
  std::mt19937_64 rng(41);
  const CVec x = random_cvec(256, rng);
  const PeakSet p = find_local_peaks(x);
  CHECK(top_peaks(p, p.size() + 10).indices == p.indices);
  const PeakSet one = top_peaks(p, 1);
  CHECK(one.size() == 1);
  CHECK(one.indices[0] == p.indices[0]);
  const PeakSet sixteen = top_peaks(p, 16);
  CHECK(sixteen.size() == std::min<Index>(16, p.size()));
  for (Index i = 0; i < sixteen.size(); ++i)
    CHECK(sixteen.indices[i] == p.indices[i]);
}

TEST_CASE("papr_db basics") {
  const TransformPlan plan = make_plan(16, 4);
  CVec s = CVec::Zero(16);
  s[3] = 1.0;
  const CVec x = idaft(plan, s);
  const Scalar avg = x.squaredNorm() / Scalar(x.size());
  CHECK(papr_db(x, avg) == doctest::Approx(0.0).epsilon(1e-9));

  std::mt19937_64 rng(43);
  const CVec y = random_cvec(64, rng);
  const Scalar base = papr_db(y, 1.0);
  CHECK(papr_db(CVec(3.0 * y), 1.0) ==
        doctest::Approx(base + 20.0 * std::log10(3.0)).epsilon(1e-9));
  CHECK_THROWS(papr_db(y, 0.0));
}

TEST_CASE("ccdf accumulator") {
  CcdfAccumulator acc;
  for (int i = 0; i < 100; ++i) acc.add(7.25);
  bool low = true;
  CHECK(acc.query(0.5, &low) == doctest::Approx(7.25).epsilon(1e-2));
  CHECK(!low);
  acc.query(1e-4, &low);
  CHECK(low);

  // counts non-increasing along the grid
  std::mt19937_64 rng(47);
  std::normal_distribution<Scalar> g(8.0, 2.0);
  CcdfAccumulator acc2;
  for (int i = 0; i < 1000; ++i) acc2.add(g(rng));
  for (Index i = 0; i + 1 < acc2.n_thresholds(); ++i)
    CHECK(acc2.exceed_count(i) >= acc2.exceed_count(i + 1));

  // merge = accumulate in any order
  CcdfAccumulator a, b, whole;
  std::vector<Scalar> vals;
  for (int i = 0; i < 500; ++i) vals.push_back(g(rng));
  for (std::size_t i = 0; i < vals.size(); ++i) {
    whole.add(vals[i]);
    (i % 2 ? a : b).add(vals[i]);
  }
  a.merge(b);
  CHECK(a.query(0.1) == whole.query(0.1));
  CHECK(a.total() == whole.total());
}

TEST_CASE("covariance closed form") {
  // numerator sine vanishes at delta_n = L
  CHECK(power_covariance_closed_form(8, 8, 256, 1.0) ==
        doctest::Approx(0.0).epsilon(1e-20));
  // large-N limit: sigma^4 sinc^2(1/8)
  const Scalar sinc = std::sin(kPi / 8.0) / (kPi / 8.0);
  CHECK(power_covariance_closed_form(1, 8, 1 << 20, 1.0) ==
        doctest::Approx(sinc * sinc).epsilon(1e-4));
  CHECK(sinc == doctest::Approx(0.9745).epsilon(1e-3));
  CHECK(sinc * sinc == doctest::Approx(0.9496).epsilon(1e-3));
  CHECK_THROWS(power_covariance_closed_form(0, 8, 256, 1.0));
  CHECK_THROWS(power_covariance_closed_form(2048, 8, 256, 1.0));
}

TEST_CASE("Monte-Carlo covariance matches the closed form" *
          doctest::timeout(120)) {
  const Index n = 256, l = 8;
  const TransformPlan plan = make_plan(n, l);
  const QamConstellation q64(64);
  std::mt19937_64 rng(53);
  const int blocks = 3000;
  const Index ln = n * l;

  Scalar sum_cross = 0.0, sum_p = 0.0;
  for (int blk = 0; blk < blocks; ++blk) {
    const CVec x = idaft(plan, map_symbols(rng, q64, n));
    for (Index i = 0; i < ln; ++i) {
      const Scalar p0 = std::norm(x[i]);
      sum_p += p0;
      sum_cross += p0 * std::norm(x[(i + 1) % ln]);
    }
  }
  const Scalar m1 = sum_p / (Scalar(blocks) * ln);
  const Scalar cov = sum_cross / (Scalar(blocks) * ln) - m1 * m1;
  const Scalar expect = power_covariance_closed_form(1, l, n, 1.0);
  CHECK(cov == doctest::Approx(expect).epsilon(0.05));
}
