#include "papr/constellation.hpp"

#include <cmath>
#include <stdexcept>

namespace papr {

namespace {

// Inverse of the binary reflected Gray code.
int gray_decode(int g) {
  int b = 0;
  for (; g != 0; g >>= 1) b ^= g;
  return b;
}

}  // namespace

QamConstellation::QamConstellation(int order, Scalar avg_energy)
    : order_(order), es_(avg_energy) {
  if (order < 4) throw std::invalid_argument("QAM order must be >= 4");
  side_ = static_cast<int>(std::lround(std::sqrt(static_cast<Scalar>(order))));
  if (side_ * side_ != order)
    throw std::invalid_argument("QAM order must be a perfect square");
  // E_s = d^2 (M-1) / 6
  d_ = std::sqrt(6.0 * es_ / static_cast<Scalar>(order - 1));

  points_.resize(order_);
  for (int m = 0; m < order_; ++m) {
    const int gi = m / side_;
    const int gq = m % side_;
    const int li = gray_decode(gi);
    const int lq = gray_decode(gq);
    const Scalar re = (2.0 * li - (side_ - 1)) * d_ / 2.0;
    const Scalar im = (2.0 * lq - (side_ - 1)) * d_ / 2.0;
    points_[m] = {re, im};
  }
}

Scalar lattice_step(const QamConstellation& c) {
  return c.min_distance() * std::sqrt(static_cast<Scalar>(c.order()));
}

CVec map_symbols(std::mt19937_64& rng, const QamConstellation& c, Index n) {
  std::uniform_int_distribution<int> pick(0, c.order() - 1);
  CVec s(n);
  for (Index i = 0; i < n; ++i) s[i] = c.point(pick(rng));
  return s;
}

CVec map_symbols(const std::vector<int>& indices, const QamConstellation& c) {
  CVec s(static_cast<Index>(indices.size()));
  for (Index i = 0; i < s.size(); ++i) s[i] = c.point(indices[i]);
  return s;
}

Complex modulo_recover(Complex value, Scalar delta) {
  if (delta <= 0.0) throw std::invalid_argument("delta must be positive");
  const Scalar re = value.real() - delta * std::floor(value.real() / delta + 0.5);
  const Scalar im = value.imag() - delta * std::floor(value.imag() / delta + 0.5);
  return {re, im};
}

int detect(Complex value, const QamConstellation& c) {
  int best = 0;
  Scalar best_d2 = std::norm(value - c.point(0));
  for (int m = 1; m < c.order(); ++m) {
    const Scalar d2 = std::norm(value - c.point(m));
    if (d2 < best_d2) {
      best_d2 = d2;
      best = m;
    }
  }
  return best;
}

}  // namespace papr
