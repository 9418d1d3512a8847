#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "papr/types.hpp"

namespace papr {

struct GaussianInteger {
  std::int64_t re = 0;
  std::int64_t im = 0;

  bool operator==(const GaussianInteger&) const = default;
};

// Lattice perturbation vector b; all-zeros means no injection.
using TiVector = std::vector<GaussianInteger>;

// Gray-coded square QAM. Labeling: index m splits into (m / sqrt(M),
// m % sqrt(M)); each half is a reflected Gray label of the per-axis
// amplitude level, so index 0 is the (-,-) corner point.
class QamConstellation {
 public:
  // Builds an M-ary square constellation with average energy es.
  explicit QamConstellation(int order, Scalar avg_energy = 1.0);

  int order() const { return order_; }
  int side() const { return side_; }
  Scalar min_distance() const { return d_; }
  Scalar avg_energy() const { return es_; }
  Complex point(int index) const { return points_[index]; }
  const std::vector<Complex>& points() const { return points_; }

 private:
  int order_;
  int side_;
  Scalar d_;
  Scalar es_;
  std::vector<Complex> points_;
};

// delta = d * sqrt(M); guarantees every constellation point lies strictly
// inside the fundamental modulo cell (-delta/2, delta/2)^2.
Scalar lattice_step(const QamConstellation& c);

// Uniform i.i.d. symbols for Monte Carlo runs.
CVec map_symbols(std::mt19937_64& rng, const QamConstellation& c, Index n);
CVec map_symbols(const std::vector<int>& indices, const QamConstellation& c);

// Per-component modulo reduction into [-delta/2, delta/2); removes the
// injected delta-scaled Gaussian integer at the receiver.
Complex modulo_recover(Complex value, Scalar delta);

// Nearest constellation point; ties break toward the lower index.
int detect(Complex value, const QamConstellation& c);

}  // namespace papr
