#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "papr/constellation.hpp"
#include "papr/ti.hpp"
#include "papr/transform.hpp"
#include "papr/types.hpp"

namespace papr {

// Memoryless PA model: clips magnitude at clip_amplitude, preserves phase.
struct SoftLimiter {
  Scalar clip_amplitude;  // eta'
};

CVec soft_limit(const CVec& x, const SoftLimiter& limiter);

// Circularly-symmetric complex Gaussian noise, variance noise_power per
// component. Applied in the frequency domain (y = A*xbar + w).
CVec add_awgn(const CVec& x, Scalar noise_power, std::mt19937_64& rng);

// Per-subcarrier modulo recovery followed by nearest-symbol detection.
// y must already carry the 1/L receiver scaling.
std::vector<int> receive(const CVec& y, Scalar delta,
                         const QamConstellation& c);

struct SerPoint {
  Scalar esn0_db = 0.0;
  std::uint64_t symbol_errors = 0;
  std::uint64_t symbols = 0;

  Scalar ser() const {
    return symbols == 0 ? 0.0
                        : static_cast<Scalar>(symbol_errors) /
                              static_cast<Scalar>(symbols);
  }
};

struct SerConfig {
  TiConfig ti;
  bool use_ti = false;
  Scalar limiter_clip_db = 4.5;  // eta' in dB above sqrt(E_s); <0 disables
  bool limiter_enabled = true;
  // Linear average-transmit-power increase factor used to normalize E_s;
  // 1.0 means no normalization. Measured by calibrate_power_increase.
  Scalar power_increase_factor = 1.0;
};

// 10*log10(E[|s + delta b|^2] / E[|s|^2]) over an ensemble of blocks. Also
// usable as the calibration pass for SER normalization (returns the linear
// factor through *linear_factor when non-null).
Scalar power_increase_db(const TransformPlan& plan, const QamConstellation& c,
                         const TiConfig& cfg, Index n_blocks,
                         std::uint64_t master_seed,
                         Scalar* linear_factor = nullptr);

// Critically-sampled receiver transform matching tx_plan: the receiver
// samples the transmitted waveform at symbol rate (every Lth sample), so
// its time chirp rate is alpha1 * L^2 on the shorter grid. Out-of-band
// clipping noise aliases in-band, as it would through a symbol-rate ADC.
TransformPlan receiver_plan(const TransformPlan& tx_plan);

// Full chain for one block: map -> TI -> power normalization -> idaft ->
// soft limiter -> symbol-rate sampling -> daft -> AWGN -> modulo + detect.
// Returns the error count for this block.
std::uint64_t run_ser_block(const TransformPlan& plan,
                            const TransformPlan& rx_plan,
                            const QamConstellation& c, const SerConfig& cfg,
                            Scalar esn0_db, std::mt19937_64& rng);

// SER over a grid of Es/N0 points, n_blocks blocks per point. Per-block
// seeds derive from (master_seed, grid index, block index).
std::vector<SerPoint> run_ser_curve(const TransformPlan& plan,
                                    const QamConstellation& c,
                                    const SerConfig& cfg,
                                    const std::vector<Scalar>& esn0_grid_db,
                                    Index n_blocks, std::uint64_t master_seed,
                                    int n_workers = 1);

}  // namespace papr
