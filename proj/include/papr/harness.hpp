#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "papr/channel.hpp"
#include "papr/peaks.hpp"
#include "papr/ti.hpp"
#include "papr/transform.hpp"
#include "papr/types.hpp"

namespace papr {

enum class Waveform { OFDM, AFDM };
enum class SchemeChoice { None, CR, FCR };

// One experiment: waveform + system size + TI scheme + Monte Carlo setup.
// Serializes losslessly to a flat key = value file with section headers.
struct ExperimentConfig {
  // [system]
  Waveform waveform = Waveform::OFDM;
  Scalar alpha1 = 0.0;  // AFDM only; ignored for OFDM
  Scalar alpha2 = 0.0;
  Index n_subcarriers = 256;
  Index oversampling = 8;
  int qam_order = 64;

  // [ti]
  SchemeChoice scheme = SchemeChoice::None;
  Scalar beta = 4.0;
  Index max_iters = 20;
  Index n_peaks = 16;
  Index n_filtered = 32;
  Scalar clip_threshold_db = 5.0;
  bool dfs_enabled = true;

  // [channel]
  Scalar limiter_clip_db = 4.5;
  bool limiter_enabled = true;

  // [run]
  Index n_blocks = 10000;
  Index n_calib_blocks = 10000;
  std::vector<Scalar> esn0_grid_db = {0, 5, 10, 15, 20, 25, 30};
  std::uint64_t master_seed = 1;
  std::string out_path;

  bool operator==(const ExperimentConfig&) const = default;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
std::string emit_config(const ExperimentConfig& cfg);

TransformPlan plan_from_config(const ExperimentConfig& cfg);
TiConfig ti_from_config(const ExperimentConfig& cfg);

// --- experiment runners -------------------------------------------------

// PAPR CCDF over n_blocks random blocks. Peak power is normalized by the
// per-sample reference E_s of the original signal, not the TI-inflated
// average. Deterministic for fixed seed and any worker count.
CcdfAccumulator run_ccdf(const ExperimentConfig& cfg, int n_workers = 1);

struct CovRow {
  int delta_n = 0;
  Scalar empirical = 0.0;
  Scalar closed_form = 0.0;
  Scalar rel_error = 0.0;
  Scalar std_error = 0.0;  // standard error of the empirical estimate
};

// Empirical vs closed-form covariance of |x_n|^2 across sample lags 1..L.
std::vector<CovRow> run_covcheck(const ExperimentConfig& cfg);

struct ComplexityRow {
  Index n_subcarriers = 0;
  std::uint64_t per_iter_nwcs = 0;
  std::uint64_t total_nwcs = 0;
  Index iterations = 0;
  Index leaves = 0;
};

std::vector<ComplexityRow> run_complexity(const ExperimentConfig& cfg);

// --- CLI commands: CSV text out ----------------------------------------

std::string cmd_ccdf(const ExperimentConfig& cfg, int n_workers = 1);
std::string cmd_ser(const ExperimentConfig& cfg, int n_workers = 1);
std::string cmd_power(const ExperimentConfig& cfg, int n_workers = 1);
std::string cmd_covcheck(const ExperimentConfig& cfg, int n_workers = 1);
std::string cmd_complexity(const ExperimentConfig& cfg, int n_workers = 1);

}  // namespace papr
