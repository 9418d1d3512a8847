#pragma once

#include <vector>

#include "papr/types.hpp"

namespace papr {

// Local peaks of a time signal, sorted by descending magnitude (ties by
// ascending index). Magnitude and angle are cached per entry.
struct PeakSet {
  std::vector<Index> indices;
  std::vector<Scalar> magnitudes;
  std::vector<Scalar> angles;

  Index size() const { return static_cast<Index>(indices.size()); }
};

// Samples with |x_n| >= max(|x_{n-1}|, |x_{n+1}|) under cyclic indexing.
// Plateaus produce multiple adjacent peaks (>= semantics kept literal).
PeakSet find_local_peaks(const CVec& x);

// First min(n_p, |P|) entries.
PeakSet top_peaks(const PeakSet& p, Index n_p);

Scalar peak_power(const CVec& x);
Scalar papr_db(const CVec& x, Scalar avg_power_ref);

// Empirical CCDF of PAPR on a fixed dB grid. Counts are integers, so
// accumulation order never changes a query result.
class CcdfAccumulator {
 public:
  CcdfAccumulator(Scalar min_db = 0.0, Scalar max_db = 14.0,
                  Scalar step_db = 0.1);

  void add(Scalar papr_db_value);
  void merge(const CcdfAccumulator& other);

  Index n_thresholds() const { return static_cast<Index>(grid_.size()); }
  Scalar threshold_db(Index i) const { return grid_[i]; }
  std::uint64_t exceed_count(Index i) const { return counts_[i]; }
  std::uint64_t total() const { return total_; }
  Scalar ccdf_at(Index i) const;

  // Smallest threshold with empirical P(PAPR > g) <= probability, linearly
  // interpolated between grid points. low_confidence is set when fewer than
  // 10/probability blocks have been accumulated.
  Scalar query(Scalar probability, bool* low_confidence = nullptr) const;

 private:
  std::vector<Scalar> grid_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

// Cov(|x_n|^2, |x_{n+dn}|^2) = sigma^4 |sin(pi dn/L) / (N sin(pi dn/(LN)))|^2
// for dn not a multiple of LN.
Scalar power_covariance_closed_form(std::int64_t delta_n, Index l, Index n,
                                    Scalar sigma_sq);

}  // namespace papr
