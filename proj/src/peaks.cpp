#include "papr/peaks.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace papr {

PeakSet find_local_peaks(const CVec& x) {
  const Index ln = x.size();
  if (ln == 0) throw std::invalid_argument("find_local_peaks: empty signal");

  std::vector<Scalar> mag(ln);
  for (Index i = 0; i < ln; ++i) mag[i] = std::abs(x[i]);

  std::vector<Index> idx;
  for (Index i = 0; i < ln; ++i) {
    const Scalar left = mag[(i + ln - 1) % ln];
    const Scalar right = mag[(i + 1) % ln];
    if (mag[i] >= left && mag[i] >= right) idx.push_back(i);
  }
  std::sort(idx.begin(), idx.end(), [&](Index a, Index b) {
    if (mag[a] != mag[b]) return mag[a] > mag[b];
    return a < b;
  });

  PeakSet p;
  p.indices = std::move(idx);
  p.magnitudes.reserve(p.indices.size());
  p.angles.reserve(p.indices.size());
  for (Index i : p.indices) {
    p.magnitudes.push_back(mag[i]);
    p.angles.push_back(std::arg(x[i]));
  }
  return p;
}

PeakSet top_peaks(const PeakSet& p, Index n_p) {
  if (n_p < 1) throw std::invalid_argument("top_peaks: n_p must be >= 1");
  const Index m = std::min<Index>(n_p, p.size());
  PeakSet out;
  out.indices.assign(p.indices.begin(), p.indices.begin() + m);
  out.magnitudes.assign(p.magnitudes.begin(), p.magnitudes.begin() + m);
  out.angles.assign(p.angles.begin(), p.angles.begin() + m);
  return out;
}

Scalar peak_power(const CVec& x) {
  Scalar best = 0.0;
  for (Index i = 0; i < x.size(); ++i) best = std::max(best, std::norm(x[i]));
  return best;
}

Scalar papr_db(const CVec& x, Scalar avg_power_ref) {
  if (avg_power_ref <= 0.0)
    throw std::invalid_argument("papr_db: reference power must be positive");
  return 10.0 * std::log10(peak_power(x) / avg_power_ref);
}

CcdfAccumulator::CcdfAccumulator(Scalar min_db, Scalar max_db, Scalar step_db) {
  for (Scalar g = min_db; g <= max_db + 0.5 * step_db; g += step_db)
    grid_.push_back(g);
  counts_.assign(grid_.size(), 0);
}

void CcdfAccumulator::add(Scalar papr_db_value) {
  ++total_;
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    if (papr_db_value > grid_[i])
      ++counts_[i];
    else
      break;  // grid ascending, exceedance is a prefix
  }
}

void CcdfAccumulator::merge(const CcdfAccumulator& other) {
  if (other.grid_.size() != grid_.size())
    throw std::invalid_argument("ccdf merge: grid mismatch");
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  total_ += other.total_;
}

Scalar CcdfAccumulator::ccdf_at(Index i) const {
  if (total_ == 0) return 1.0;
  return static_cast<Scalar>(counts_[i]) / static_cast<Scalar>(total_);
}

Scalar CcdfAccumulator::query(Scalar probability, bool* low_confidence) const {
  if (probability <= 0.0 || probability > 1.0)
    throw std::invalid_argument("ccdf query: probability must be in (0, 1]");
  if (low_confidence != nullptr) {
    *low_confidence =
        static_cast<Scalar>(total_) < 10.0 / probability || total_ == 0;
  }
  Index first = 0;
  while (first < n_thresholds() && ccdf_at(first) > probability) ++first;
  if (first >= n_thresholds()) return grid_.back();
  if (first == 0) return grid_.front();
  const Scalar c_hi = ccdf_at(first - 1);  // > probability
  const Scalar c_lo = ccdf_at(first);      // <= probability
  if (c_hi == c_lo) return grid_[first];
  const Scalar w = (c_hi - probability) / (c_hi - c_lo);
  return grid_[first - 1] + w * (grid_[first] - grid_[first - 1]);
}

Scalar power_covariance_closed_form(std::int64_t delta_n, Index l, Index n,
                                    Scalar sigma_sq) {
  const std::int64_t ln = static_cast<std::int64_t>(l) * n;
  if (delta_n % ln == 0)
    throw std::invalid_argument(
        "power_covariance_closed_form: delta_n must not be a multiple of LN");
  const Scalar num = std::sin(kPi * static_cast<Scalar>(delta_n) / static_cast<Scalar>(l));
  const Scalar den = static_cast<Scalar>(n) *
                     std::sin(kPi * static_cast<Scalar>(delta_n) / static_cast<Scalar>(ln));
  const Scalar ratio = num / den;
  return sigma_sq * sigma_sq * ratio * ratio;
}

}  // namespace papr
