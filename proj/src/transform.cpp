#include "papr/transform.hpp"

#include <cmath>

#include <unsupported/Eigen/FFT>

namespace papr {

namespace {

// exp(j*2*pi*frac(cycles)); reducing modulo one cycle keeps the argument of
// the trig functions small for large n^2.
Complex unit_phasor(Scalar cycles) {
  const Scalar c = std::fmod(cycles, 1.0);
  return {std::cos(kTwoPi * c), std::sin(kTwoPi * c)};
}

}  // namespace

Complex rotation_value(Rotation r) {
  switch (r) {
    case Rotation::PlusOne:
      return {1.0, 0.0};
    case Rotation::MinusOne:
      return {-1.0, 0.0};
    case Rotation::PlusJ:
      return {0.0, 1.0};
    case Rotation::MinusJ:
      return {0.0, -1.0};
  }
  throw std::invalid_argument("invalid rotation");
}

TransformPlan::TransformPlan(Index n_subcarriers, Index oversampling,
                             ChirpParams chirp)
    : n_(n_subcarriers), l_(oversampling), chirp_(chirp) {
  if (n_ < 2) throw std::invalid_argument("n_subcarriers must be >= 2");
  if (l_ < 1) throw std::invalid_argument("oversampling must be >= 1");
  if (chirp_.alpha1 < 0.0 || chirp_.alpha1 >= 1.0 || chirp_.alpha2 < 0.0 ||
      chirp_.alpha2 >= 1.0) {
    throw std::invalid_argument("chirp rates must lie in [0, 1)");
  }
  const Index ln = n_ * l_;
  time_chirp_.resize(ln);
  for (Index n = 0; n < ln; ++n) {
    time_chirp_[n] =
        unit_phasor(chirp_.alpha1 * static_cast<Scalar>(n) * static_cast<Scalar>(n));
  }
  freq_chirp_.resize(n_);
  for (Index k = 0; k < n_; ++k) {
    freq_chirp_[k] =
        unit_phasor(chirp_.alpha2 * static_cast<Scalar>(k) * static_cast<Scalar>(k));
  }
  twiddle_.resize(ln);
  for (Index m = 0; m < ln; ++m) {
    twiddle_[m] = unit_phasor(static_cast<Scalar>(m) / static_cast<Scalar>(ln));
  }
}

TransformPlan make_plan(Index n_subcarriers, Index oversampling,
                        ChirpParams chirp) {
  return TransformPlan(n_subcarriers, oversampling, chirp);
}

CVec idaft(const TransformPlan& plan, const CVec& s) {
  if (s.size() != plan.n_subcarriers())
    throw std::invalid_argument("idaft: symbol block length mismatch");
  const Index n = plan.n_subcarriers();
  const Index ln = plan.n_samples();

  CVec padded = CVec::Zero(ln);
  padded.head(n) = s.cwiseProduct(plan.freq_chirp());

  Eigen::FFT<Scalar> fft;
  std::vector<Complex> in(padded.data(), padded.data() + ln);
  std::vector<Complex> out(ln);
  fft.inv(out, in);  // (1/LN) * sum with e^{+j2*pi*kn/LN}

  const Scalar scale = static_cast<Scalar>(ln) / std::sqrt(static_cast<Scalar>(n));
  CVec x(ln);
  for (Index i = 0; i < ln; ++i) x[i] = out[i] * scale * plan.time_chirp()[i];
  return x;
}

CVec daft(const TransformPlan& plan, const CVec& x) {
  if (x.size() != plan.n_samples())
    throw std::invalid_argument("daft: time signal length mismatch");
  const Index n = plan.n_subcarriers();
  const Index ln = plan.n_samples();

  std::vector<Complex> in(ln);
  for (Index i = 0; i < ln; ++i) in[i] = x[i] * std::conj(plan.time_chirp()[i]);

  Eigen::FFT<Scalar> fft;
  std::vector<Complex> out(ln);
  fft.fwd(out, in);

  const Scalar scale = 1.0 / std::sqrt(static_cast<Scalar>(n));
  CVec g(n);
  for (Index k = 0; k < n; ++k)
    g[k] = out[k] * scale * std::conj(plan.freq_chirp()[k]);
  return g;
}

CVec candidate_time_column(const TransformPlan& plan, CandidateId cand,
                           Scalar delta) {
  const Index n = plan.n_subcarriers();
  const Index ln = plan.n_samples();
  if (cand.subcarrier < 0 || cand.subcarrier >= n)
    throw std::invalid_argument("candidate subcarrier out of range");

  const Complex base = rotation_value(cand.rotation) *
                       plan.freq_chirp()[cand.subcarrier] *
                       (delta / std::sqrt(static_cast<Scalar>(n)));
  CVec col(ln);
  const Index k = cand.subcarrier;
  for (Index i = 0; i < ln; ++i) {
    const Index m = (k * i) % ln;
    col[i] = base * plan.twiddle()[m] * plan.time_chirp()[i];
  }
  return col;
}

Scalar candidate_phase_at(const TransformPlan& plan, CandidateId cand,
                          Index sample_index) {
  const Index n = plan.n_subcarriers();
  const Index ln = plan.n_samples();
  if (cand.subcarrier < 0 || cand.subcarrier >= n)
    throw std::invalid_argument("candidate subcarrier out of range");
  if (sample_index < 0 || sample_index >= ln)
    throw std::invalid_argument("sample index out of range");
  const Complex u = rotation_value(cand.rotation) *
                    plan.freq_chirp()[cand.subcarrier] *
                    plan.twiddle()[(cand.subcarrier * sample_index) % ln] *
                    plan.time_chirp()[sample_index];
  return std::arg(u);
}

void add_candidate_column(const TransformPlan& plan, CandidateId cand,
                          Scalar delta, CVec& x) {
  const Index n = plan.n_subcarriers();
  const Index ln = plan.n_samples();
  if (x.size() != ln)
    throw std::invalid_argument("add_candidate_column: length mismatch");
  const Complex base = rotation_value(cand.rotation) *
                       plan.freq_chirp()[cand.subcarrier] *
                       (delta / std::sqrt(static_cast<Scalar>(n)));
  const Index k = cand.subcarrier;
  for (Index i = 0; i < ln; ++i) {
    x[i] += base * plan.twiddle()[(k * i) % ln] * plan.time_chirp()[i];
  }
}

}  // namespace papr
