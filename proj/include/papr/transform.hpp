#pragma once

#include <stdexcept>

#include "papr/types.hpp"

namespace papr {

// Quadratic chirp rates in cycles per squared index. Both zero selects OFDM.
struct ChirpParams {
  Scalar alpha1 = 0.0;  // time-domain chirp rate
  Scalar alpha2 = 0.0;  // frequency-domain chirp rate
};

enum class Rotation { PlusOne = 0, MinusOne = 1, PlusJ = 2, MinusJ = 3 };

Complex rotation_value(Rotation r);

// One of the 4N unit lattice perturbations: +1, -1, +j or -j on one subcarrier.
struct CandidateId {
  Index subcarrier = 0;
  Rotation rotation = Rotation::PlusOne;
};

// Immutable precomputed state for the oversampled affine Fourier transform
// pair. Safe to share across threads; all operations are const.
class TransformPlan {
 public:
  TransformPlan(Index n_subcarriers, Index oversampling, ChirpParams chirp);

  Index n_subcarriers() const { return n_; }
  Index oversampling() const { return l_; }
  Index n_samples() const { return n_ * l_; }
  const ChirpParams& chirp() const { return chirp_; }

  // exp(j*2*pi*alpha1*n^2), n in [0, LN)
  const CVec& time_chirp() const { return time_chirp_; }
  // exp(j*2*pi*alpha2*k^2), k in [0, N)
  const CVec& freq_chirp() const { return freq_chirp_; }
  // exp(j*2*pi*m/(LN)), m in [0, LN)
  const CVec& twiddle() const { return twiddle_; }

 private:
  Index n_;
  Index l_;
  ChirpParams chirp_;
  CVec time_chirp_;
  CVec freq_chirp_;
  CVec twiddle_;
};

TransformPlan make_plan(Index n_subcarriers, Index oversampling,
                        ChirpParams chirp = {});

// x_n = (1/sqrt(N)) sum_k s_k exp(j*2*pi*(a1*n^2 + k*n/(LN) + a2*k^2)).
// Length-N input, length-LN output.
CVec idaft(const TransformPlan& plan, const CVec& s);

// Forward transform A*x with A = D_f^H F_L D_t^H. Note A*A^H = L*I, so
// daft(plan, idaft(plan, s)) equals L*s.
CVec daft(const TransformPlan& plan, const CVec& x);

// Column of C = delta * A^H * Cbar for one candidate, generated analytically
// in O(LN). Every sample has magnitude delta/sqrt(N).
CVec candidate_time_column(const TransformPlan& plan, CandidateId cand,
                           Scalar delta);

// Phase angle of the candidate column at one sample, in (-pi, pi]. O(1).
Scalar candidate_phase_at(const TransformPlan& plan, CandidateId cand,
                          Index sample_index);

// Adds delta * column(cand) into x in place; used for incremental TI updates.
void add_candidate_column(const TransformPlan& plan, CandidateId cand,
                          Scalar delta, CVec& x);

}  // namespace papr
