#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "papr/constellation.hpp"
#include "papr/peaks.hpp"
#include "papr/transform.hpp"
#include "papr/types.hpp"

namespace papr {

enum class TiScheme { CR, FCR };

struct TiConfig {
  TiScheme scheme = TiScheme::CR;
  Scalar beta = 4.0;            // magnitude exponent in the ranking weight
  Index max_iters = 20;         // global iteration budget T
  Index n_peaks = 16;           // N_p, local peaks entering each score
  Index n_filtered = 32;        // N_c, FCR-only candidate subcarrier count
  Scalar clip_threshold_db = 5.0;  // eta in dB above sqrt(E_s), FCR only
  bool dfs_enabled = false;
};

// Allowed subcarriers in ranking order. CR uses the full set in natural
// order; FCR uses the leading clipping-noise-spectrum indices.
struct CandidateFilter {
  std::vector<Index> subcarriers;
};

struct ScoredCandidate {
  CandidateId id;
  Scalar score = 0.0;
};

struct TiResult {
  TiVector b;
  Scalar peak_power = 0.0;  // max_n |x_n|^2 of the returned state
  Scalar avg_power = 0.0;   // mean_n |x_n|^2 of the returned state
  Index iterations_used = 0;
  Index leaves_visited = 0;
  std::uint64_t nwcs_evaluations = 0;
  std::uint64_t per_iter_nwcs = 0;  // last iteration's evaluation count
};

// Negated weighted cosine similarity of one peak against one candidate.
Scalar nwcs(Scalar peak_magnitude, Scalar peak_angle, Scalar candidate_angle,
            Scalar beta);

CandidateFilter full_filter(Index n_subcarriers);

// Clips x0 at amplitude eta, transforms the clipping noise to the frequency
// domain and keeps the n_filtered strongest subcarriers. Falls back to
// natural order when nothing exceeds eta.
CandidateFilter clipping_noise_filter(const CVec& x0, Scalar eta,
                                      Index n_filtered,
                                      const TransformPlan& plan);

// Scores all 4*|filter| candidates against the given peaks, laid out as
// scores[4*i + rotation] for filter entry i. Increments nwcs_counter by
// 4 * |filter| * |peaks|.
std::vector<ScoredCandidate> score_candidates(const TransformPlan& plan,
                                              const PeakSet& peaks,
                                              const CandidateFilter& filter,
                                              Scalar beta,
                                              std::uint64_t* nwcs_counter);

// Highest positive score; none when all scores are <= 0. Ties break toward
// the smallest (subcarrier, rotation) pair with rotation order +1,-1,+j,-j.
std::optional<CandidateId> select_best(
    const std::vector<ScoredCandidate>& scores);

// Full solver. scheme and dfs_enabled in cfg select CR-TI, FCR-TI and their
// depth-first-search variants. The b = 0 baseline always competes with the
// recorded states, so the returned peak power never exceeds the input's.
//
// The depth-first search excludes candidates that would recreate a b-state
// already visited anywhere in the search. Scores come in exactly negated
// antipodal pairs (score(k, r) = -score(k, -r)), so without that exclusion
// the highest-ranked child of a node is eventually the exact inverse of the
// edge that led to it and the search oscillates between two states forever,
// never reaching a node with no positive-score child. Every visited node
// competes as an output (the budget-exhaustion path state is one of them);
// the minimum-peak-power state visited is returned.
TiResult solve_ti(const TransformPlan& plan, const CVec& s, Scalar delta,
                  const TiConfig& cfg, Scalar avg_energy = 1.0);

// Convenience wrappers for the individual schemes.
TiResult cr_ti(const TransformPlan& plan, const CVec& s, Scalar delta,
               TiConfig cfg);
TiResult fcr_ti(const TransformPlan& plan, const CVec& s, Scalar delta,
                TiConfig cfg, Scalar avg_energy = 1.0);
TiResult dfs_ti(const TransformPlan& plan, const CVec& s, Scalar delta,
                TiConfig cfg, Scalar avg_energy = 1.0);

// s + delta * b
CVec apply_ti(const CVec& s, Scalar delta, const TiVector& b);

}  // namespace papr
