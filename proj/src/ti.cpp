#include "papr/ti.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

namespace papr {

namespace {

int rotation_order(Rotation r) { return static_cast<int>(r); }

bool candidate_less(const CandidateId& a, const CandidateId& b) {
  if (a.subcarrier != b.subcarrier) return a.subcarrier < b.subcarrier;
  return rotation_order(a.rotation) < rotation_order(b.rotation);
}

void check_config(const TiConfig& cfg, Index n) {
  if (cfg.beta <= 0.0) throw std::invalid_argument("beta must be positive");
  if (cfg.max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  if (cfg.n_peaks < 1) throw std::invalid_argument("n_peaks must be >= 1");
  if (cfg.scheme == TiScheme::FCR &&
      (cfg.n_filtered < 1 || cfg.n_filtered > n))
    throw std::invalid_argument("n_filtered must be in [1, N]");
}

// Valid candidates (score > 0) in descending score order; equal scores fall
// back to the smallest (subcarrier, rotation) pair.
std::vector<ScoredCandidate> valid_children(
    std::vector<ScoredCandidate> scores) {
  std::erase_if(scores,
                [](const ScoredCandidate& c) { return !(c.score > 0.0); });
  std::stable_sort(scores.begin(), scores.end(),
                   [](const ScoredCandidate& a, const ScoredCandidate& b) {
                     if (a.score != b.score) return a.score > b.score;
                     return candidate_less(a.id, b.id);
                   });
  return scores;
}

void apply_candidate(const TransformPlan& plan, const CandidateId& cand,
                     Scalar delta, TiVector& b, CVec& x) {
  GaussianInteger& e = b[cand.subcarrier];
  switch (cand.rotation) {
    case Rotation::PlusOne: e.re += 1; break;
    case Rotation::MinusOne: e.re -= 1; break;
    case Rotation::PlusJ: e.im += 1; break;
    case Rotation::MinusJ: e.im -= 1; break;
  }
  add_candidate_column(plan, cand, delta, x);
}

void unapply_candidate(const TransformPlan& plan, const CandidateId& cand,
                       Scalar delta, TiVector& b, CVec& x) {
  GaussianInteger& e = b[cand.subcarrier];
  switch (cand.rotation) {
    case Rotation::PlusOne: e.re -= 1; break;
    case Rotation::MinusOne: e.re += 1; break;
    case Rotation::PlusJ: e.im -= 1; break;
    case Rotation::MinusJ: e.im += 1; break;
  }
  add_candidate_column(plan, cand, -delta, x);
}

// FNV-1a over the Gaussian-integer components.
std::uint64_t hash_state(const TiVector& b) {
  std::uint64_t h = 1469598103934665603ull;
  for (const GaussianInteger& e : b) {
    h = (h ^ static_cast<std::uint64_t>(e.re)) * 1099511628211ull;
    h = (h ^ static_cast<std::uint64_t>(e.im)) * 1099511628211ull;
  }
  return h;
}

// Hash of the state reached by taking cand from b, without touching x.
std::uint64_t hash_after(TiVector& b, const CandidateId& cand) {
  GaussianInteger& e = b[cand.subcarrier];
  GaussianInteger saved = e;
  switch (cand.rotation) {
    case Rotation::PlusOne: e.re += 1; break;
    case Rotation::MinusOne: e.re -= 1; break;
    case Rotation::PlusJ: e.im += 1; break;
    case Rotation::MinusJ: e.im -= 1; break;
  }
  const std::uint64_t h = hash_state(b);
  e = saved;
  return h;
}

}  // namespace

Scalar nwcs(Scalar peak_magnitude, Scalar peak_angle, Scalar candidate_angle,
            Scalar beta) {
  return -std::pow(peak_magnitude, beta) *
         std::cos(peak_angle - candidate_angle);
}

CandidateFilter full_filter(Index n_subcarriers) {
  CandidateFilter f;
  f.subcarriers.resize(n_subcarriers);
  std::iota(f.subcarriers.begin(), f.subcarriers.end(), Index{0});
  return f;
}

CandidateFilter clipping_noise_filter(const CVec& x0, Scalar eta,
                                      Index n_filtered,
                                      const TransformPlan& plan) {
  if (eta <= 0.0) throw std::invalid_argument("eta must be positive");
  const Index ln = plan.n_samples();
  const Index n = plan.n_subcarriers();

  CVec f = CVec::Zero(ln);
  bool any = false;
  for (Index i = 0; i < ln; ++i) {
    if (std::abs(x0[i]) >= eta) {
      f[i] = x0[i];
      any = true;
    }
  }

  CandidateFilter filter = full_filter(n);
  if (any) {
    const CVec g = daft(plan, f);
    std::stable_sort(filter.subcarriers.begin(), filter.subcarriers.end(),
                     [&](Index a, Index b) {
                       const Scalar ma = std::abs(g[a]);
                       const Scalar mb = std::abs(g[b]);
                       if (ma != mb) return ma > mb;
                       return a < b;
                     });
  }
  // else: nothing exceeds eta, keep natural subcarrier order
  filter.subcarriers.resize(std::min<Index>(n_filtered, n));
  return filter;
}

std::vector<ScoredCandidate> score_candidates(const TransformPlan& plan,
                                              const PeakSet& peaks,
                                              const CandidateFilter& filter,
                                              Scalar beta,
                                              std::uint64_t* nwcs_counter) {
  const Index ln = plan.n_samples();
  const Index np = peaks.size();
  const Index nc = static_cast<Index>(filter.subcarriers.size());
  if (nwcs_counter != nullptr)
    *nwcs_counter += static_cast<std::uint64_t>(4) * nc * np;

  // Per-peak phasor z_p = |x_p|^beta * exp(j(theta_p - 2 pi a1 p^2)). Then
  // S_k = conj(f_k) * sum_p z_p * conj(w^{k p}) satisfies
  //   score(k, +1) = -Re S_k,  score(k, -1) = +Re S_k,
  //   score(k, +j) = -Im S_k,  score(k, -j) = +Im S_k,
  // identical to summing Eq.-style NWCS terms peak by peak.
  std::vector<Complex> z(np);
  std::vector<Index> pidx(np);
  for (Index i = 0; i < np; ++i) {
    const Scalar w = std::pow(peaks.magnitudes[i], beta);
    const Complex phase{std::cos(peaks.angles[i]), std::sin(peaks.angles[i])};
    z[i] = w * phase * std::conj(plan.time_chirp()[peaks.indices[i]]);
    pidx[i] = peaks.indices[i];
  }

  std::vector<ScoredCandidate> out(static_cast<std::size_t>(4) * nc);
  for (Index c = 0; c < nc; ++c) {
    const Index k = filter.subcarriers[c];
    Complex acc{0.0, 0.0};
    for (Index i = 0; i < np; ++i) {
      acc += z[i] * std::conj(plan.twiddle()[(k * pidx[i]) % ln]);
    }
    const Complex s = acc * std::conj(plan.freq_chirp()[k]);
    out[4 * c + 0] = {{k, Rotation::PlusOne}, -s.real()};
    out[4 * c + 1] = {{k, Rotation::MinusOne}, s.real()};
    out[4 * c + 2] = {{k, Rotation::PlusJ}, -s.imag()};
    out[4 * c + 3] = {{k, Rotation::MinusJ}, s.imag()};
  }
  return out;
}

std::optional<CandidateId> select_best(
    const std::vector<ScoredCandidate>& scores) {
  const ScoredCandidate* best = nullptr;
  for (const auto& c : scores) {
    if (!(c.score > 0.0)) continue;
    if (best == nullptr || c.score > best->score ||
        (c.score == best->score && candidate_less(c.id, best->id))) {
      best = &c;
    }
  }
  if (best == nullptr) return std::nullopt;
  return best->id;
}

CVec apply_ti(const CVec& s, Scalar delta, const TiVector& b) {
  CVec out = s;
  for (Index i = 0; i < s.size(); ++i) {
    out[i] += delta * Complex(static_cast<Scalar>(b[i].re),
                              static_cast<Scalar>(b[i].im));
  }
  return out;
}

TiResult solve_ti(const TransformPlan& plan, const CVec& s, Scalar delta,
                  const TiConfig& cfg, Scalar avg_energy) {
  const Index n = plan.n_subcarriers();
  check_config(cfg, n);
  if (s.size() != n) throw std::invalid_argument("solve_ti: length mismatch");

  CVec x = idaft(plan, s);

  CandidateFilter filter;
  if (cfg.scheme == TiScheme::FCR) {
    const Scalar eta =
        std::sqrt(std::pow(10.0, cfg.clip_threshold_db / 10.0) * avg_energy);
    filter = clipping_noise_filter(x, eta, cfg.n_filtered, plan);
  } else {
    filter = full_filter(n);
  }

  const Index ln = plan.n_samples();

  TiResult result;
  result.b.assign(n, GaussianInteger{});
  result.peak_power = peak_power(x);  // b = 0 baseline always competes
  result.avg_power = x.squaredNorm() / static_cast<Scalar>(ln);
  result.leaves_visited = 1;

  TiVector b(n, GaussianInteger{});
  std::uint64_t nwcs_count = 0;
  std::uint64_t last_iter_nwcs = 0;
  Index used = 0;
  const Index budget = cfg.max_iters;

  auto score_state = [&](const CVec& xs) {
    const PeakSet peaks = top_peaks(find_local_peaks(xs), cfg.n_peaks);
    const std::uint64_t before = nwcs_count;
    auto scores = score_candidates(plan, peaks, filter, cfg.beta, &nwcs_count);
    last_iter_nwcs = nwcs_count - before;
    return valid_children(std::move(scores));
  };

  auto record_state = [&](const CVec& xs) {
    const Scalar p = peak_power(xs);
    if (p < result.peak_power) {
      result.peak_power = p;
      result.avg_power = xs.squaredNorm() / static_cast<Scalar>(ln);
      result.b = b;
    }
  };

  struct Frame {
    std::vector<ScoredCandidate> children;
    std::size_t cursor = 0;
    CandidateId applied;  // edge taken from the parent (unused at the root)
  };

  // Visited b-states; candidates recreating one are skipped (see ti.hpp).
  std::unordered_set<std::uint64_t> visited;
  if (cfg.dfs_enabled) visited.insert(hash_state(b));

  std::vector<Frame> stack;
  stack.push_back({score_state(x), 0, {}});
  if (stack.back().children.empty()) {
    // No valid candidate at t = 1: terminate with b = 0.
    result.iterations_used = 0;
    result.nwcs_evaluations = nwcs_count;
    result.per_iter_nwcs = last_iter_nwcs;
    return result;
  }

  while (!stack.empty() && used < budget) {
    Frame& f = stack.back();

    // Next admissible child; skipping inadmissible ones costs no budget.
    const CandidateId* next = nullptr;
    while (f.cursor < f.children.size()) {
      const CandidateId& cand = f.children[f.cursor].id;
      ++f.cursor;
      if (cfg.dfs_enabled && visited.contains(hash_after(b, cand))) continue;
      next = &cand;
      break;
    }

    if (next == nullptr) {
      // All children explored or excluded: this node is a leaf.
      ++result.leaves_visited;
      if (!cfg.dfs_enabled || stack.size() == 1) break;
      unapply_candidate(plan, f.applied, delta, b, x);
      stack.pop_back();  // backtracking is free
      continue;
    }

    const CandidateId cand = *next;
    apply_candidate(plan, cand, delta, b, x);
    ++used;
    if (cfg.dfs_enabled) {
      visited.insert(hash_state(b));
      record_state(x);  // every visited node competes as an output
    }
    if (used >= budget) {
      // Budget exhausted mid-path; the path state competes as a final leaf.
      if (!cfg.dfs_enabled) record_state(x);
      ++result.leaves_visited;
      break;
    }
    auto children = score_state(x);
    if (children.empty()) {
      ++result.leaves_visited;
      if (!cfg.dfs_enabled) {
        // Greedy termination: the final state competes with the baseline.
        record_state(x);
        break;
      }
      unapply_candidate(plan, cand, delta, b, x);
    } else {
      stack.push_back({std::move(children), 0, cand});
    }
  }

  result.iterations_used = used;
  result.nwcs_evaluations = nwcs_count;
  result.per_iter_nwcs = last_iter_nwcs;
  return result;
}

TiResult cr_ti(const TransformPlan& plan, const CVec& s, Scalar delta,
               TiConfig cfg) {
  cfg.scheme = TiScheme::CR;
  cfg.dfs_enabled = false;
  return solve_ti(plan, s, delta, cfg);
}

TiResult fcr_ti(const TransformPlan& plan, const CVec& s, Scalar delta,
                TiConfig cfg, Scalar avg_energy) {
  cfg.scheme = TiScheme::FCR;
  return solve_ti(plan, s, delta, cfg, avg_energy);
}

TiResult dfs_ti(const TransformPlan& plan, const CVec& s, Scalar delta,
                TiConfig cfg, Scalar avg_energy) {
  cfg.dfs_enabled = true;
  return solve_ti(plan, s, delta, cfg, avg_energy);
}

}  // namespace papr
