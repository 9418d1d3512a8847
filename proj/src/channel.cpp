#include "papr/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

#include "papr/rng.hpp"

namespace papr {

CVec soft_limit(const CVec& x, const SoftLimiter& limiter) {
  if (limiter.clip_amplitude <= 0.0)
    throw std::invalid_argument("clip amplitude must be positive");
  CVec out(x.size());
  for (Index i = 0; i < x.size(); ++i) {
    const Scalar mag = std::abs(x[i]);
    if (mag < limiter.clip_amplitude || mag == 0.0) {
      out[i] = x[i];
    } else {
      out[i] = x[i] * (limiter.clip_amplitude / mag);
    }
  }
  return out;
}

CVec add_awgn(const CVec& x, Scalar noise_power, std::mt19937_64& rng) {
  if (noise_power < 0.0)
    throw std::invalid_argument("noise power must be non-negative");
  if (noise_power == 0.0) return x;
  std::normal_distribution<Scalar> gauss(0.0, std::sqrt(noise_power / 2.0));
  CVec out(x.size());
  for (Index i = 0; i < x.size(); ++i) {
    out[i] = x[i] + Complex(gauss(rng), gauss(rng));
  }
  return out;
}

std::vector<int> receive(const CVec& y, Scalar delta,
                         const QamConstellation& c) {
  std::vector<int> out(static_cast<std::size_t>(y.size()));
  for (Index i = 0; i < y.size(); ++i) {
    out[i] = detect(modulo_recover(y[i], delta), c);
  }
  return out;
}

Scalar power_increase_db(const TransformPlan& plan, const QamConstellation& c,
                         const TiConfig& cfg, Index n_blocks,
                         std::uint64_t master_seed, Scalar* linear_factor) {
  if (n_blocks < 1) throw std::invalid_argument("n_blocks must be >= 1");
  const Scalar delta = lattice_step(c);
  Scalar num = 0.0;
  Scalar den = 0.0;
  for (Index i = 0; i < n_blocks; ++i) {
    std::mt19937_64 rng(block_seed(master_seed, static_cast<std::uint64_t>(i)));
    const CVec s = map_symbols(rng, c, plan.n_subcarriers());
    const TiResult r = solve_ti(plan, s, delta, cfg, c.avg_energy());
    const CVec st = apply_ti(s, delta, r.b);
    num += st.squaredNorm();
    den += s.squaredNorm();
  }
  const Scalar factor = num / den;
  if (linear_factor != nullptr) *linear_factor = factor;
  return 10.0 * std::log10(factor);
}

TransformPlan receiver_plan(const TransformPlan& tx_plan) {
  const Scalar l = static_cast<Scalar>(tx_plan.oversampling());
  return make_plan(tx_plan.n_subcarriers(), 1,
                   {tx_plan.chirp().alpha1 * l * l, tx_plan.chirp().alpha2});
}

std::uint64_t run_ser_block(const TransformPlan& plan,
                            const TransformPlan& rx_plan,
                            const QamConstellation& c, const SerConfig& cfg,
                            Scalar esn0_db, std::mt19937_64& rng) {
  const Index n = plan.n_subcarriers();
  const Scalar delta = lattice_step(c);
  const Scalar es = c.avg_energy();

  std::uniform_int_distribution<int> pick(0, c.order() - 1);
  std::vector<int> tx(static_cast<std::size_t>(n));
  CVec s(n);
  for (Index i = 0; i < n; ++i) {
    tx[i] = pick(rng);
    s[i] = c.point(tx[i]);
  }

  CVec st = s;
  if (cfg.use_ti) {
    const TiResult r = solve_ti(plan, s, delta, cfg.ti, es);
    st = apply_ti(s, delta, r.b);
  }
  CVec x = idaft(plan, st);

  // E_s normalization: transmit power is scaled back by the scheme's
  // calibrated average power increase, keeping the limiter threshold fixed
  // relative to E_s. The receiver undoes the scaling before the modulo.
  const Scalar g = cfg.power_increase_factor;
  const Scalar amp = 1.0 / std::sqrt(g);
  x *= amp;

  if (cfg.limiter_enabled) {
    const SoftLimiter lim{
        std::sqrt(std::pow(10.0, cfg.limiter_clip_db / 10.0) * es)};
    x = soft_limit(x, lim);
  }

  // Symbol-rate receiver: sample every Lth output of the PA, then apply the
  // critically-sampled forward transform (square, so A*A^H = I and no 1/L
  // scaling is needed). y = A*xbar + w with w ~ CN(0, N0 I); the Es/N0 axis
  // refers to the detector, i.e. N0 = E_s / 10^(EsN0/10) per subcarrier.
  const Index l = plan.oversampling();
  CVec sampled(n);
  for (Index i = 0; i < n; ++i) sampled[i] = x[i * l];
  CVec y = daft(rx_plan, sampled);
  const Scalar n0_eff = es / std::pow(10.0, esn0_db / 10.0);
  y = add_awgn(y, n0_eff, rng);
  y /= amp;

  std::uint64_t errors = 0;
  for (Index i = 0; i < n; ++i) {
    const int rx = detect(modulo_recover(y[i], delta), c);
    if (rx != tx[i]) ++errors;
  }
  return errors;
}

std::vector<SerPoint> run_ser_curve(const TransformPlan& plan,
                                    const QamConstellation& c,
                                    const SerConfig& cfg,
                                    const std::vector<Scalar>& esn0_grid_db,
                                    Index n_blocks, std::uint64_t master_seed,
                                    int n_workers) {
  if (n_workers < 1) throw std::invalid_argument("n_workers must be >= 1");
  const TransformPlan rx_plan = receiver_plan(plan);
  const std::size_t n_points = esn0_grid_db.size();
  std::vector<std::vector<std::uint64_t>> partial(
      n_workers, std::vector<std::uint64_t>(n_points, 0));

  auto work = [&](int w) {
    for (std::size_t p = 0; p < n_points; ++p) {
      for (Index i = w; i < n_blocks; i += n_workers) {
        std::mt19937_64 rng(block_seed(
            master_seed,
            static_cast<std::uint64_t>(p) * static_cast<std::uint64_t>(n_blocks) +
                static_cast<std::uint64_t>(i)));
        partial[w][p] +=
            run_ser_block(plan, rx_plan, c, cfg, esn0_grid_db[p], rng);
      }
    }
  };

  if (n_workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    for (int w = 0; w < n_workers; ++w) threads.emplace_back(work, w);
    for (auto& t : threads) t.join();
  }

  std::vector<SerPoint> out(n_points);
  for (std::size_t p = 0; p < n_points; ++p) {
    out[p].esn0_db = esn0_grid_db[p];
    out[p].symbols = static_cast<std::uint64_t>(n_blocks) *
                     static_cast<std::uint64_t>(plan.n_subcarriers());
    for (int w = 0; w < n_workers; ++w) out[p].symbol_errors += partial[w][p];
  }
  return out;
}

}  // namespace papr
