#include "papr/harness.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "papr/rng.hpp"

namespace papr {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

[[noreturn]] void bad_field(const std::string& key, const std::string& why) {
  throw std::invalid_argument("config field '" + key + "': " + why);
}

Scalar parse_real(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const Scalar x = std::stod(v, &pos);
    if (pos != v.size()) bad_field(key, "trailing characters in '" + v + "'");
    return x;
  } catch (const std::invalid_argument&) {
    bad_field(key, "not a number: '" + v + "'");
  } catch (const std::out_of_range&) {
    bad_field(key, "out of range: '" + v + "'");
  }
}

std::int64_t parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const std::int64_t x = std::stoll(v, &pos);
    if (pos != v.size()) bad_field(key, "trailing characters in '" + v + "'");
    return x;
  } catch (const std::exception&) {
    bad_field(key, "not an integer: '" + v + "'");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const std::uint64_t x = std::stoull(v, &pos);
    if (pos != v.size()) bad_field(key, "trailing characters in '" + v + "'");
    return x;
  } catch (const std::exception&) {
    bad_field(key, "not an unsigned integer: '" + v + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  bad_field(key, "expected true or false, got '" + v + "'");
}

std::string fmt_real(Scalar x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string fmt_csv(Scalar x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", x);
  return buf;
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.n_subcarriers < 2) bad_field("n_subcarriers", "must be >= 2");
  if (cfg.oversampling < 1) bad_field("oversampling", "must be >= 1");
  if (cfg.qam_order < 4) bad_field("qam_order", "must be >= 4");
  const int side = static_cast<int>(std::lround(std::sqrt(double(cfg.qam_order))));
  if (side * side != cfg.qam_order)
    bad_field("qam_order", "must be a perfect square");
  if (cfg.alpha1 < 0.0 || cfg.alpha1 >= 1.0) bad_field("alpha1", "must be in [0, 1)");
  if (cfg.alpha2 < 0.0 || cfg.alpha2 >= 1.0) bad_field("alpha2", "must be in [0, 1)");
  if (cfg.beta <= 0.0) bad_field("beta", "must be positive");
  if (cfg.max_iters < 1) bad_field("max_iters", "must be >= 1");
  if (cfg.n_peaks < 1) bad_field("n_peaks", "must be >= 1");
  if (cfg.n_filtered < 1 || cfg.n_filtered > cfg.n_subcarriers)
    bad_field("n_filtered", "must be in [1, n_subcarriers]");
  if (cfg.clip_threshold_db <= -100.0) bad_field("clip_threshold_db", "implausible");
  if (cfg.n_blocks < 1) bad_field("n_blocks", "must be >= 1");
  if (cfg.n_calib_blocks < 1) bad_field("n_calib_blocks", "must be >= 1");
  if (cfg.esn0_grid_db.empty()) bad_field("esn0_grid_db", "must be nonempty");
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::string section;
  while (std::getline(in, line)) {
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::invalid_argument("config: malformed section header: " + line);
      section = trim(line.substr(1, line.size() - 2));
      if (section != "system" && section != "ti" && section != "channel" &&
          section != "run")
        throw std::invalid_argument("config: unknown section [" + section + "]");
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: expected key = value: " + line);
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    const std::string qual = section + "." + key;

    if (qual == "system.waveform") {
      if (val == "ofdm") cfg.waveform = Waveform::OFDM;
      else if (val == "afdm") cfg.waveform = Waveform::AFDM;
      else bad_field(key, "expected ofdm or afdm, got '" + val + "'");
    } else if (qual == "system.alpha1") {
      cfg.alpha1 = parse_real(key, val);
    } else if (qual == "system.alpha2") {
      cfg.alpha2 = parse_real(key, val);
    } else if (qual == "system.n_subcarriers") {
      cfg.n_subcarriers = parse_int(key, val);
    } else if (qual == "system.oversampling") {
      cfg.oversampling = parse_int(key, val);
    } else if (qual == "system.qam_order") {
      cfg.qam_order = static_cast<int>(parse_int(key, val));
    } else if (qual == "ti.scheme") {
      if (val == "none") cfg.scheme = SchemeChoice::None;
      else if (val == "cr") cfg.scheme = SchemeChoice::CR;
      else if (val == "fcr") cfg.scheme = SchemeChoice::FCR;
      else bad_field(key, "expected none, cr or fcr, got '" + val + "'");
    } else if (qual == "ti.beta") {
      cfg.beta = parse_real(key, val);
    } else if (qual == "ti.max_iters") {
      cfg.max_iters = parse_int(key, val);
    } else if (qual == "ti.n_peaks") {
      cfg.n_peaks = parse_int(key, val);
    } else if (qual == "ti.n_filtered") {
      cfg.n_filtered = parse_int(key, val);
    } else if (qual == "ti.clip_threshold_db") {
      cfg.clip_threshold_db = parse_real(key, val);
    } else if (qual == "ti.dfs_enabled") {
      cfg.dfs_enabled = parse_bool(key, val);
    } else if (qual == "channel.limiter_clip_db") {
      cfg.limiter_clip_db = parse_real(key, val);
    } else if (qual == "channel.limiter_enabled") {
      cfg.limiter_enabled = parse_bool(key, val);
    } else if (qual == "run.n_blocks") {
      cfg.n_blocks = parse_int(key, val);
    } else if (qual == "run.n_calib_blocks") {
      cfg.n_calib_blocks = parse_int(key, val);
    } else if (qual == "run.esn0_grid_db") {
      cfg.esn0_grid_db.clear();
      std::istringstream ls(val);
      std::string item;
      while (std::getline(ls, item, ','))
        cfg.esn0_grid_db.push_back(parse_real(key, trim(item)));
    } else if (qual == "run.master_seed") {
      cfg.master_seed = parse_u64(key, val);
    } else if (qual == "run.out_path") {
      cfg.out_path = val;
    } else {
      throw std::invalid_argument("config: unknown key '" + key +
                                  "' in section [" + section + "]");
    }
  }
  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string emit_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "[system]\n";
  out << "waveform = " << (cfg.waveform == Waveform::OFDM ? "ofdm" : "afdm") << "\n";
  out << "alpha1 = " << fmt_real(cfg.alpha1) << "\n";
  out << "alpha2 = " << fmt_real(cfg.alpha2) << "\n";
  out << "n_subcarriers = " << cfg.n_subcarriers << "\n";
  out << "oversampling = " << cfg.oversampling << "\n";
  out << "qam_order = " << cfg.qam_order << "\n";
  out << "\n[ti]\n";
  out << "scheme = "
      << (cfg.scheme == SchemeChoice::None ? "none"
          : cfg.scheme == SchemeChoice::CR ? "cr" : "fcr")
      << "\n";
  out << "beta = " << fmt_real(cfg.beta) << "\n";
  out << "max_iters = " << cfg.max_iters << "\n";
  out << "n_peaks = " << cfg.n_peaks << "\n";
  out << "n_filtered = " << cfg.n_filtered << "\n";
  out << "clip_threshold_db = " << fmt_real(cfg.clip_threshold_db) << "\n";
  out << "dfs_enabled = " << (cfg.dfs_enabled ? "true" : "false") << "\n";
  out << "\n[channel]\n";
  out << "limiter_clip_db = " << fmt_real(cfg.limiter_clip_db) << "\n";
  out << "limiter_enabled = " << (cfg.limiter_enabled ? "true" : "false") << "\n";
  out << "\n[run]\n";
  out << "n_blocks = " << cfg.n_blocks << "\n";
  out << "n_calib_blocks = " << cfg.n_calib_blocks << "\n";
  out << "esn0_grid_db = ";
  for (std::size_t i = 0; i < cfg.esn0_grid_db.size(); ++i) {
    if (i) out << ", ";
    out << fmt_real(cfg.esn0_grid_db[i]);
  }
  out << "\n";
  out << "master_seed = " << cfg.master_seed << "\n";
  out << "out_path = " << cfg.out_path << "\n";
  return out.str();
}

TransformPlan plan_from_config(const ExperimentConfig& cfg) {
  ChirpParams chirp;
  if (cfg.waveform == Waveform::AFDM) chirp = {cfg.alpha1, cfg.alpha2};
  return make_plan(cfg.n_subcarriers, cfg.oversampling, chirp);
}

TiConfig ti_from_config(const ExperimentConfig& cfg) {
  TiConfig ti;
  ti.scheme = cfg.scheme == SchemeChoice::FCR ? TiScheme::FCR : TiScheme::CR;
  ti.beta = cfg.beta;
  ti.max_iters = cfg.max_iters;
  ti.n_peaks = cfg.n_peaks;
  ti.n_filtered = cfg.n_filtered;
  ti.clip_threshold_db = cfg.clip_threshold_db;
  ti.dfs_enabled = cfg.dfs_enabled;
  return ti;
}

CcdfAccumulator run_ccdf(const ExperimentConfig& cfg, int n_workers) {
  if (n_workers < 1) throw std::invalid_argument("n_workers must be >= 1");
  const TransformPlan plan = plan_from_config(cfg);
  const QamConstellation c(cfg.qam_order);
  const TiConfig ti = ti_from_config(cfg);
  const Scalar delta = lattice_step(c);
  const Scalar es = c.avg_energy();

  std::vector<CcdfAccumulator> partial(n_workers);
  auto work = [&](int w) {
    for (Index i = w; i < cfg.n_blocks; i += n_workers) {
      std::mt19937_64 rng(
          block_seed(cfg.master_seed, static_cast<std::uint64_t>(i)));
      const CVec s = map_symbols(rng, c, plan.n_subcarriers());
      Scalar pk, avg;
      if (cfg.scheme == SchemeChoice::None) {
        const CVec x = idaft(plan, s);
        pk = peak_power(x);
        avg = x.squaredNorm() / static_cast<Scalar>(x.size());
      } else {
        const TiResult r = solve_ti(plan, s, delta, ti, es);
        pk = r.peak_power;
        avg = r.avg_power;
      }
      // PAPR normalizes by the transmitted block's own average power; the
      // injection's power increase is reported separately by `power`.
      partial[w].add(10.0 * std::log10(pk / avg));
    }
  };
  if (n_workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    for (int w = 0; w < n_workers; ++w) threads.emplace_back(work, w);
    for (auto& t : threads) t.join();
  }
  CcdfAccumulator acc = std::move(partial[0]);
  for (int w = 1; w < n_workers; ++w) acc.merge(partial[w]);
  return acc;
}

std::vector<CovRow> run_covcheck(const ExperimentConfig& cfg) {
  const TransformPlan plan = plan_from_config(cfg);
  const QamConstellation c(cfg.qam_order);
  const Index ln = plan.n_samples();
  const Index l = plan.oversampling();
  const Index max_lag = std::max<Index>(l, 1);

  // Per-lag accumulators plus per-block covariance samples for the SE.
  std::vector<Scalar> sum_cross(max_lag + 1, 0.0);
  std::vector<Scalar> sum_cov(max_lag + 1, 0.0);
  std::vector<Scalar> sum_cov_sq(max_lag + 1, 0.0);
  Scalar sum_power = 0.0;

  for (Index blk = 0; blk < cfg.n_blocks; ++blk) {
    std::mt19937_64 rng(
        block_seed(cfg.master_seed, static_cast<std::uint64_t>(blk)));
    const CVec s = map_symbols(rng, c, plan.n_subcarriers());
    const CVec x = idaft(plan, s);
    RVec p(ln);
    for (Index i = 0; i < ln; ++i) p[i] = std::norm(x[i]);
    const Scalar m1 = p.mean();
    sum_power += m1;
    for (Index d = 1; d <= max_lag; ++d) {
      Scalar cross = 0.0;
      for (Index i = 0; i < ln; ++i) cross += p[i] * p[(i + d) % ln];
      cross /= static_cast<Scalar>(ln);
      sum_cross[d] += cross;
      const Scalar cov_b = cross - m1 * m1;
      sum_cov[d] += cov_b;
      sum_cov_sq[d] += cov_b * cov_b;
    }
  }

  const Scalar nb = static_cast<Scalar>(cfg.n_blocks);
  const Scalar mean_power = sum_power / nb;
  std::vector<CovRow> rows;
  for (Index d = 1; d <= max_lag; ++d) {
    CovRow row;
    row.delta_n = static_cast<int>(d);
    row.empirical = sum_cross[d] / nb - mean_power * mean_power;
    row.closed_form = power_covariance_closed_form(
        d, plan.oversampling(), plan.n_subcarriers(), c.avg_energy());
    row.rel_error = row.closed_form > 0.0
                        ? std::abs(row.empirical - row.closed_form) / row.closed_form
                        : 0.0;
    const Scalar mean_cov = sum_cov[d] / nb;
    const Scalar var_cov =
        std::max(0.0, sum_cov_sq[d] / nb - mean_cov * mean_cov);
    row.std_error = std::sqrt(var_cov / nb);
    rows.push_back(row);
  }
  return rows;
}

std::vector<ComplexityRow> run_complexity(const ExperimentConfig& cfg) {
  const TransformPlan plan = plan_from_config(cfg);
  const QamConstellation c(cfg.qam_order);
  const TiConfig ti = ti_from_config(cfg);
  const Scalar delta = lattice_step(c);

  std::vector<ComplexityRow> rows;
  for (Index blk = 0; blk < cfg.n_blocks; ++blk) {
    std::mt19937_64 rng(
        block_seed(cfg.master_seed, static_cast<std::uint64_t>(blk)));
    const CVec s = map_symbols(rng, c, plan.n_subcarriers());
    const TiResult r = solve_ti(plan, s, delta, ti, c.avg_energy());
    rows.push_back({cfg.n_subcarriers, r.per_iter_nwcs, r.nwcs_evaluations,
                    r.iterations_used, r.leaves_visited});
  }
  return rows;
}

std::string cmd_ccdf(const ExperimentConfig& cfg, int n_workers) {
  const CcdfAccumulator acc = run_ccdf(cfg, n_workers);
  std::ostringstream out;
  out << "threshold_db,ccdf\n";
  for (Index i = 0; i < acc.n_thresholds(); ++i) {
    out << fmt_csv(acc.threshold_db(i)) << "," << fmt_csv(acc.ccdf_at(i)) << "\n";
  }
  return out.str();
}

std::string cmd_ser(const ExperimentConfig& cfg, int n_workers) {
  const TransformPlan plan = plan_from_config(cfg);
  const QamConstellation c(cfg.qam_order);

  SerConfig ser;
  ser.limiter_clip_db = cfg.limiter_clip_db;
  ser.limiter_enabled = cfg.limiter_enabled;
  if (cfg.scheme != SchemeChoice::None) {
    ser.use_ti = true;
    ser.ti = ti_from_config(cfg);
    // calibration pass: fixed seed derived from the master seed
    const std::uint64_t calib_seed = splitmix64(cfg.master_seed ^ 0x5345525F43414Cull);
    power_increase_db(plan, c, ser.ti, cfg.n_calib_blocks, calib_seed,
                      &ser.power_increase_factor);
  }

  const std::vector<SerPoint> points = run_ser_curve(
      plan, c, ser, cfg.esn0_grid_db, cfg.n_blocks, cfg.master_seed, n_workers);

  std::ostringstream out;
  out << "esn0_db,ser,symbols\n";
  for (const SerPoint& p : points) {
    out << fmt_csv(p.esn0_db) << "," << fmt_csv(p.ser()) << "," << p.symbols << "\n";
  }
  return out.str();
}

std::string cmd_power(const ExperimentConfig& cfg, int /*n_workers*/) {
  std::ostringstream out;
  out << "scheme,power_increase_db\n";
  const char* name = cfg.scheme == SchemeChoice::None ? "none"
                     : cfg.scheme == SchemeChoice::CR ? "cr"
                                                      : "fcr";
  Scalar db = 0.0;
  if (cfg.scheme != SchemeChoice::None) {
    const TransformPlan plan = plan_from_config(cfg);
    const QamConstellation c(cfg.qam_order);
    db = power_increase_db(plan, c, ti_from_config(cfg), cfg.n_blocks,
                           cfg.master_seed);
  }
  out << name << "," << fmt_csv(db) << "\n";
  return out.str();
}

std::string cmd_covcheck(const ExperimentConfig& cfg, int /*n_workers*/) {
  const std::vector<CovRow> rows = run_covcheck(cfg);
  std::ostringstream out;
  out << "delta_n,empirical_cov,closed_form,rel_error\n";
  for (const CovRow& r : rows) {
    out << r.delta_n << "," << fmt_csv(r.empirical) << ","
        << fmt_csv(r.closed_form) << "," << fmt_csv(r.rel_error) << "\n";
  }
  return out.str();
}

std::string cmd_complexity(const ExperimentConfig& cfg, int /*n_workers*/) {
  const std::vector<ComplexityRow> rows = run_complexity(cfg);
  std::ostringstream out;
  out << "n_subcarriers,per_iter_nwcs,total_nwcs,iterations,leaves\n";
  for (const ComplexityRow& r : rows) {
    out << r.n_subcarriers << "," << r.per_iter_nwcs << "," << r.total_nwcs
        << "," << r.iterations << "," << r.leaves << "\n";
  }
  return out.str();
}

}  // namespace papr
