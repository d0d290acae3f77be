#include "hbfsm/sim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "hbfsm/parallel.hpp"

namespace hbfsm {

namespace {

int ilog2(int v) {
  int b = 0;
  while ((1 << b) < v) ++b;
  return b;
}

// Early stopping is evaluated only on block boundaries so the set of frames
// processed is a pure function of the accumulated counts, independent of the
// worker count.
constexpr long kBlockFrames = 256;
constexpr long long kStopErrors = 500;
constexpr long long kStopUses = 10000;

struct FrameTally {
  long long err_sp = 0, err_sy = 0, uses = 0, degen = 0;
};

FrameTally hbf_frame(const ExperimentConfig& cfg, const Constellation& con, const Codebook* fb,
                     double beta, double rho, Stream fs, long uses_in_frame) {
  FrameTally t;
  const ScenarioChannels sc =
      generate_scenario(cfg.n_a, cfg.k, cfg.n_t, cfg.n_r, cfg.l, fs.fork(1));
  LinkDesign d = design_link(sc, cfg.cb, fb);
  d.beta = beta;
  Stream bits = fs.fork(2);
  Stream noise = fs.fork(3);
  const int bs = cfg.spatial_bits(), bm = cfg.symbol_bits();
  TxUse use;
  use.aa.resize(cfg.k);
  use.labels.resize(cfg.k);
  use.s.resize(cfg.k);
  for (long u = 0; u < uses_in_frame; ++u) {
    for (int i = 0; i < cfg.k; ++i) {
      int a = 0;
      for (int b = 0; b < bs; ++b) a = (a << 1) | int(bits.bit());
      int lab = 0;
      for (int b = 0; b < bm; ++b) lab = (lab << 1) | int(bits.bit());
      use.aa[i] = a;
      use.labels[i] = lab;
      use.s(i) = con.points[size_t(lab)];
    }
    const RxUse rx = transmit(use, d, rho, cfg.sigma2, noise);
    if (rx.degenerate) ++t.degen;
    for (int i = 0; i < cfg.k; ++i) {
      const Detected det = ml_detect(rx.r[i], d, i, rho, con);
      t.err_sp += std::popcount(unsigned(det.aa ^ use.aa[i]));
      t.err_sy += std::popcount(unsigned(det.label ^ use.labels[i]));
    }
    ++t.uses;
  }
  return t;
}

FrameTally sm_frame(const ExperimentConfig& cfg, const Constellation& con,
                    const BaselineConfig& bc, double beta, double rho, Stream fs,
                    long uses_in_frame) {
  FrameTally t;
  const BaselineFrame fr = baseline_frame(bc, fs.fork(1));
  Stream bits = fs.fork(2);
  Stream noise = fs.fork(3);
  const int bs = cfg.spatial_bits(), bm = cfg.symbol_bits();
  std::vector<int> ant(cfg.k), labels(cfg.k);
  CVector s(cfg.k);
  for (long u = 0; u < uses_in_frame; ++u) {
    for (int i = 0; i < cfg.k; ++i) {
      int a = 0;
      for (int b = 0; b < bs; ++b) a = (a << 1) | int(bits.bit());
      int lab = 0;
      for (int b = 0; b < bm; ++b) lab = (lab << 1) | int(bits.bit());
      ant[i] = a;
      labels[i] = lab;
      s(i) = con.points[size_t(lab)];
    }
    const BaselineUse rx = baseline_transmit(bc, fr, ant, s, beta, rho, cfg.sigma2, noise);
    if (rx.degenerate) ++t.degen;
    for (int i = 0; i < cfg.k; ++i) {
      const BaselineDetected det = baseline_detect(rx.r[i], bc, fr, i, beta, rho, con);
      t.err_sp += std::popcount(unsigned(det.ant ^ ant[i]));
      t.err_sy += std::popcount(unsigned(det.label ^ labels[i]));
    }
    ++t.uses;
  }
  return t;
}

long point_trials(const ExperimentConfig& cfg, size_t p) {
  if (cfg.trials_top2 > 0 && p + 2 >= cfg.snr_db.size()) return cfg.trials_top2;
  return cfg.trials;
}

template <class FrameFn>
PointResult run_point(const ExperimentConfig& cfg, double snr_db, long trials_pt, Stream ps,
                      FrameFn&& frame_fn) {
  const double rho = std::pow(10.0, snr_db / 10.0);
  const long frames_total = (trials_pt + cfg.frame - 1) / cfg.frame;
  std::vector<FrameTally> slots(size_t(std::min<long>(kBlockFrames, frames_total)));

  long long err_sp = 0, err_sy = 0, uses = 0, degen = 0;
  for (long f0 = 0; f0 < frames_total; f0 += kBlockFrames) {
    const long nf = std::min<long>(kBlockFrames, frames_total - f0);
    parallel_for(size_t(nf), cfg.workers, [&](size_t idx) {
      const long f = f0 + long(idx);
      const long uif = std::min<long>(cfg.frame, trials_pt - f * cfg.frame);
      slots[idx] = frame_fn(rho, ps.fork(uint64_t(f)), uif);
    });
    for (long i = 0; i < nf; ++i) {
      err_sp += slots[size_t(i)].err_sp;
      err_sy += slots[size_t(i)].err_sy;
      uses += slots[size_t(i)].uses;
      degen += slots[size_t(i)].degen;
    }
    if (cfg.early_stop && err_sp + err_sy >= kStopErrors && uses >= kStopUses) break;
  }

  const int bs = cfg.spatial_bits(), bm = cfg.symbol_bits();
  PointResult pr;
  pr.snr_db = snr_db;
  pr.uses = uses;
  pr.degenerate = degen;
  pr.bits_spatial = uses * cfg.k * bs;
  pr.bits_symbol = uses * cfg.k * bm;
  pr.bits = pr.bits_spatial + pr.bits_symbol;
  pr.errors_spatial = err_sp;
  pr.errors_symbol = err_sy;
  pr.errors = err_sp + err_sy;
  pr.ber = pr.bits > 0 ? double(pr.errors) / double(pr.bits) : 0.0;
  pr.ber_spatial = pr.bits_spatial > 0 ? double(err_sp) / double(pr.bits_spatial) : 0.0;
  pr.ber_symbol = pr.bits_symbol > 0 ? double(err_sy) / double(pr.bits_symbol) : 0.0;
  pr.std_err = pr.bits > 0 ? std::sqrt(pr.ber * (1.0 - pr.ber) / double(pr.bits)) : 0.0;
  return pr;
}

}  // namespace

int ExperimentConfig::spatial_bits() const {
  return scheme == Scheme::hbf_sm ? ilog2(n_a) : ilog2(n_t);
}

int ExperimentConfig::symbol_bits() const { return ilog2(m); }

CurveResult run_ber_experiment(const ExperimentConfig& cfg) {
  if (cfg.snr_db.empty()) throw std::invalid_argument("run_ber_experiment: empty snr grid");
  const Constellation con = build_constellation(cfg.m);
  Stream root = Stream::root(cfg.seed);
  CurveResult out;
  out.seed = cfg.seed;
  out.config_hash = config_hash(cfg);

  if (cfg.scheme == ExperimentConfig::Scheme::hbf_sm) {
    const SystemDims dims{cfg.k, cfg.n_a, cfg.n_t, cfg.n_r, cfg.l};
    out.beta = estimate_beta(dims, cfg.cb, cfg.beta_budget, root.fork(0xB));
    Codebook shared;
    const Codebook* fb = nullptr;
    if (cfg.cb.kind == Codebook::Kind::beamsteering) {
      shared = build_beamsteering_codebook(cfg.cb.bits, cfg.n_t, cfg.cb.conv);
      fb = &shared;
    }
    for (size_t p = 0; p < cfg.snr_db.size(); ++p) {
      Stream ps = root.fork(0x100 + p);
      auto fn = [&](double rho, Stream fs, long uif) {
        return hbf_frame(cfg, con, fb, out.beta, rho, fs, uif);
      };
      out.points.push_back(run_point(cfg, cfg.snr_db[p], point_trials(cfg, p), ps, fn));
    }
  } else {
    BaselineConfig bc;
    bc.k = cfg.k;
    bc.n_t = cfg.n_t;
    bc.m = cfg.m;
    bc.chan = cfg.baseline_chan;
    bc.l = cfg.l;
    out.beta = estimate_baseline_beta(bc, cfg.beta_budget, root.fork(0xB));
    for (size_t p = 0; p < cfg.snr_db.size(); ++p) {
      Stream ps = root.fork(0x100 + p);
      auto fn = [&](double rho, Stream fs, long uif) {
        return sm_frame(cfg, con, bc, out.beta, rho, fs, uif);
      };
      out.points.push_back(run_point(cfg, cfg.snr_db[p], point_trials(cfg, p), ps, fn));
    }
  }
  for (const PointResult& pr : out.points) out.degenerate_total += pr.degenerate;
  return out;
}

bool crossing_snr(const std::vector<PointResult>& pts, double target, double* snr_out) {
  if (target <= 0.0) throw std::invalid_argument("crossing_snr: target must be positive");
  for (size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].ber > target) continue;
    if (i == 0) {
      if (snr_out) *snr_out = pts[i].snr_db;
      return true;
    }
    const double s0 = pts[i - 1].snr_db, s1 = pts[i].snr_db;
    const double b0 = pts[i - 1].ber;
    // an exactly zero estimate carries no slope information; pin the
    // crossing to that point
    const double b1 = pts[i].ber > 0.0 ? pts[i].ber : target;
    const double lt = std::log10(target);
    const double l0 = std::log10(b0), l1 = std::log10(b1);
    double x = s1;
    if (l0 != l1) x = s0 + (s1 - s0) * (lt - l0) / (l1 - l0);
    if (snr_out) *snr_out = x;
    return true;
  }
  return false;
}

ComparisonResult run_comparison(const ExperimentConfig& cfg_a, const ExperimentConfig& cfg_b,
                                double target_ber) {
  ComparisonResult r;
  r.a = run_ber_experiment(cfg_a);
  r.b = run_ber_experiment(cfg_b);
  r.a_reached = crossing_snr(r.a.points, target_ber, &r.a_cross_db);
  r.b_reached = crossing_snr(r.b.points, target_ber, &r.b_cross_db);
  if (r.a_reached && r.b_reached) r.gain_db = r.b_cross_db - r.a_cross_db;
  return r;
}

RateCurve run_rate_experiment(const ExperimentConfig& cfg) {
  if (cfg.snr_db.empty()) throw std::invalid_argument("run_rate_experiment: empty snr grid");
  const Constellation con = build_constellation(cfg.m);
  Stream root = Stream::root(cfg.seed);
  RateCurve out;
  out.seed = cfg.seed;
  out.config_hash = config_hash(cfg);

  Codebook shared;
  const Codebook* fb = nullptr;
  if (cfg.cb.kind == Codebook::Kind::beamsteering) {
    shared = build_beamsteering_codebook(cfg.cb.bits, cfg.n_t, cfg.cb.conv);
    fb = &shared;
  }

  // The selected link gains w_{a,0}^H H_{a,0} f_{a,0} do not depend on rho,
  // so each realization's link is designed once and reused across the sweep.
  const int nreal = cfg.rate_realizations;
  std::vector<std::vector<cd>> gains(static_cast<size_t>(nreal));
  parallel_for(size_t(nreal), cfg.workers, [&](size_t r) {
    const ScenarioChannels sc =
        generate_scenario(cfg.n_a, cfg.k, cfg.n_t, cfg.n_r, cfg.l, root.fork(0x200 + r));
    const LinkDesign d = design_link(sc, cfg.cb, fb);
    std::vector<cd>& g = gains[r];
    g.resize(size_t(cfg.n_a));
    for (int a = 0; a < cfg.n_a; ++a)
      g[size_t(a)] = d.combiner(a, 0).dot(d.v[0][size_t(a) * cfg.k + 0]);
  });

  std::vector<double> sl_exact(static_cast<size_t>(nreal));
  std::vector<double> sl_lower(static_cast<size_t>(nreal));
  std::vector<double> sl_upper(static_cast<size_t>(nreal));
  for (size_t p = 0; p < cfg.snr_db.size(); ++p) {
    const double rho = std::pow(10.0, cfg.snr_db[p] / 10.0);
    const double rho_i = rho / double(cfg.k);
    const double amp = std::sqrt(rho_i);
    parallel_for(size_t(nreal), cfg.workers, [&](size_t r) {
      GaussianMixture gm;
      gm.sigma2 = cfg.sigma2;
      gm.means.resize(size_t(cfg.n_a) * cfg.m);
      for (int a = 0; a < cfg.n_a; ++a)
        for (int mm = 0; mm < cfg.m; ++mm)
          gm.means[size_t(a) * cfg.m + mm] = amp * gains[r][size_t(a)] * con.points[size_t(mm)];
      sl_exact[r] = mutual_information(gm, cfg.quad_points);
      const RateBounds rb = rate_bounds(gm);
      sl_lower[r] = rb.lower;
      sl_upper[r] = rb.upper;
    });
    RatePoint pt;
    pt.snr_db = cfg.snr_db[p];
    for (int r = 0; r < nreal; ++r) {
      pt.exact += sl_exact[size_t(r)];
      pt.lower += sl_lower[size_t(r)];
      pt.upper += sl_upper[size_t(r)];
    }
    pt.exact /= double(nreal);
    pt.lower /= double(nreal);
    pt.upper /= double(nreal);

    if (cfg.mc_check) {
      GaussianMixture gm0;
      gm0.sigma2 = cfg.sigma2;
      gm0.means.resize(size_t(cfg.n_a) * cfg.m);
      for (int a = 0; a < cfg.n_a; ++a)
        for (int mm = 0; mm < cfg.m; ++mm)
          gm0.means[size_t(a) * cfg.m + mm] = amp * gains[0][size_t(a)] * con.points[size_t(mm)];
      pt.mc_checked = true;
      pt.quad_entropy = gm_entropy_quadrature(gm0, cfg.quad_points);
      pt.mc_entropy = gm_entropy_mc(gm0, cfg.mc_samples, root.fork(0x300 + p), &pt.mc_std_err);
    }
    out.points.push_back(pt);
  }
  return out;
}

QuantizationReport run_quantization(const ExperimentConfig& cfg) {
  Stream root = Stream::root(cfg.seed);
  return quantization_error_study(cfg.n_t, cfg.l, cfg.b_list, int(cfg.q_trials), root.fork(0x400),
                                  cfg.cb.conv, cfg.n_r, cfg.workers);
}

std::string config_canonical(const ExperimentConfig& cfg) {
  std::string s;
  char buf[64];
  auto add = [&](const char* key, const std::string& val) {
    s += key;
    s += '=';
    s += val;
    s += ';';
  };
  auto addi = [&](const char* key, long long v) {
    std::snprintf(buf, sizeof buf, "%lld", v);
    add(key, buf);
  };
  auto addf = [&](const char* key, double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    add(key, buf);
  };
  add("scheme", cfg.scheme == ExperimentConfig::Scheme::hbf_sm ? "hbf_sm" : "classical_sm");
  addi("k", cfg.k);
  addi("n_a", cfg.n_a);
  addi("n_t", cfg.n_t);
  addi("n_r", cfg.n_r);
  addi("l", cfg.l);
  addi("m", cfg.m);
  add("codebook", cfg.cb.kind == Codebook::Kind::array_response ? "array_response"
                                                                : "beamsteering");
  addi("b", cfg.cb.bits);
  add("convention", cfg.cb.conv == Convention::sin_phase ? "sin" : "raw");
  {
    std::string grid;
    for (double v : cfg.snr_db) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      if (!grid.empty()) grid += ',';
      grid += buf;
    }
    add("snr_db", grid);
  }
  addi("trials", cfg.trials);
  addi("trials_top2", cfg.trials_top2);
  addi("frame", cfg.frame);
  addi("seed", (long long)cfg.seed);
  addi("beta_budget", cfg.beta_budget);
  addi("early_stop", cfg.early_stop ? 1 : 0);
  addf("sigma2", cfg.sigma2);
  add("baseline_channel",
      cfg.baseline_chan == BaselineConfig::Chan::rayleigh ? "rayleigh" : "geometric");
  addi("rate_realizations", cfg.rate_realizations);
  addi("quad_points", cfg.quad_points);
  addi("mc_samples", cfg.mc_samples);
  addi("mc_check", cfg.mc_check ? 1 : 0);
  {
    std::string bl;
    for (int b : cfg.b_list) {
      std::snprintf(buf, sizeof buf, "%d", b);
      if (!bl.empty()) bl += ',';
      bl += buf;
    }
    add("b_list", bl);
  }
  addi("q_trials", cfg.q_trials);
  addf("target_ber", cfg.target_ber);
  return s;
}

std::string config_hash(const ExperimentConfig& cfg) {
  const std::string canon = config_canonical(cfg);
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : canon) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)h);
  return buf;
}

// workers changes scheduling only, never results, so it stays out of the
// canonical form on purpose

void write_ber_csv(std::ostream& os, const CurveResult& r) {
  os << "snr_db,ber,ber_spatial,ber_symbol,bits,errors,stderr,degenerate\n";
  char buf[256];
  for (const PointResult& p : r.points) {
    std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.10g,%.10g,%lld,%lld,%.10g,%lld\n", p.snr_db,
                  p.ber, p.ber_spatial, p.ber_symbol, p.bits, p.errors, p.std_err, p.degenerate);
    os << buf;
  }
}

void write_rate_csv(std::ostream& os, const RateCurve& r) {
  os << "snr_db,exact,lower,upper\n";
  char buf[160];
  for (const RatePoint& p : r.points) {
    std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.10g,%.10g\n", p.snr_db, p.exact, p.lower,
                  p.upper);
    os << buf;
  }
}

void write_quantization_csv(std::ostream& os, const QuantizationReport& r) {
  os << "B,mean_dc2,max_dc2,fitted_bound\n";
  char buf[160];
  for (size_t i = 0; i < r.b_list.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%d,%.10g,%.10g,%.10g\n", r.b_list[i], r.mean_dc2[i],
                  r.max_dc2[i], r.fitted_bound[i]);
    os << buf;
  }
}

}  // namespace hbfsm
