#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "hbfsm/baseline.hpp"
#include "hbfsm/sim.hpp"

using namespace hbfsm;

namespace {
BaselineConfig cfg2x4() {
  BaselineConfig c;
  c.k = 2;
  c.n_t = 4;
  c.m = 4;
  return c;
}
}  // namespace

TEST_CASE("frame shapes and Rayleigh statistics") {
  const BaselineConfig c = cfg2x4();
  double e2 = 0.0;
  long n = 0;
  for (int t = 0; t < 1500; ++t) {
    const BaselineFrame fr = baseline_frame(c, Stream(t));
    REQUIRE(fr.g.size() == 2);
    for (const CVector& row : fr.g) {
      REQUIRE(row.size() == 8);
      e2 += row.squaredNorm();
      n += row.size();
    }
  }
  CHECK(e2 / double(n) == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("geometric variant carries steering energy") {
  BaselineConfig c = cfg2x4();
  c.chan = BaselineConfig::Chan::geometric;
  c.l = 3;
  double e2 = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const BaselineFrame fr = baseline_frame(c, Stream(t));
    for (const CVector& row : fr.g) e2 += row.squaredNorm();
  }
  // per group E||g||^2 = n_t, two groups per row, two rows
  CHECK(e2 / (1000.0 * 2.0) == doctest::Approx(2.0 * c.n_t).epsilon(0.1));
}

TEST_CASE("transfer preserves the active-antenna gain and cancels cross terms") {
  const BaselineConfig c = cfg2x4();
  Stream master(11);
  for (int t = 0; t < 100; ++t) {
    const BaselineFrame fr = baseline_frame(c, master.fork(t));
    Stream ts = master.fork(5000 + t);
    std::vector<int> ant{int(ts.below(4)), int(ts.below(4))};
    CVector s(2);
    s << cd(0.6, -0.2), cd(-1.0, 0.4);
    Stream quiet(0);
    const double beta = 0.8, rho = 9.0;
    const BaselineUse rx = baseline_transmit(c, fr, ant, s, beta, rho, 0.0, quiet);
    if (rx.degenerate) continue;
    for (int i = 0; i < 2; ++i) {
      const cd gain = fr.g[i](ant[i] + i * c.n_t);
      const cd want = beta * std::sqrt(rho) * gain * s(i);
      CHECK(std::abs(rx.r[i] - want) < 1e-9 * std::max(1.0, std::abs(want)));
    }
  }
}

TEST_CASE("zero-noise detection round trip") {
  const BaselineConfig c = cfg2x4();
  const Constellation con = build_constellation(4);
  Stream master(21);
  long total = 0, correct = 0, degenerate_misses = 0;
  for (int t = 0; t < 200; ++t) {
    const BaselineFrame fr = baseline_frame(c, master.fork(t));
    Stream bits = master.fork(7000 + t);
    Stream quiet(0);
    for (int u = 0; u < 50; ++u) {
      std::vector<int> ant{int(bits.below(4)), int(bits.below(4))};
      std::vector<int> labels{int(bits.below(4)), int(bits.below(4))};
      CVector s(2);
      s << con.points[size_t(labels[0])], con.points[size_t(labels[1])];
      const BaselineUse rx = baseline_transmit(c, fr, ant, s, 1.0, 16.0, 0.0, quiet);
      bool all = true;
      for (int i = 0; i < 2; ++i) {
        const BaselineDetected det = baseline_detect(rx.r[i], c, fr, i, 1.0, 16.0, con);
        all &= det.ant == ant[i] && det.label == labels[i];
      }
      ++total;
      if (all)
        ++correct;
      else if (rx.degenerate)
        ++degenerate_misses;
    }
  }
  CHECK(correct + degenerate_misses == total);
  CHECK(double(correct) / double(total) > 0.999);
}

TEST_CASE("detection ties resolve to the lowest pair") {
  BaselineConfig c;
  c.k = 1;
  c.n_t = 2;
  c.m = 2;
  BaselineFrame fr;
  fr.g.assign(1, CVector::Zero(2));
  fr.g[0](0) = cd(1.0, 0.0);
  fr.g[0](1) = cd(1.0, 0.0);  // duplicate gains: antennas indistinguishable
  const Constellation con = build_constellation(2);
  const BaselineDetected det = baseline_detect(cd(1.0, 0.0), c, fr, 0, 1.0, 1.0, con);
  CHECK(det.ant == 0);
  CHECK(det.label == 0);
}

TEST_CASE("K=1 reduces to the scalar single-user model") {
  BaselineConfig c;
  c.k = 1;
  c.n_t = 4;
  c.m = 4;
  const Constellation con = build_constellation(4);
  Stream master(31);
  for (int t = 0; t < 50; ++t) {
    const BaselineFrame fr = baseline_frame(c, master.fork(t));
    Stream bits = master.fork(9000 + t);
    for (int u = 0; u < 20; ++u) {
      const int ant = int(bits.below(4));
      const int lab = int(bits.below(4));
      CVector s(1);
      s << con.points[size_t(lab)];
      Stream nz = master.fork(40000 + t * 100 + u);
      Stream nz2 = nz;  // identical noise for both models
      const double beta = 0.7, rho = 5.0;
      const BaselineUse rx = baseline_transmit(c, fr, {ant}, s, beta, rho, 1.0, nz);
      // scalar oracle: r = beta sqrt(rho) g_c s + n
      const cd n = std::sqrt(1.0) * nz2.cnormal();
      const cd want = beta * std::sqrt(rho) * fr.g[0](ant) * s(0) + n;
      if (rx.degenerate) continue;
      CHECK(std::abs(rx.r[0] - want) < 1e-9 * std::max(1.0, std::abs(want)));

      // detector oracle: brute-force argmin over (t, m) of |z - g_t s_m|
      const cd z = rx.r[0] / (beta * std::sqrt(rho));
      double best = 1e300;
      int bt = 0, bm = 0;
      for (int tt = 0; tt < 4; ++tt)
        for (int mm = 0; mm < 4; ++mm) {
          const double dd = std::norm(z - fr.g[0](tt) * con.points[size_t(mm)]);
          if (dd < best) {
            best = dd;
            bt = tt;
            bm = mm;
          }
        }
      const BaselineDetected det = baseline_detect(rx.r[0], c, fr, 0, beta, rho, con);
      CHECK(det.ant == bt);
      CHECK(det.label == bm);
    }
  }
}

TEST_CASE("beta estimate is deterministic and positive") {
  const BaselineConfig c = cfg2x4();
  const double b1 = estimate_baseline_beta(c, 300, Stream(41));
  const double b2 = estimate_baseline_beta(c, 300, Stream(41));
  CHECK(b1 == b2);
  CHECK(b1 > 0.0);
}

TEST_CASE("classical BER falls with SNR") {
  ExperimentConfig cfg;
  cfg.scheme = ExperimentConfig::Scheme::classical_sm;
  cfg.k = 2;
  cfg.n_t = 4;
  cfg.m = 4;
  cfg.snr_db = {0.0, 12.0};
  cfg.trials = 20000;
  cfg.frame = 100;
  cfg.seed = 9090;
  cfg.beta_budget = 500;
  cfg.early_stop = false;
  const CurveResult r = run_ber_experiment(cfg);
  REQUIRE(r.points.size() == 2);
  const PointResult& lo = r.points[0];
  const PointResult& hi = r.points[1];
  CHECK(lo.ber > hi.ber + 2.0 * (lo.std_err + hi.std_err));
}
