#include "hbfsm/baseline.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "hbfsm/channel.hpp"

namespace hbfsm {

BaselineFrame baseline_frame(const BaselineConfig& cfg, Stream s) {
  BaselineFrame fr;
  fr.g.resize(cfg.k);
  for (int i = 0; i < cfg.k; ++i) {
    Stream ui = s.fork(uint64_t(i));
    CVector row(cfg.k * cfg.n_t);
    if (cfg.chan == BaselineConfig::Chan::rayleigh) {
      for (int c = 0; c < cfg.k * cfg.n_t; ++c) row(c) = ui.cnormal();
    } else {
      // one geometric 1 x n_t channel per sub-group
      for (int j = 0; j < cfg.k; ++j) {
        const ChannelRealization ch = generate_channel(cfg.n_t, 1, cfg.l, ui.fork(uint64_t(j)));
        row.segment(j * cfg.n_t, cfg.n_t) = ch.H.row(0);
      }
    }
    fr.g[i] = std::move(row);
  }
  return fr;
}

// active-column composite channel: H_act(i, j) = g_i[ant_j + j * n_t]
static CMatrix active_matrix(const BaselineConfig& cfg, const BaselineFrame& fr,
                             const std::vector<int>& ant) {
  CMatrix h(cfg.k, cfg.k);
  for (int i = 0; i < cfg.k; ++i)
    for (int j = 0; j < cfg.k; ++j) h(i, j) = fr.g[i](ant[j] + j * cfg.n_t);
  return h;
}

// x = beta * H_act^+ diag(H_act) s keeps each user's own-antenna gain in the
// post-cancellation channel; the unscaled transfer T = H_act^+ diag(H_act)
// is also what the power normalization averages.
static CMatrix dz_transfer(const CMatrix& h_act, bool* degenerate, double* cond_out) {
  SvdInfo info;
  const CMatrix pin = pseudo_inverse(h_act, &info);
  const double cond =
      info.smin > 0.0 ? info.smax / info.smin : std::numeric_limits<double>::infinity();
  if (cond_out) *cond_out = cond;
  if (degenerate) *degenerate = !(cond <= 1e12) || info.rank < h_act.rows();
  return pin * h_act.diagonal().asDiagonal();
}

double baseline_beta_sample(const BaselineConfig& cfg, const BaselineFrame& fr,
                            const std::vector<int>& ant) {
  const CMatrix t = dz_transfer(active_matrix(cfg, fr, ant), nullptr, nullptr);
  return std::sqrt(double(cfg.k) / t.squaredNorm());
}

double estimate_baseline_beta(const BaselineConfig& cfg, long n_realizations, Stream s) {
  if (n_realizations < 1)
    throw std::invalid_argument("estimate_baseline_beta: n_realizations < 1");
  double acc = 0.0;
  std::vector<int> ant(cfg.k);
  for (long r = 0; r < n_realizations; ++r) {
    Stream rs = s.fork(uint64_t(r));
    const BaselineFrame fr = baseline_frame(cfg, rs.fork(0));
    Stream ts = rs.fork(1);
    for (int i = 0; i < cfg.k; ++i) ant[i] = int(ts.below(uint64_t(cfg.n_t)));
    acc += baseline_beta_sample(cfg, fr, ant);
  }
  return acc / double(n_realizations);
}

BaselineUse baseline_transmit(const BaselineConfig& cfg, const BaselineFrame& fr,
                              const std::vector<int>& ant, const CVector& s, double beta,
                              double rho, double sigma2, Stream& noise) {
  const CMatrix h_act = active_matrix(cfg, fr, ant);
  BaselineUse use;
  const CMatrix t = dz_transfer(h_act, &use.degenerate, &use.cond);
  const CVector x = beta * (t * s);
  const CVector rx = h_act * x;
  const double srho = std::sqrt(rho);
  const double sn = std::sqrt(sigma2);
  use.r.resize(cfg.k);
  for (int i = 0; i < cfg.k; ++i) {
    cd r = srho * rx(i);
    if (sigma2 > 0.0) r += sn * noise.cnormal();
    use.r[i] = r;
  }
  return use;
}

BaselineDetected baseline_detect(cd r_i, const BaselineConfig& cfg, const BaselineFrame& fr,
                                 int user, double beta, double rho, const Constellation& c) {
  const cd z = r_i / (beta * std::sqrt(rho));
  BaselineDetected best;
  double best_d = std::numeric_limits<double>::infinity();
  for (int t = 0; t < cfg.n_t; ++t) {
    const cd g = fr.g[user](t + user * cfg.n_t);
    for (int m = 0; m < c.m; ++m) {
      const double dist = std::norm(z - g * c.points[m]);
      if (dist < best_d) {
        best_d = dist;
        best.ant = t;
        best.label = m;
      }
    }
  }
  return best;
}

}  // namespace hbfsm
