#include "hbfsm/txrx.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace hbfsm {

CMatrix LinkDesign::h_eff(const std::vector<int>& tuple) const {
  CMatrix he(k, k);
  for (int i = 0; i < k; ++i) {
    const CVector& wi = combiner(tuple[i], i);
    for (int j = 0; j < k; ++j) he(i, j) = wi.dot(v[i][size_t(tuple[j]) * k + j]);
  }
  return he;
}

LinkDesign design_link(const ScenarioChannels& sc, const CodebookSpec& spec,
                       const Codebook* shared) {
  LinkDesign d;
  d.n_a = sc.n_a;
  d.k = sc.k;
  d.n_t = sc.n_t;
  d.n_r = sc.n_r;
  d.f.resize(size_t(sc.n_a) * sc.k);
  d.w.resize(size_t(sc.n_a) * sc.k);

  Codebook local;
  const Codebook* fb = shared;
  if (spec.kind == Codebook::Kind::beamsteering && !fb) {
    local = build_beamsteering_codebook(spec.bits, sc.n_t, spec.conv);
    fb = &local;
  }

  for (int a = 0; a < sc.n_a; ++a)
    for (int i = 0; i < sc.k; ++i) {
      const ChannelRealization& ch = sc.at(a, i);
      if (spec.kind == Codebook::Kind::array_response) {
        const Codebook fa = build_array_response_codebook(ch.paths, sc.n_t);
        d.f[size_t(a) * sc.k + i] = select_beamformer(ch, fa).f;
      } else {
        d.f[size_t(a) * sc.k + i] = select_beamformer(ch, *fb).f;
      }
    }

  // product cache H_{a,i} f_{a,j}
  d.v.assign(sc.k, std::vector<CVector>(size_t(sc.n_a) * sc.k));
  for (int i = 0; i < sc.k; ++i)
    for (int a = 0; a < sc.n_a; ++a)
      for (int j = 0; j < sc.k; ++j)
        d.v[i][size_t(a) * sc.k + j] = sc.at(a, i).H * d.f[size_t(a) * sc.k + j];

  // per-user stack and combiners, W_i = (H_i^+)^H
  d.h_user.resize(sc.k);
  for (int i = 0; i < sc.k; ++i) {
    CMatrix hi(sc.n_r, sc.n_a);
    for (int a = 0; a < sc.n_a; ++a) hi.col(a) = d.v[i][size_t(a) * sc.k + i];
    d.h_user[i] = hi;
    const CMatrix wi = pseudo_inverse(hi).adjoint();  // n_r x n_a
    for (int a = 0; a < sc.n_a; ++a) d.w[size_t(a) * sc.k + i] = wi.col(a);
  }
  return d;
}

// closed-form 2x2 path: singular values from the Gram trace/determinant,
// adjugate inverse when safely invertible
static bool pinv2x2(const CMatrix& he, CMatrix& out, double& cond) {
  const cd a = he(0, 0), b = he(0, 1), c = he(1, 0), e = he(1, 1);
  const cd det = a * e - b * c;
  const double t = std::norm(a) + std::norm(b) + std::norm(c) + std::norm(e);
  const double d2 = std::norm(det);
  double disc = t * t - 4.0 * d2;
  if (disc < 0.0) disc = 0.0;
  const double root = std::sqrt(disc);
  const double s1 = std::sqrt(0.5 * (t + root));
  const double s2sq = 0.5 * (t - root);
  const double s2 = s2sq > 0.0 ? std::sqrt(s2sq) : 0.0;
  cond = s2 > 0.0 ? s1 / s2 : std::numeric_limits<double>::infinity();
  if (!(cond <= 1e12)) return false;  // fall back to SVD pinv path
  out.resize(2, 2);
  const cd inv = cd(1, 0) / det;
  out(0, 0) = e * inv;
  out(0, 1) = -b * inv;
  out(1, 0) = -c * inv;
  out(1, 1) = a * inv;
  return true;
}

Precoder zf_precoder(const CMatrix& h_eff, double beta) {
  Precoder p;
  if (h_eff.rows() == 2 && h_eff.cols() == 2) {
    CMatrix inv;
    if (pinv2x2(h_eff, inv, p.cond)) {
      p.p = beta * inv;
      return p;
    }
    p.degenerate = true;
    p.p = beta * pseudo_inverse(h_eff);
    return p;
  }
  SvdInfo info;
  const CMatrix pin = pseudo_inverse(h_eff, &info);
  p.cond = info.smin > 0.0 ? info.smax / info.smin : std::numeric_limits<double>::infinity();
  p.degenerate = !(p.cond <= 1e12) || info.rank < std::min(h_eff.rows(), h_eff.cols());
  p.p = beta * pin;
  return p;
}

double beta_sample(const CMatrix& h_eff) {
  const int k = int(h_eff.rows());
  const CMatrix pin = pseudo_inverse(h_eff);
  const double tr = pin.squaredNorm();  // tr(P P^H) of the unscaled pinv
  return std::sqrt(double(k) / tr);
}

double estimate_beta(const SystemDims& dims, const CodebookSpec& spec, long n_realizations,
                     Stream s) {
  if (n_realizations < 1) throw std::invalid_argument("estimate_beta: n_realizations < 1");
  Codebook shared;
  const Codebook* fb = nullptr;
  if (spec.kind == Codebook::Kind::beamsteering) {
    shared = build_beamsteering_codebook(spec.bits, dims.n_t, spec.conv);
    fb = &shared;
  }
  double acc = 0.0;
  std::vector<int> tuple(dims.k);
  for (long r = 0; r < n_realizations; ++r) {
    Stream rs = s.fork(uint64_t(r));
    const ScenarioChannels sc =
        generate_scenario(dims.n_a, dims.k, dims.n_t, dims.n_r, dims.l, rs.fork(0));
    Stream ts = rs.fork(1);
    for (int i = 0; i < dims.k; ++i) tuple[i] = int(ts.below(uint64_t(dims.n_a)));
    const LinkDesign d = design_link(sc, spec, fb);
    acc += beta_sample(d.h_eff(tuple));
  }
  return acc / double(n_realizations);
}

RxUse transmit(const TxUse& use, const LinkDesign& d, double rho, double sigma2,
               Stream& noise) {
  const int k = d.k;
  const Precoder pre = zf_precoder(d.h_eff(use.aa), d.beta);
  const CVector x = pre.p * use.s;
  const double srho = std::sqrt(rho);
  const double sn = std::sqrt(sigma2);
  RxUse rx;
  rx.degenerate = pre.degenerate;
  rx.cond = pre.cond;
  rx.r.resize(k);
  for (int i = 0; i < k; ++i) {
    CVector ri = CVector::Zero(d.n_r);
    for (int j = 0; j < k; ++j) ri.noalias() += d.v[i][size_t(use.aa[j]) * k + j] * x(j);
    ri *= srho;
    if (sigma2 > 0.0)
      for (int c = 0; c < d.n_r; ++c) ri(c) += sn * noise.cnormal();
    rx.r[i] = std::move(ri);
  }
  return rx;
}

Detected ml_detect(const CVector& r_i, const LinkDesign& d, int user, double rho,
                   const Constellation& c) {
  const double inv_scale = 1.0 / (d.beta * std::sqrt(rho));
  Detected best;
  double best_d = std::numeric_limits<double>::infinity();
  for (int a = 0; a < d.n_a; ++a) {
    const cd z = d.combiner(a, user).dot(r_i) * inv_scale;
    for (int m = 0; m < c.m; ++m) {
      const double dist = std::norm(z - c.points[m]);
      if (dist < best_d) {
        best_d = dist;
        best.aa = a;
        best.label = m;
      }
    }
  }
  return best;
}

}  // namespace hbfsm
