#include "hbfsm/channel.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace hbfsm {

static CVector steering_from_arg(double arg, int n) {
  if (n < 1) throw std::invalid_argument("steering_vector: n < 1");
  CVector v(n);
  const double scale = 1.0 / std::sqrt(double(n));
  for (int i = 0; i < n; ++i) {
    const double ph = M_PI * arg * i;
    v(i) = cd(scale * std::cos(ph), scale * std::sin(ph));
  }
  return v;
}

CVector steering_vector(double angle, int n) { return steering_from_arg(std::sin(angle), n); }

CVector steering_vector_raw(double phase, int n) { return steering_from_arg(phase, n); }

CMatrix channel_from_paths(const PathSet& p, int n_t, int n_r) {
  const int l = p.paths();
  if (l < 1) throw std::invalid_argument("channel_from_paths: no paths");
  const double scale = std::sqrt(double(n_t) * double(n_r) / double(l));
  CMatrix h = CMatrix::Zero(n_r, n_t);
  for (int i = 0; i < l; ++i) {
    const CVector ar = steering_vector(p.aoa[i], n_r);
    const CVector at = steering_vector(p.aod[i], n_t);
    h.noalias() += (scale * p.alpha[i]) * (ar * at.adjoint());
  }
  return h;
}

ChannelRealization generate_channel(int n_t, int n_r, int l, Stream s) {
  if (n_t < 1 || n_r < 1 || l < 1)
    throw std::invalid_argument("generate_channel: bad dimensions");
  PathSet p;
  p.alpha.resize(l);
  p.aod.resize(l);
  p.aoa.resize(l);
  for (int i = 0; i < l; ++i) {
    p.alpha[i] = s.cnormal();
    p.aod[i] = s.angle();
    p.aoa[i] = s.angle();
  }
  ChannelRealization c;
  c.paths = std::move(p);
  c.n_t = n_t;
  c.n_r = n_r;
  c.H = channel_from_paths(c.paths, n_t, n_r);
  return c;
}

ScenarioChannels generate_scenario(int n_a, int k, int n_t, int n_r, int l, Stream s) {
  if (n_a < 1 || k < 1) throw std::invalid_argument("generate_scenario: bad dimensions");
  ScenarioChannels sc;
  sc.n_a = n_a;
  sc.k = k;
  sc.n_t = n_t;
  sc.n_r = n_r;
  sc.l = l;
  sc.ch.reserve(size_t(n_a) * k);
  for (int a = 0; a < n_a; ++a)
    for (int i = 0; i < k; ++i)
      sc.ch.push_back(generate_channel(n_t, n_r, l, s.fork((uint64_t(a) << 20) | uint64_t(i))));
  return sc;
}

void dump_paths_csv(std::ostream& os, const ScenarioChannels& sc) {
  os << "a,i,l,alpha_re,alpha_im,aod,aoa\n";
  char buf[160];
  for (int a = 0; a < sc.n_a; ++a)
    for (int i = 0; i < sc.k; ++i) {
      const PathSet& p = sc.at(a, i).paths;
      for (int l = 0; l < p.paths(); ++l) {
        std::snprintf(buf, sizeof buf, "%d,%d,%d,%.17g,%.17g,%.17g,%.17g\n", a + 1, i + 1,
                      l + 1, p.alpha[l].real(), p.alpha[l].imag(), p.aod[l], p.aoa[l]);
        os << buf;
      }
    }
}

}  // namespace hbfsm
