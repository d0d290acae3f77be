#pragma once

#include <iosfwd>
#include <vector>

#include "hbfsm/numerics.hpp"
#include "hbfsm/random.hpp"

namespace hbfsm {

// One multipath cluster set: per path a complex gain and the departure /
// arrival angles, both drawn uniform on (0, 2pi].
struct PathSet {
  std::vector<cd> alpha;
  std::vector<double> aod;
  std::vector<double> aoa;
  int paths() const { return int(alpha.size()); }
};

struct ChannelRealization {
  CMatrix H;  // n_r x n_t
  PathSet paths;
  int n_t = 0;
  int n_r = 0;
};

// The (array a, user i) grid of channels between one BS and K users.
struct ScenarioChannels {
  int n_a = 0, k = 0, n_t = 0, n_r = 0, l = 0;
  std::vector<ChannelRealization> ch;  // index a * k + i

  const ChannelRealization& at(int a, int i) const { return ch[size_t(a) * k + i]; }
  ChannelRealization& at(int a, int i) { return ch[size_t(a) * k + i]; }
};

// Half-wavelength ULA response, (1/sqrt(n)) [1, e^{j pi sin},...]; unit norm.
CVector steering_vector(double angle, int n);

// Same functional form with the phase argument used directly (no sin);
// used by the raw-phase beamsteering codebook variant.
CVector steering_vector_raw(double phase, int n);

CMatrix channel_from_paths(const PathSet& p, int n_t, int n_r);

// Geometric L-path channel, sqrt(n_t n_r / L) sum_l alpha_l a_R a_T^H.
// Draw order per path: alpha, aod, aoa.
ChannelRealization generate_channel(int n_t, int n_r, int l, Stream s);

// N_A*K independent channels; the (a, i) entry comes from a sub-stream keyed
// by (a, i) only, so growing n_a leaves existing entries unchanged.
ScenarioChannels generate_scenario(int n_a, int k, int n_t, int n_r, int l, Stream s);

// Path dump for regression fixtures: a,i,l,alpha_re,alpha_im,aod,aoa
void dump_paths_csv(std::ostream& os, const ScenarioChannels& sc);

}  // namespace hbfsm
