#pragma once

#include <vector>

#include "hbfsm/constellation.hpp"
#include "hbfsm/random.hpp"

namespace hbfsm {

// Classical multi-user SM reference scheme: every user owns a dedicated
// n_t-antenna sub-group at the BS; spatial bits pick one antenna in the
// group, and a ZF precoder on the K active columns cancels the cross-user
// terms while preserving each user's own active-antenna gain (the spatial
// information), so r_i = beta sqrt(rho) g_{c_i} s_i + n_i. Receivers have a
// single antenna.
struct BaselineConfig {
  int k = 2;
  int n_t = 4;       // antennas per user sub-group, power of 2
  int m = 4;
  enum class Chan { rayleigh, geometric } chan = Chan::rayleigh;
  int l = 3;         // paths of the geometric variant
};

// Per-frame channel state: per user one 1 x (k*n_t) row.
struct BaselineFrame {
  std::vector<CVector> g;  // g[i], length k*n_t (row of user i, stored as vector)
};

BaselineFrame baseline_frame(const BaselineConfig& cfg, Stream s);

// One power-normalization sample for a uniformly drawn antenna tuple.
double baseline_beta_sample(const BaselineConfig& cfg, const BaselineFrame& fr,
                            const std::vector<int>& ant);

double estimate_baseline_beta(const BaselineConfig& cfg, long n_realizations, Stream s);

struct BaselineUse {
  std::vector<cd> r;        // per user scalar receive sample
  bool degenerate = false;
  double cond = 0.0;
};

// ant: zero-based active antenna per user (within its own group); s: symbols.
BaselineUse baseline_transmit(const BaselineConfig& cfg, const BaselineFrame& fr,
                              const std::vector<int>& ant, const CVector& s, double beta,
                              double rho, double sigma2, Stream& noise);

struct BaselineDetected {
  int ant = 0;
  int label = 0;
};

// ML over the user's own n_t gains x M symbols; ties -> lowest (ant, label).
BaselineDetected baseline_detect(cd r_i, const BaselineConfig& cfg, const BaselineFrame& fr,
                                 int user, double beta, double rho, const Constellation& c);

}  // namespace hbfsm
