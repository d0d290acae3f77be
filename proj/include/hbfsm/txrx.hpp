#pragma once

#include <vector>

#include "hbfsm/codebook.hpp"
#include "hbfsm/constellation.hpp"

namespace hbfsm {

struct CodebookSpec {
  Codebook::Kind kind = Codebook::Kind::array_response;
  int bits = 0;  // beamsteering only
  Convention conv = Convention::sin_phase;
};

struct SystemDims {
  int k = 2, n_a = 4, n_t = 8, n_r = 1, l = 3;
};

// Per-frame link design: analog beamformers f_{a,i}, digital combiners
// w_{a,i} from W_i = (H_i^+)^H, and the cached products H_{a,i} f_{a,j}
// from which the tuple-dependent effective channel is assembled.
struct LinkDesign {
  int n_a = 0, k = 0, n_t = 0, n_r = 0;
  double beta = 1.0;
  std::vector<CVector> f;                 // index a*k + i, length n_t
  std::vector<CVector> w;                 // index a*k + i, length n_r
  std::vector<CMatrix> h_user;            // per user i: n_r x n_a stack [H_{a,i} f_{a,i}]_a
  std::vector<std::vector<CVector>> v;    // v[i][a*k + j] = H_{a,i} f_{a,j}, length n_r

  const CVector& combiner(int a, int i) const { return w[size_t(a) * k + i]; }
  const CVector& beamformer(int a, int i) const { return f[size_t(a) * k + i]; }

  // H_eff for one AA-selection tuple (zero-based a_i per user)
  CMatrix h_eff(const std::vector<int>& tuple) const;
};

// Builds beamformers (for array_response, each channel selects among its own
// departure-angle responses; for beamsteering, all select from `shared`,
// which is built on demand when null), then combiners and product caches.
LinkDesign design_link(const ScenarioChannels& sc, const CodebookSpec& spec,
                       const Codebook* shared = nullptr);

struct Precoder {
  CMatrix p;
  bool degenerate = false;  // condition number > 1e12 (or rank deficient)
  double cond = 0.0;
};

// P = beta * H_eff^+, with the degenerate flag raised past cond 1e12.
Precoder zf_precoder(const CMatrix& h_eff, double beta);

// One normalization sample: sqrt(k / tr(H_eff^+ (H_eff^+)^H)).
double beta_sample(const CMatrix& h_eff);

// Mean of beta_sample over fresh scenarios and uniform AA tuples.
double estimate_beta(const SystemDims& dims, const CodebookSpec& spec, long n_realizations,
                     Stream s);

struct TxUse {
  std::vector<int> aa;      // zero-based selected array per user
  std::vector<int> labels;  // constellation labels per user
  CVector s;                // stacked symbols
};

struct RxUse {
  std::vector<CVector> r;   // per user, length n_r
  bool degenerate = false;
  double cond = 0.0;
};

// r_i = sqrt(rho) sum_j H_{a_j,i} f_{a_j,j} x_j + n_i with x = P s.
// Noise is CN(0, sigma2) per receive dimension, drawn user-major.
RxUse transmit(const TxUse& use, const LinkDesign& d, double rho, double sigma2,
               Stream& noise);

struct Detected {
  int aa = 0;     // zero-based
  int label = 0;
};

// Exhaustive argmin over (a, m) of |w_{a,i}^H r_i / (beta sqrt(rho)) - s_m|^2;
// ties resolve to the lowest (a, label) pair.
Detected ml_detect(const CVector& r_i, const LinkDesign& d, int user, double rho,
                   const Constellation& c);

}  // namespace hbfsm
