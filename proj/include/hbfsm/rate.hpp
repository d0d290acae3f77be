#pragma once

#include <vector>

#include "hbfsm/txrx.hpp"

namespace hbfsm {

// Equal-weight complex Gaussian mixture: the received-signal law of one user
// after combining, one component per (AA, symbol) hypothesis.
struct GaussianMixture {
  std::vector<cd> means;
  double sigma2 = 1.0;
};

double gm_density(cd y, const GaussianMixture& gm);

// Differential entropy in bits. The integral is decomposed by component,
// h = sum_j w_j E_j[-log2 f], and each expectation is evaluated by midpoint
// quadrature on that component's own [mu_j +- 8 sigma]^2 window, so widely
// separated mixtures stay resolved at any spread. grid is points per axis
// per component; the minimum budget is 256.
double gm_entropy_quadrature(const GaussianMixture& gm, int grid = 256);

// Monte Carlo estimate of the same entropy; n >= 1e5.
double gm_entropy_mc(const GaussianMixture& gm, long n, Stream s, double* std_err = nullptr);

// I(y; x) = h(y) - log2(pi e sigma2), clamped at zero.
double mutual_information(const GaussianMixture& gm, int grid = 256);

struct RateBounds {
  double lower = 0.0;
  double upper = 0.0;
};

// lower: best of two pairwise-distance mixture-entropy lower bounds minus
// the noise entropy, floored at 0; upper: min(log2 #components, Gaussian
// max-entropy bound log2(var(Y)/sigma2)).
RateBounds rate_bounds(const GaussianMixture& gm);

// Mixture for one user's marginal link: means sqrt(rho_i) w_{a,i}^H H_{a,i}
// f_{a,i} s_m over all (a, m), ordered a-major.
GaussianMixture user_mixture(const LinkDesign& d, int user, const Constellation& c,
                             double rho_i, double sigma2);

}  // namespace hbfsm
