#include "hbfsm/rate.hpp"

#include <cmath>
#include <stdexcept>

namespace hbfsm {

static constexpr double kSpanSigmas = 8.0;

double gm_density(cd y, const GaussianMixture& gm) {
  if (gm.sigma2 <= 0.0) throw std::invalid_argument("gm_density: sigma2 <= 0");
  const double inv_s2 = 1.0 / gm.sigma2;
  double acc = 0.0;
  for (const cd& mu : gm.means) acc += std::exp(-std::norm(y - mu) * inv_s2);
  return acc / (M_PI * gm.sigma2 * double(gm.means.size()));
}

double gm_entropy_quadrature(const GaussianMixture& gm, int grid) {
  if (gm.means.empty()) throw std::invalid_argument("gm_entropy: empty mixture");
  if (gm.sigma2 <= 0.0) throw std::invalid_argument("gm_entropy: sigma2 <= 0");
  if (grid < 256) throw std::invalid_argument("gm_entropy: quadrature grid below 256");

  const double sig = std::sqrt(gm.sigma2);
  const double half = kSpanSigmas * sig;
  const double step = 2.0 * half / grid;
  const double inv_s2 = 1.0 / gm.sigma2;
  const double cell = step * step;
  const size_t n = gm.means.size();
  const double w = 1.0 / double(n);
  const double log_norm = std::log(M_PI * gm.sigma2 * double(n));

  double h_nats = 0.0;
  for (const cd& mu : gm.means) {
    for (int ix = 0; ix < grid; ++ix) {
      const double x = mu.real() - half + (ix + 0.5) * step;
      for (int iy = 0; iy < grid; ++iy) {
        const double y = mu.imag() - half + (iy + 0.5) * step;
        const cd z(x, y);
        double acc = 0.0;
        for (size_t j = 0; j < n; ++j) acc += std::exp(-std::norm(z - gm.means[j]) * inv_s2);
        // -log f = log_norm - log(acc); weight by this component's own density
        const double p = std::exp(-std::norm(z - mu) * inv_s2) / (M_PI * gm.sigma2);
        h_nats += p * (log_norm - std::log(acc)) * cell;
      }
    }
  }
  return w * h_nats / std::log(2.0);
}

double gm_entropy_mc(const GaussianMixture& gm, long n, Stream s, double* std_err) {
  if (gm.means.empty()) throw std::invalid_argument("gm_entropy: empty mixture");
  if (gm.sigma2 <= 0.0) throw std::invalid_argument("gm_entropy: sigma2 <= 0");
  if (n < 100000) throw std::invalid_argument("gm_entropy: MC budget below 1e5");

  const double sig = std::sqrt(gm.sigma2);
  double sum = 0.0, sumsq = 0.0;
  for (long i = 0; i < n; ++i) {
    const cd mu = gm.means[s.below(gm.means.size())];
    const cd y = mu + sig * s.cnormal();
    const double v = -std::log2(gm_density(y, gm));
    sum += v;
    sumsq += v * v;
  }
  const double mean = sum / double(n);
  if (std_err) {
    const double var = (sumsq - sum * sum / double(n)) / double(n - 1);
    *std_err = std::sqrt(std::max(var, 0.0) / double(n));
  }
  return mean;
}

double mutual_information(const GaussianMixture& gm, int grid) {
  const double mi = gm_entropy_quadrature(gm, grid) - std::log2(M_PI * M_E * gm.sigma2);
  return mi > 0.0 ? mi : 0.0;
}

RateBounds rate_bounds(const GaussianMixture& gm) {
  if (gm.means.empty()) throw std::invalid_argument("rate_bounds: empty mixture");
  if (gm.sigma2 <= 0.0) throw std::invalid_argument("rate_bounds: sigma2 <= 0");
  const size_t n = gm.means.size();
  const double w = 1.0 / double(n);
  const double h_noise = std::log2(M_PI * M_E * gm.sigma2);

  // pairwise lower bound: h >= -log2 sum_ij w_i w_j N(mu_i - mu_j; 2 sigma2)
  double pair = 0.0;
  // Chernoff alpha=1/2 bound: h >= h_noise - sum_i w log2 sum_j w e^{-d^2/4s2}
  double chern = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double row_pair = 0.0, row_ch = 0.0;
    for (size_t j = 0; j < n; ++j) {
      const double d2 = std::norm(gm.means[i] - gm.means[j]);
      row_pair += std::exp(-d2 / (2.0 * gm.sigma2));
      row_ch += std::exp(-d2 / (4.0 * gm.sigma2));
    }
    pair += w * w * row_pair / (2.0 * M_PI * gm.sigma2);
    chern += w * std::log2(w * row_ch);
  }
  const double h_pair = -std::log2(pair);
  const double h_chern = h_noise - chern;
  const double h_lower = std::max(h_pair, h_chern);

  cd mean(0, 0);
  double pow2 = 0.0;
  for (const cd& mu : gm.means) {
    mean += mu;
    pow2 += std::norm(mu);
  }
  mean *= w;
  pow2 *= w;
  const double var_y = gm.sigma2 + pow2 - std::norm(mean);

  RateBounds rb;
  rb.lower = std::max(0.0, h_lower - h_noise);
  rb.upper = std::min(std::log2(double(n)), std::log2(var_y / gm.sigma2));
  if (rb.upper < 0.0) rb.upper = 0.0;
  if (rb.lower > rb.upper) rb.lower = rb.upper;  // rounding guard at sigma -> large
  return rb;
}

GaussianMixture user_mixture(const LinkDesign& d, int user, const Constellation& c,
                             double rho_i, double sigma2) {
  GaussianMixture gm;
  gm.sigma2 = sigma2;
  gm.means.reserve(size_t(d.n_a) * c.m);
  const double srho = std::sqrt(rho_i);
  for (int a = 0; a < d.n_a; ++a) {
    const cd g = d.combiner(a, user).dot(d.v[user][size_t(a) * d.k + user]);
    for (int m = 0; m < c.m; ++m) gm.means.push_back(srho * g * c.points[m]);
  }
  return gm;
}

}  // namespace hbfsm
