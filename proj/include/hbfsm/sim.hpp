#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hbfsm/baseline.hpp"
#include "hbfsm/codebook.hpp"
#include "hbfsm/rate.hpp"
#include "hbfsm/txrx.hpp"

namespace hbfsm {

struct ExperimentConfig {
  enum class Scheme { hbf_sm, classical_sm };
  Scheme scheme = Scheme::hbf_sm;

  int k = 2, n_a = 4, n_t = 8, n_r = 1, l = 3, m = 4;
  CodebookSpec cb;

  std::vector<double> snr_db = {0.0};
  long trials = 200000;        // channel uses per SNR point
  long trials_top2 = 0;        // if > 0, used for the two highest points
  int frame = 100;             // uses per channel realization
  uint64_t seed = 1;
  long beta_budget = 10000;
  int workers = 1;
  bool early_stop = true;
  double sigma2 = 1.0;

  BaselineConfig::Chan baseline_chan = BaselineConfig::Chan::rayleigh;

  int rate_realizations = 100;
  int quad_points = 256;
  long mc_samples = 200000;
  bool mc_check = false;

  std::vector<int> b_list = {4, 6, 8, 10, 12};
  long q_trials = 1000;

  double target_ber = 1e-3;

  int spatial_bits() const;
  int symbol_bits() const;
};

struct PointResult {
  double snr_db = 0.0;
  double ber = 0.0, ber_spatial = 0.0, ber_symbol = 0.0;
  long long bits = 0, errors = 0;
  long long bits_spatial = 0, errors_spatial = 0;
  long long bits_symbol = 0, errors_symbol = 0;
  double std_err = 0.0;
  long long degenerate = 0;
  long long uses = 0;
};

struct CurveResult {
  std::vector<PointResult> points;
  double beta = 1.0;
  uint64_t seed = 0;
  std::string config_hash;
  long long degenerate_total = 0;
};

CurveResult run_ber_experiment(const ExperimentConfig& cfg);

struct ComparisonResult {
  CurveResult a, b;
  bool a_reached = false, b_reached = false;
  double a_cross_db = 0.0, b_cross_db = 0.0;
  double gain_db = 0.0;  // b_cross - a_cross when both reached
};

ComparisonResult run_comparison(const ExperimentConfig& cfg_a, const ExperimentConfig& cfg_b,
                                double target_ber);

struct RatePoint {
  double snr_db = 0.0;
  double exact = 0.0, lower = 0.0, upper = 0.0;
  bool mc_checked = false;
  double mc_entropy = 0.0, mc_std_err = 0.0, quad_entropy = 0.0;
};

struct RateCurve {
  std::vector<RatePoint> points;
  uint64_t seed = 0;
  std::string config_hash;
};

RateCurve run_rate_experiment(const ExperimentConfig& cfg);

QuantizationReport run_quantization(const ExperimentConfig& cfg);

// crossing of a curve with a target BER on the (dB, log BER) plane;
// false when the curve never falls to the target
bool crossing_snr(const std::vector<PointResult>& pts, double target, double* snr_out);

// canonical one-line form of a config (hash input and manifest echo aid)
std::string config_canonical(const ExperimentConfig& cfg);
std::string config_hash(const ExperimentConfig& cfg);

void write_ber_csv(std::ostream& os, const CurveResult& r);
void write_rate_csv(std::ostream& os, const RateCurve& r);
void write_quantization_csv(std::ostream& os, const QuantizationReport& r);

}  // namespace hbfsm
