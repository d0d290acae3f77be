#pragma once

#include <vector>

#include "hbfsm/channel.hpp"

namespace hbfsm {

// Phase convention for the beamsteering codebook. The quantized angle grid is
// 2 pi n / N; "sin" feeds it through the same sin() phase map as the channel
// steering vector (physical beamsteering), "raw" uses the grid value as the
// phase argument directly.
enum class Convention { sin_phase, raw_phase };

struct Codebook {
  enum class Kind { array_response, beamsteering };
  Kind kind = Kind::array_response;
  int bits = 0;                 // beamsteering only
  Convention conv = Convention::sin_phase;
  std::vector<CVector> f;       // unit-norm codewords
  std::vector<double> angles;   // source angle per codeword
  int size() const { return int(f.size()); }
};

// F_A: one codeword per departure path angle of this channel.
Codebook build_array_response_codebook(const PathSet& paths, int n_t);

// F_B: 2^B beamsteering codewords on the 2 pi n / 2^B grid. B > 20 is
// rejected (search cost), B < 1 is invalid.
Codebook build_beamsteering_codebook(int bits, int n_t,
                                     Convention conv = Convention::sin_phase);

struct Selection {
  int index = 0;
  CVector f;
  double gain = 0.0;  // ||H f||^2
};

// Exhaustive argmax of ||H f||^2; ties broken toward the lowest index.
Selection select_beamformer(const ChannelRealization& ch, const Codebook& cb);

// d_c^2 = 1 - |f^H g|^2 for unit vectors; rejects non-unit input.
double chordal_distance_sq(const CVector& f, const CVector& g);

struct QuantizationReport {
  std::vector<int> b_list;
  std::vector<double> mean_dc2;
  std::vector<double> max_dc2;
  std::vector<double> fitted_bound;        // c * 2^{-B/(n_t-1)} with LS-fitted c
  double fitted_log2_c = 0.0;
  std::vector<std::vector<double>> per_trial;  // [b][trial]
};

// Draws `trials` channels once (per-trial streams), then for every B in
// b_list selects from both codebooks on those same channels and records
// d_c^2(f_A, f_B).
QuantizationReport quantization_error_study(int n_t, int l, const std::vector<int>& b_list,
                                            int trials, Stream s,
                                            Convention conv = Convention::sin_phase,
                                            int n_r = 1, int workers = 1);

}  // namespace hbfsm
