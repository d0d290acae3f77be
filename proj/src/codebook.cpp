#include "hbfsm/codebook.hpp"

#include <cmath>
#include <stdexcept>

#include "hbfsm/parallel.hpp"

namespace hbfsm {

Codebook build_array_response_codebook(const PathSet& paths, int n_t) {
  if (paths.paths() < 1) throw std::invalid_argument("array_response codebook: no paths");
  Codebook cb;
  cb.kind = Codebook::Kind::array_response;
  cb.f.reserve(paths.paths());
  cb.angles = paths.aod;
  for (double phi : paths.aod) cb.f.push_back(steering_vector(phi, n_t));
  return cb;
}

Codebook build_beamsteering_codebook(int bits, int n_t, Convention conv) {
  if (bits < 1) throw std::invalid_argument("beamsteering codebook: bits < 1");
  if (bits > 20) throw std::length_error("beamsteering codebook: bits > 20 (search cost)");
  const int n = 1 << bits;
  Codebook cb;
  cb.kind = Codebook::Kind::beamsteering;
  cb.bits = bits;
  cb.conv = conv;
  cb.f.reserve(n);
  cb.angles.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double ang = 2.0 * M_PI * double(i) / double(n);
    cb.angles.push_back(ang);
    cb.f.push_back(conv == Convention::sin_phase ? steering_vector(ang, n_t)
                                                 : steering_vector_raw(ang, n_t));
  }
  return cb;
}

Selection select_beamformer(const ChannelRealization& ch, const Codebook& cb) {
  if (cb.size() < 1) throw std::invalid_argument("select_beamformer: empty codebook");
  if (cb.f[0].size() != ch.H.cols())
    throw std::invalid_argument("select_beamformer: codeword length != n_t");
  int best = 0;
  double best_gain = -1.0;
  for (int i = 0; i < cb.size(); ++i) {
    const double g = (ch.H * cb.f[i]).squaredNorm();
    if (g > best_gain) {  // strict: ties keep the lowest index
      best_gain = g;
      best = i;
    }
  }
  return {best, cb.f[best], best_gain};
}

double chordal_distance_sq(const CVector& f, const CVector& g) {
  if (std::abs(f.norm() - 1.0) > 1e-6 || std::abs(g.norm() - 1.0) > 1e-6)
    throw std::invalid_argument("chordal_distance_sq: inputs must be unit norm");
  const double ip = std::norm(f.dot(g));  // |f^H g|^2
  double d = 1.0 - ip;
  if (d < 0.0) d = 0.0;
  if (d > 1.0) d = 1.0;
  return d;
}

QuantizationReport quantization_error_study(int n_t, int l, const std::vector<int>& b_list,
                                            int trials, Stream s, Convention conv, int n_r,
                                            int workers) {
  if (trials < 1) throw std::invalid_argument("quantization_error_study: trials < 1");
  QuantizationReport rep;
  rep.b_list = b_list;
  rep.per_trial.assign(b_list.size(), std::vector<double>(trials, 0.0));

  // channels are drawn once and shared across every B
  std::vector<ChannelRealization> chans(trials);
  parallel_for(trials, workers, [&](long t) {
    chans[t] = generate_channel(n_t, n_r, l, s.fork(uint64_t(t)));
  });

  for (size_t bi = 0; bi < b_list.size(); ++bi) {
    const Codebook fb = build_beamsteering_codebook(b_list[bi], n_t, conv);
    auto& row = rep.per_trial[bi];
    parallel_for(trials, workers, [&](long t) {
      const Codebook fa = build_array_response_codebook(chans[t].paths, n_t);
      const Selection sa = select_beamformer(chans[t], fa);
      const Selection sb = select_beamformer(chans[t], fb);
      row[t] = chordal_distance_sq(sa.f, sb.f);
    });
    double sum = 0.0, mx = 0.0;
    for (double v : row) {
      sum += v;
      if (v > mx) mx = v;
    }
    rep.mean_dc2.push_back(sum / trials);
    rep.max_dc2.push_back(mx);
  }

  // LS fit of log2(mean) against the -B/(n_t-1) decay shape: only the
  // constant is free, the slope is fixed by the bound.
  const double slope = -1.0 / double(n_t - 1);
  double acc = 0.0;
  int used = 0;
  for (size_t bi = 0; bi < b_list.size(); ++bi) {
    if (rep.mean_dc2[bi] > 0.0) {
      acc += std::log2(rep.mean_dc2[bi]) - slope * b_list[bi];
      ++used;
    }
  }
  rep.fitted_log2_c = used ? acc / used : 0.0;
  for (size_t bi = 0; bi < b_list.size(); ++bi)
    rep.fitted_bound.push_back(std::exp2(rep.fitted_log2_c + slope * b_list[bi]));
  return rep;
}

}  // namespace hbfsm
