#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "hbfsm/config.hpp"
#include "hbfsm/version.hpp"

namespace py = pybind11;
using namespace hbfsm;

namespace {

// experiments take config JSON text, mirroring the CLI surface
ExperimentConfig cfg_of(const std::string& json_text) { return parse_config_text(json_text); }

py::dict point_dict(const PointResult& p) {
  py::dict d;
  d["snr_db"] = p.snr_db;
  d["ber"] = p.ber;
  d["ber_spatial"] = p.ber_spatial;
  d["ber_symbol"] = p.ber_symbol;
  d["bits"] = p.bits;
  d["errors"] = p.errors;
  d["stderr"] = p.std_err;
  d["degenerate"] = p.degenerate;
  d["uses"] = p.uses;
  return d;
}

}  // namespace

PYBIND11_MODULE(_hbfsm, m) {
  m.doc() = "hybrid-beamforming spatial-modulation link simulation core";
  m.attr("__version__") = HBFSM_VERSION;

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<FileError>(m, "FileError", PyExc_OSError);

  m.def("steering_vector", &steering_vector, py::arg("angle"), py::arg("n"),
        "half-wavelength ULA response, unit norm");
  m.def(
      "generate_channel",
      [](int n_t, int n_r, int l, uint64_t seed) {
        const ChannelRealization ch = generate_channel(n_t, n_r, l, Stream(seed));
        return py::make_tuple(ch.H, ch.paths.alpha, ch.paths.aod, ch.paths.aoa);
      },
      py::arg("n_t"), py::arg("n_r"), py::arg("l"), py::arg("seed"),
      "one geometric channel draw: (H, alpha, aod, aoa)");

  m.def(
      "beamsteering_codebook",
      [](int bits, int n_t, const std::string& conv) {
        const Convention c = conv == "raw" ? Convention::raw_phase : Convention::sin_phase;
        const Codebook cb = build_beamsteering_codebook(bits, n_t, c);
        CMatrix f(n_t, cb.size());
        for (int i = 0; i < cb.size(); ++i) f.col(i) = cb.f[size_t(i)];
        return py::make_tuple(f, cb.angles);
      },
      py::arg("bits"), py::arg("n_t"), py::arg("convention") = "sin",
      "codeword matrix (n_t x 2^bits) and the source angles");

  m.def(
      "select_beamformer",
      [](const CMatrix& h, const CMatrix& codewords) {
        ChannelRealization ch;
        ch.H = h;
        ch.n_r = int(h.rows());
        ch.n_t = int(h.cols());
        Codebook cb;
        cb.kind = Codebook::Kind::beamsteering;
        for (int i = 0; i < codewords.cols(); ++i) {
          cb.f.push_back(codewords.col(i));
          cb.angles.push_back(0.0);
        }
        const Selection s = select_beamformer(ch, cb);
        return py::make_tuple(s.index, s.gain);
      },
      py::arg("h"), py::arg("codewords"), "argmax of ||H f||^2: (index, gain)");

  m.def("chordal_distance_sq", &chordal_distance_sq, py::arg("f"), py::arg("g"));

  m.def(
      "constellation",
      [](int m_order) {
        const Constellation c = build_constellation(m_order);
        return c.points;
      },
      py::arg("m"), "unit-energy Gray-labeled points, indexed by bit label");

  m.def(
      "sm_map",
      [](const std::vector<int>& bits, int n_a, int m_order) {
        const Constellation c = build_constellation(m_order);
        const SmSymbol s = sm_map(bits, n_a, c);
        return py::make_tuple(s.aa_index, s.label, s.s);
      },
      py::arg("bits"), py::arg("n_a"), py::arg("m"),
      "MSB-first bit mapping: (aa_index one-based, label, symbol)");

  m.def(
      "estimate_beta",
      [](const std::string& json_text) {
        const ExperimentConfig cfg = cfg_of(json_text);
        Stream root = Stream::root(cfg.seed);
        if (cfg.scheme == ExperimentConfig::Scheme::hbf_sm) {
          const SystemDims dims{cfg.k, cfg.n_a, cfg.n_t, cfg.n_r, cfg.l};
          return estimate_beta(dims, cfg.cb, cfg.beta_budget, root.fork(0xB));
        }
        BaselineConfig bc;
        bc.k = cfg.k;
        bc.n_t = cfg.n_t;
        bc.m = cfg.m;
        bc.chan = cfg.baseline_chan;
        bc.l = cfg.l;
        return estimate_baseline_beta(bc, cfg.beta_budget, root.fork(0xB));
      },
      py::arg("config_json"), "power normalization factor for a config");

  m.def(
      "run_ber",
      [](const std::string& json_text) {
        const CurveResult r = run_ber_experiment(cfg_of(json_text));
        py::list pts;
        for (const PointResult& p : r.points) pts.append(point_dict(p));
        py::dict d;
        d["points"] = pts;
        d["beta"] = r.beta;
        d["seed"] = r.seed;
        d["config_hash"] = r.config_hash;
        d["degenerate_total"] = r.degenerate_total;
        std::ostringstream csv;
        write_ber_csv(csv, r);
        d["csv"] = csv.str();
        return d;
      },
      py::arg("config_json"), "BER sweep; returns points, beta, and the CSV text");

  m.def(
      "run_rate",
      [](const std::string& json_text) {
        const RateCurve r = run_rate_experiment(cfg_of(json_text));
        py::list pts;
        for (const RatePoint& p : r.points) {
          py::dict e;
          e["snr_db"] = p.snr_db;
          e["exact"] = p.exact;
          e["lower"] = p.lower;
          e["upper"] = p.upper;
          pts.append(e);
        }
        py::dict d;
        d["points"] = pts;
        std::ostringstream csv;
        write_rate_csv(csv, r);
        d["csv"] = csv.str();
        return d;
      },
      py::arg("config_json"), "achievable-rate sweep with bounds");

  m.def(
      "run_quantization",
      [](const std::string& json_text) {
        const QuantizationReport r = run_quantization(cfg_of(json_text));
        py::dict d;
        d["b_list"] = r.b_list;
        d["mean_dc2"] = r.mean_dc2;
        d["max_dc2"] = r.max_dc2;
        d["fitted_bound"] = r.fitted_bound;
        d["fitted_log2_c"] = r.fitted_log2_c;
        std::ostringstream csv;
        write_quantization_csv(csv, r);
        d["csv"] = csv.str();
        return d;
      },
      py::arg("config_json"), "codebook quantization error study");
}
