#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hbfsm/config.hpp"
#include "hbfsm/version.hpp"

namespace {

using namespace hbfsm;

struct CommonOpts {
  std::string config_path;
  std::string out_dir = ".";
  bool plot = false;
  bool check = false;
  // overrides; negative/empty means "not set"
  long long seed = -1;
  std::string snr;
  long long trials = -1;
  int workers = -1;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_config = true) {
  auto* c = cmd->add_option("--config", o.config_path, "experiment config file (JSON)");
  if (needs_config) c->required();
  cmd->add_option("--out", o.out_dir, "output directory (default: current)");
  cmd->add_option("--seed", o.seed, "override sim.seed");
  cmd->add_option("--snr", o.snr, "override snr grid: start:step:stop or comma list");
  cmd->add_option("--trials", o.trials, "override sim.trials");
  cmd->add_option("--workers", o.workers, "override sim.workers");
  cmd->add_flag("--plot", o.plot, "also write an SVG plot");
  cmd->add_flag("--check", o.check, "validate the config and exit");
}

ExperimentConfig load_config(const CommonOpts& o) {
  ExperimentConfig cfg = parse_config_file(o.config_path);
  if (o.seed >= 0) cfg.seed = uint64_t(o.seed);
  if (!o.snr.empty()) cfg.snr_db = parse_snr_spec(o.snr);
  if (o.trials >= 0) cfg.trials = o.trials;
  if (o.workers >= 1) cfg.workers = o.workers;
  validate_config(cfg);
  return cfg;
}

void write_file(const std::string& dir, const std::string& name, const std::string& content) {
  const std::string path = dir + "/" + name;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FileError("cannot write " + path);
  out << content;
  out.flush();
  if (!out) throw FileError("cannot write " + path);
}

std::string fmt(double v, const char* f = "%.10g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// minimal standalone SVG: log10(BER) against SNR, one polyline per curve
std::string ber_svg(const std::vector<std::pair<std::string, const CurveResult*>>& curves) {
  const double w = 640, h = 480, ml = 70, mr = 20, mt = 30, mb = 50;
  double xmin = 1e300, xmax = -1e300, ymin = 0.0, ymax = -300.0;
  for (const auto& [name, cr] : curves)
    for (const PointResult& p : cr->points) {
      xmin = std::min(xmin, p.snr_db);
      xmax = std::max(xmax, p.snr_db);
      if (p.ber > 0.0) {
        ymin = std::min(ymin, std::log10(p.ber));
        ymax = std::max(ymax, std::log10(p.ber));
      }
    }
  if (!(xmax > xmin)) xmax = xmin + 1.0;
  ymax = 0.0;
  ymin = std::floor(ymin) - 0.5;
  if (!(ymin < ymax)) ymin = ymax - 1.0;
  auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (w - ml - mr); };
  auto py = [&](double y) { return h - mb - (y - ymin) / (ymax - ymin) * (h - mt - mb); };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
    << "\" viewBox=\"0 0 " << w << " " << h << "\">\n";
  s << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n";
  s << "<line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr << "\" y2=\""
    << h - mb << "\" stroke=\"black\"/>\n";
  s << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << h - mb
    << "\" stroke=\"black\"/>\n";
  for (int t = int(std::ceil(ymin)); t <= 0; ++t) {
    const double y = py(t);
    s << "<line x1=\"" << ml - 4 << "\" y1=\"" << y << "\" x2=\"" << ml << "\" y2=\"" << y
      << "\" stroke=\"black\"/>\n";
    s << "<text x=\"" << ml - 8 << "\" y=\"" << y + 4
      << "\" text-anchor=\"end\" font-size=\"12\">1e" << t << "</text>\n";
  }
  const double xstep = (xmax - xmin) / 10.0 > 0 ? (xmax - xmin) / 10.0 : 1.0;
  for (double x = xmin; x <= xmax + 1e-9; x += xstep) {
    const double xx = px(x);
    s << "<line x1=\"" << xx << "\" y1=\"" << h - mb << "\" x2=\"" << xx << "\" y2=\""
      << h - mb + 4 << "\" stroke=\"black\"/>\n";
    s << "<text x=\"" << xx << "\" y=\"" << h - mb + 18
      << "\" text-anchor=\"middle\" font-size=\"12\">" << fmt(x, "%.4g") << "</text>\n";
  }
  s << "<text x=\"" << (ml + w - mr) / 2 << "\" y=\"" << h - 12
    << "\" text-anchor=\"middle\" font-size=\"13\">SNR (dB)</text>\n";
  s << "<text x=\"16\" y=\"" << (mt + h - mb) / 2
    << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
    << (mt + h - mb) / 2 << ")\">BER</text>\n";
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
  int ci = 0;
  for (const auto& [name, cr] : curves) {
    const char* col = colors[ci % 4];
    std::ostringstream pts;
    for (const PointResult& p : cr->points) {
      if (p.ber <= 0.0) continue;
      pts << fmt(px(p.snr_db), "%.2f") << "," << fmt(py(std::log10(p.ber)), "%.2f") << " ";
    }
    s << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.5\" points=\""
      << pts.str() << "\"/>\n";
    s << "<text x=\"" << w - mr - 8 << "\" y=\"" << mt + 16 + 16 * ci
      << "\" text-anchor=\"end\" font-size=\"12\" fill=\"" << col << "\">" << name
      << "</text>\n";
    ++ci;
  }
  s << "</svg>\n";
  return s.str();
}

int cmd_ber(const CommonOpts& o) {
  const ExperimentConfig cfg = load_config(o);
  if (o.check) {
    std::cout << "config ok\n";
    return 0;
  }
  const CurveResult r = run_ber_experiment(cfg);
  std::ostringstream csv;
  write_ber_csv(csv, r);
  write_file(o.out_dir, "ber.csv", csv.str());
  std::vector<std::pair<std::string, std::string>> extras = {
      {"beta", fmt(r.beta, "%.17g")},
      {"degenerate_total", std::to_string(r.degenerate_total)},
      {"points", std::to_string(r.points.size())}};
  write_file(o.out_dir, "manifest.json", manifest_text("ber", cfg, extras));
  if (o.plot) write_file(o.out_dir, "ber.svg", ber_svg({{"ber", &r}}));
  std::cout << "wrote " << o.out_dir << "/ber.csv (" << r.points.size() << " points, beta "
            << fmt(r.beta, "%.6g") << ")\n";
  return 0;
}

int cmd_compare(const CommonOpts& o, const std::string& baseline_path, double target_override) {
  ExperimentConfig a = load_config(o);
  CommonOpts ob = o;
  ob.config_path = baseline_path;
  ExperimentConfig b = load_config(ob);
  const double target = target_override > 0.0 ? target_override : a.target_ber;
  if (!(target > 0.0) || !(target < 1.0))
    throw ConfigError("invalid value for target_ber: must be in (0, 1)");
  a.target_ber = target;
  b.target_ber = target;
  validate_comparison(a, b);
  if (o.check) {
    std::cout << "config ok\n";
    return 0;
  }
  const ComparisonResult r = run_comparison(a, b, target);
  {
    std::ostringstream csv;
    write_ber_csv(csv, r.a);
    write_file(o.out_dir, "compare_a.csv", csv.str());
  }
  {
    std::ostringstream csv;
    write_ber_csv(csv, r.b);
    write_file(o.out_dir, "compare_b.csv", csv.str());
  }
  std::vector<std::pair<std::string, std::string>> extras = {
      {"target_ber", fmt(target, "%.17g")},
      {"beta_a", fmt(r.a.beta, "%.17g")},
      {"beta_b", fmt(r.b.beta, "%.17g")},
      {"a_reached", r.a_reached ? "true" : "false"},
      {"b_reached", r.b_reached ? "true" : "false"}};
  if (r.a_reached) extras.emplace_back("a_cross_db", fmt(r.a_cross_db, "%.17g"));
  if (r.b_reached) extras.emplace_back("b_cross_db", fmt(r.b_cross_db, "%.17g"));
  if (r.a_reached && r.b_reached) extras.emplace_back("gain_db", fmt(r.gain_db, "%.17g"));
  write_file(o.out_dir, "manifest.json", manifest_text("compare", a, extras));
  if (o.plot)
    write_file(o.out_dir, "compare.svg", ber_svg({{"a", &r.a}, {"b", &r.b}}));
  if (r.a_reached && r.b_reached)
    std::cout << "gain at BER " << fmt(target, "%.3g") << ": " << fmt(r.gain_db, "%.4g")
              << " dB (a crosses " << fmt(r.a_cross_db, "%.4g") << " dB, b crosses "
              << fmt(r.b_cross_db, "%.4g") << " dB)\n";
  else
    std::cout << "target BER " << fmt(target, "%.3g") << " not reached by "
              << (!r.a_reached && !r.b_reached ? "either side"
                  : !r.a_reached              ? "side a"
                                              : "side b")
              << " on this grid\n";
  return 0;
}

int cmd_rate(const CommonOpts& o) {
  const ExperimentConfig cfg = load_config(o);
  if (o.check) {
    std::cout << "config ok\n";
    return 0;
  }
  const RateCurve r = run_rate_experiment(cfg);
  std::ostringstream csv;
  write_rate_csv(csv, r);
  write_file(o.out_dir, "rate.csv", csv.str());
  std::vector<std::pair<std::string, std::string>> extras = {
      {"points", std::to_string(r.points.size())}};
  if (cfg.mc_check && !r.points.empty()) {
    double worst = 0.0;
    for (const RatePoint& p : r.points)
      if (p.mc_checked && p.mc_std_err > 0.0)
        worst = std::max(worst, std::abs(p.mc_entropy - p.quad_entropy) / p.mc_std_err);
    extras.emplace_back("mc_worst_sigma", fmt(worst, "%.17g"));
  }
  write_file(o.out_dir, "manifest.json", manifest_text("rate", cfg, extras));
  std::cout << "wrote " << o.out_dir << "/rate.csv (" << r.points.size() << " points)\n";
  return 0;
}

int cmd_quantization(const CommonOpts& o) {
  const ExperimentConfig cfg = load_config(o);
  if (o.check) {
    std::cout << "config ok\n";
    return 0;
  }
  const QuantizationReport r = run_quantization(cfg);
  std::ostringstream csv;
  write_quantization_csv(csv, r);
  write_file(o.out_dir, "quantization.csv", csv.str());
  std::vector<std::pair<std::string, std::string>> extras = {
      {"fitted_log2_c", fmt(r.fitted_log2_c, "%.17g")},
      {"points", std::to_string(r.b_list.size())}};
  write_file(o.out_dir, "manifest.json", manifest_text("quantization", cfg, extras));
  std::cout << "wrote " << o.out_dir << "/quantization.csv (" << r.b_list.size()
            << " codebook sizes)\n";
  return 0;
}

int cmd_beta(const CommonOpts& o, bool write_outputs) {
  const ExperimentConfig cfg = load_config(o);
  if (o.check) {
    std::cout << "config ok\n";
    return 0;
  }
  Stream root = Stream::root(cfg.seed);
  double beta = 0.0;
  if (cfg.scheme == ExperimentConfig::Scheme::hbf_sm) {
    const SystemDims dims{cfg.k, cfg.n_a, cfg.n_t, cfg.n_r, cfg.l};
    beta = estimate_beta(dims, cfg.cb, cfg.beta_budget, root.fork(0xB));
  } else {
    BaselineConfig bc;
    bc.k = cfg.k;
    bc.n_t = cfg.n_t;
    bc.m = cfg.m;
    bc.chan = cfg.baseline_chan;
    bc.l = cfg.l;
    beta = estimate_baseline_beta(bc, cfg.beta_budget, root.fork(0xB));
  }
  std::cout << "beta " << fmt(beta, "%.17g") << "\n";
  if (write_outputs)
    write_file(o.out_dir, "manifest.json",
               manifest_text("beta", cfg, {{"beta", fmt(beta, "%.17g")}}));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hbfsm: hybrid-beamforming spatial-modulation link simulator"};
  app.set_version_flag("--version", HBFSM_VERSION);
  app.require_subcommand(1);

  CommonOpts ob, oc, orr, oq, obeta;
  std::string baseline_path;
  double target_override = -1.0;
  bool beta_manifest = false;

  CLI::App* ber = app.add_subcommand("ber", "BER sweep over the SNR grid");
  add_common(ber, ob);
  CLI::App* cmp = app.add_subcommand("compare", "two-config BER comparison and SNR gain");
  add_common(cmp, oc);
  cmp->add_option("--baseline", baseline_path, "config file of the second curve")->required();
  cmp->add_option("--target-ber", target_override, "target BER for the gain readout");
  CLI::App* rate = app.add_subcommand("rate", "achievable-rate sweep (exact and bounds)");
  add_common(rate, orr);
  CLI::App* quant = app.add_subcommand("quantization", "codebook quantization error study");
  add_common(quant, oq);
  CLI::App* beta = app.add_subcommand("beta", "estimate the power normalization factor");
  add_common(beta, obeta);
  beta->add_flag("--manifest", beta_manifest, "also write manifest.json to --out");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (ber->parsed()) return cmd_ber(ob);
    if (cmp->parsed()) return cmd_compare(oc, baseline_path, target_override);
    if (rate->parsed()) return cmd_rate(orr);
    if (quant->parsed()) return cmd_quantization(oq);
    if (beta->parsed()) return cmd_beta(obeta, beta_manifest);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const FileError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
