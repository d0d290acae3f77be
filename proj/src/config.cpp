#include "hbfsm/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "hbfsm/version.hpp"

#include <Eigen/Core>

namespace hbfsm {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void bad(const std::string& msg) { throw ConfigError(msg); }

void check_keys(const json& obj, const std::string& prefix,
                const std::set<std::string>& allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key()))
      bad("unknown key: " + (prefix.empty() ? it.key() : prefix + "." + it.key()));
  }
}

long long get_int(const json& obj, const std::string& prefix, const std::string& key,
                  long long fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer())
    bad("invalid value for " + (prefix.empty() ? key : prefix + "." + key) +
        ": expected integer");
  return v.get<long long>();
}

double get_num(const json& obj, const std::string& prefix, const std::string& key,
               double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number())
    bad("invalid value for " + (prefix.empty() ? key : prefix + "." + key) +
        ": expected number");
  return v.get<double>();
}

bool get_bool(const json& obj, const std::string& prefix, const std::string& key,
              bool fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_boolean())
    bad("invalid value for " + (prefix.empty() ? key : prefix + "." + key) +
        ": expected boolean");
  return v.get<bool>();
}

std::string get_str(const json& obj, const std::string& prefix, const std::string& key,
                    const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string())
    bad("invalid value for " + (prefix.empty() ? key : prefix + "." + key) +
        ": expected string");
  return v.get<std::string>();
}

std::vector<double> snr_from_json(const json& v) {
  std::vector<double> grid;
  if (v.is_array()) {
    for (const json& e : v) {
      if (!e.is_number()) bad("invalid value for snr_db: expected numbers");
      grid.push_back(e.get<double>());
    }
    return grid;
  }
  if (v.is_object()) {
    check_keys(v, "snr_db", {"start", "step", "stop"});
    if (!v.contains("start") || !v.contains("step") || !v.contains("stop"))
      bad("snr_db range form needs start, step, stop");
    const double start = get_num(v, "snr_db", "start", 0.0);
    const double step = get_num(v, "snr_db", "step", 0.0);
    const double stop = get_num(v, "snr_db", "stop", 0.0);
    if (step <= 0.0) bad("invalid value for snr_db.step: must be > 0");
    if (stop < start) bad("invalid value for snr_db.stop: must be >= start");
    for (double x = start; x <= stop + 1e-9; x += step) grid.push_back(x);
    return grid;
  }
  bad("invalid value for snr_db: expected array or {start, step, stop}");
}

bool power_of_two(long long v) { return v >= 1 && (v & (v - 1)) == 0; }

int checked_int(long long v, long long lo, long long hi, const char* path) {
  if (v < lo || v > hi) bad(std::string("invalid value for ") + path);
  return int(v);
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    bad(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) bad("config root must be an object");
  check_keys(root, "",
             {"scheme", "system", "codebook", "snr_db", "sim", "baseline", "rate",
              "quantization", "target_ber"});

  ExperimentConfig cfg;

  {
    const std::string s = get_str(root, "", "scheme", "hbf_sm");
    if (s == "hbf_sm")
      cfg.scheme = ExperimentConfig::Scheme::hbf_sm;
    else if (s == "classical_sm")
      cfg.scheme = ExperimentConfig::Scheme::classical_sm;
    else
      bad("invalid value for scheme: " + s);
  }

  if (root.contains("system")) {
    const json& sys = root.at("system");
    if (!sys.is_object()) bad("invalid value for system: expected object");
    check_keys(sys, "system", {"k", "n_a", "n_t", "n_r", "l", "m"});
    cfg.k = checked_int(get_int(sys, "system", "k", cfg.k), 1, 64, "system.k");
    cfg.n_a = checked_int(get_int(sys, "system", "n_a", cfg.n_a), 1, 1 << 20, "system.n_a");
    cfg.n_t = checked_int(get_int(sys, "system", "n_t", cfg.n_t), 1, 1 << 20, "system.n_t");
    cfg.n_r = checked_int(get_int(sys, "system", "n_r", cfg.n_r), 1, 1 << 10, "system.n_r");
    cfg.l = checked_int(get_int(sys, "system", "l", cfg.l), 1, 1 << 10, "system.l");
    cfg.m = checked_int(get_int(sys, "system", "m", cfg.m), 2, 64, "system.m");
  }

  if (root.contains("codebook")) {
    const json& cb = root.at("codebook");
    if (!cb.is_object()) bad("invalid value for codebook: expected object");
    check_keys(cb, "codebook", {"type", "b", "convention"});
    const std::string t = get_str(cb, "codebook", "type", "array_response");
    if (t == "array_response")
      cfg.cb.kind = Codebook::Kind::array_response;
    else if (t == "beamsteering")
      cfg.cb.kind = Codebook::Kind::beamsteering;
    else
      bad("invalid value for codebook.type: " + t);
    cfg.cb.bits = checked_int(get_int(cb, "codebook", "b", cfg.cb.bits), 0, 64, "codebook.b");
    const std::string conv = get_str(cb, "codebook", "convention", "sin");
    if (conv == "sin")
      cfg.cb.conv = Convention::sin_phase;
    else if (conv == "raw")
      cfg.cb.conv = Convention::raw_phase;
    else
      bad("invalid value for codebook.convention: " + conv);
  }

  if (root.contains("snr_db")) cfg.snr_db = snr_from_json(root.at("snr_db"));

  if (root.contains("sim")) {
    const json& sim = root.at("sim");
    if (!sim.is_object()) bad("invalid value for sim: expected object");
    check_keys(sim, "sim",
               {"trials", "trials_top2", "frame", "seed", "beta_budget", "workers",
                "early_stop", "sigma2"});
    cfg.trials = get_int(sim, "sim", "trials", cfg.trials);
    cfg.trials_top2 = get_int(sim, "sim", "trials_top2", cfg.trials_top2);
    cfg.frame = checked_int(get_int(sim, "sim", "frame", cfg.frame), 1, 1 << 24, "sim.frame");
    cfg.seed = uint64_t(get_int(sim, "sim", "seed", (long long)cfg.seed));
    cfg.beta_budget = get_int(sim, "sim", "beta_budget", cfg.beta_budget);
    cfg.workers = checked_int(get_int(sim, "sim", "workers", cfg.workers), 1, 256, "sim.workers");
    cfg.early_stop = get_bool(sim, "sim", "early_stop", cfg.early_stop);
    cfg.sigma2 = get_num(sim, "sim", "sigma2", cfg.sigma2);
  }

  if (root.contains("baseline")) {
    const json& b = root.at("baseline");
    if (!b.is_object()) bad("invalid value for baseline: expected object");
    check_keys(b, "baseline", {"channel"});
    const std::string c = get_str(b, "baseline", "channel", "rayleigh");
    if (c == "rayleigh")
      cfg.baseline_chan = BaselineConfig::Chan::rayleigh;
    else if (c == "geometric")
      cfg.baseline_chan = BaselineConfig::Chan::geometric;
    else
      bad("invalid value for baseline.channel: " + c);
  }

  if (root.contains("rate")) {
    const json& r = root.at("rate");
    if (!r.is_object()) bad("invalid value for rate: expected object");
    check_keys(r, "rate", {"realizations", "quad_points", "mc_samples", "mc_check"});
    cfg.rate_realizations = checked_int(get_int(r, "rate", "realizations", cfg.rate_realizations),
                                        1, 1 << 24, "rate.realizations");
    cfg.quad_points =
        checked_int(get_int(r, "rate", "quad_points", cfg.quad_points), 1, 1 << 16,
                    "rate.quad_points");
    cfg.mc_samples = get_int(r, "rate", "mc_samples", cfg.mc_samples);
    cfg.mc_check = get_bool(r, "rate", "mc_check", cfg.mc_check);
  }

  if (root.contains("quantization")) {
    const json& q = root.at("quantization");
    if (!q.is_object()) bad("invalid value for quantization: expected object");
    check_keys(q, "quantization", {"b_list", "trials"});
    if (q.contains("b_list")) {
      const json& bl = q.at("b_list");
      if (!bl.is_array()) bad("invalid value for quantization.b_list: expected array");
      cfg.b_list.clear();
      for (const json& e : bl) {
        if (!e.is_number_integer())
          bad("invalid value for quantization.b_list: expected integers");
        cfg.b_list.push_back(int(e.get<long long>()));
      }
    }
    cfg.q_trials = get_int(q, "quantization", "trials", cfg.q_trials);
  }

  cfg.target_ber = get_num(root, "", "target_ber", cfg.target_ber);

  validate_config(cfg);
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot read config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw FileError("cannot read config file: " + path);
  return parse_config_text(ss.str());
}

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.k < 1) bad("invalid value for system.k: must be >= 1");
  if (cfg.scheme == ExperimentConfig::Scheme::hbf_sm) {
    if (!power_of_two(cfg.n_a)) bad("invalid value for n_a: must be a power of 2");
  } else {
    if (!power_of_two(cfg.n_t))
      bad("invalid value for n_t: must be a power of 2 for classical_sm");
    if (cfg.n_r != 1) bad("invalid value for n_r: classical_sm supports n_r = 1 only");
  }
  if (cfg.n_t < 1) bad("invalid value for system.n_t: must be >= 1");
  if (cfg.n_r < 1) bad("invalid value for system.n_r: must be >= 1");
  if (cfg.l < 1) bad("invalid value for system.l: must be >= 1");
  if (cfg.m != 2 && cfg.m != 4 && cfg.m != 16 && cfg.m != 64)
    bad("invalid value for m: must be one of 2, 4, 16, 64");
  if (cfg.cb.kind == Codebook::Kind::beamsteering && (cfg.cb.bits < 1 || cfg.cb.bits > 20))
    bad("invalid value for codebook.b: beamsteering needs 1 <= b <= 20");
  if (cfg.snr_db.empty()) bad("invalid value for snr_db: must not be empty");
  for (size_t i = 1; i < cfg.snr_db.size(); ++i)
    if (!(cfg.snr_db[i] > cfg.snr_db[i - 1]))
      bad("invalid value for snr_db: must be strictly increasing");
  if (cfg.trials < 1) bad("invalid value for sim.trials: must be >= 1");
  if (cfg.trials_top2 < 0) bad("invalid value for sim.trials_top2: must be >= 0");
  if (cfg.frame < 1) bad("invalid value for sim.frame: must be >= 1");
  if (cfg.workers < 1) bad("invalid value for sim.workers: must be >= 1");
  if (cfg.beta_budget < 1) bad("invalid value for sim.beta_budget: must be >= 1");
  if (!(cfg.sigma2 >= 0.0)) bad("invalid value for sim.sigma2: must be >= 0");
  if (cfg.rate_realizations < 1) bad("invalid value for rate.realizations: must be >= 1");
  if (cfg.quad_points < 256) bad("invalid value for rate.quad_points: must be >= 256");
  if (cfg.mc_samples < 100000) bad("invalid value for rate.mc_samples: must be >= 100000");
  if (cfg.b_list.empty()) bad("invalid value for quantization.b_list: must not be empty");
  for (size_t i = 0; i < cfg.b_list.size(); ++i) {
    if (cfg.b_list[i] < 1 || cfg.b_list[i] > 20)
      bad("invalid value for quantization.b_list: entries must be in [1, 20]");
    if (i > 0 && cfg.b_list[i] <= cfg.b_list[i - 1])
      bad("invalid value for quantization.b_list: must be strictly increasing");
  }
  if (cfg.q_trials < 1) bad("invalid value for quantization.trials: must be >= 1");
  if (!(cfg.target_ber > 0.0) || !(cfg.target_ber < 1.0))
    bad("invalid value for target_ber: must be in (0, 1)");
}

void validate_comparison(const ExperimentConfig& a, const ExperimentConfig& b) {
  const int ba = a.spatial_bits() + a.symbol_bits();
  const int bb = b.spatial_bits() + b.symbol_bits();
  if (ba != bb) {
    std::ostringstream ss;
    ss << "comparison sides carry different bits per channel use per user (" << ba << " vs "
       << bb << ")";
    bad(ss.str());
  }
}

namespace {

json echo_json_obj(const ExperimentConfig& cfg) {
  json j;
  j["scheme"] = cfg.scheme == ExperimentConfig::Scheme::hbf_sm ? "hbf_sm" : "classical_sm";
  j["system"] = {{"k", cfg.k},   {"n_a", cfg.n_a}, {"n_t", cfg.n_t},
                 {"n_r", cfg.n_r}, {"l", cfg.l},   {"m", cfg.m}};
  j["codebook"] = {
      {"type",
       cfg.cb.kind == Codebook::Kind::array_response ? "array_response" : "beamsteering"},
      {"b", cfg.cb.bits},
      {"convention", cfg.cb.conv == Convention::sin_phase ? "sin" : "raw"}};
  j["snr_db"] = cfg.snr_db;
  j["sim"] = {{"trials", cfg.trials},
              {"trials_top2", cfg.trials_top2},
              {"frame", cfg.frame},
              {"seed", cfg.seed},
              {"beta_budget", cfg.beta_budget},
              {"workers", cfg.workers},
              {"early_stop", cfg.early_stop},
              {"sigma2", cfg.sigma2}};
  j["baseline"] = {
      {"channel",
       cfg.baseline_chan == BaselineConfig::Chan::rayleigh ? "rayleigh" : "geometric"}};
  j["rate"] = {{"realizations", cfg.rate_realizations},
               {"quad_points", cfg.quad_points},
               {"mc_samples", cfg.mc_samples},
               {"mc_check", cfg.mc_check}};
  j["quantization"] = {{"b_list", cfg.b_list}, {"trials", cfg.q_trials}};
  j["target_ber"] = cfg.target_ber;
  return j;
}

}  // namespace

std::string config_echo_json(const ExperimentConfig& cfg) {
  return echo_json_obj(cfg).dump(2) + "\n";
}

std::string manifest_text(const std::string& subcommand, const ExperimentConfig& cfg,
                          const std::vector<std::pair<std::string, std::string>>& extras) {
  json j;
  j["tool"] = "hbfsm";
  j["version"] = HBFSM_VERSION;
  j["subcommand"] = subcommand;
  j["seed"] = cfg.seed;
  j["config_hash"] = config_hash(cfg);
  j["config"] = echo_json_obj(cfg);
  json res = json::object();
  for (const auto& [key, raw] : extras) res[key] = json::parse(raw);
  j["results"] = res;
  {
    std::ostringstream eig;
    eig << EIGEN_WORLD_VERSION << "." << EIGEN_MAJOR_VERSION << "." << EIGEN_MINOR_VERSION;
    j["versions"] = {{"hbfsm", HBFSM_VERSION}, {"eigen", eig.str()}};
  }
  return j.dump(2) + "\n";
}

std::vector<double> parse_snr_spec(const std::string& text) {
  const size_t c1 = text.find(':');
  if (c1 != std::string::npos) {
    const size_t c2 = text.find(':', c1 + 1);
    if (c2 == std::string::npos) bad("invalid snr spec (want a:b:c or comma list): " + text);
    try {
      const double start = std::stod(text.substr(0, c1));
      const double step = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
      const double stop = std::stod(text.substr(c2 + 1));
      if (step <= 0.0) bad("invalid snr spec: step must be > 0");
      if (stop < start) bad("invalid snr spec: stop must be >= start");
      std::vector<double> grid;
      for (double x = start; x <= stop + 1e-9; x += step) grid.push_back(x);
      return grid;
    } catch (const std::invalid_argument&) {
      bad("invalid snr spec: " + text);
    } catch (const std::out_of_range&) {
      bad("invalid snr spec: " + text);
    }
  }
  std::vector<double> grid;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      grid.push_back(std::stod(tok));
    } catch (const std::exception&) {
      bad("invalid snr spec: " + text);
    }
  }
  if (grid.empty()) bad("invalid snr spec: " + text);
  return grid;
}

}  // namespace hbfsm
