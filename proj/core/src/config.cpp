#include "ncjt/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace ncjt {

const char* traffic_scope_name(TrafficScope scope) {
  switch (scope) {
    case TrafficScope::kNetwork:
      return "network";
    case TrafficScope::kPerTrp:
      return "per_trp";
    case TrafficScope::kPerUe:
      return "per_ue";
  }
  return "?";
}

TrafficScope traffic_scope_from_name(const std::string& name) {
  if (name == "network") return TrafficScope::kNetwork;
  if (name == "per_trp") return TrafficScope::kPerTrp;
  if (name == "per_ue") return TrafficScope::kPerUe;
  throw ConfigError("unknown traffic_scope '" + name +
                    "' (allowed: network, per_trp, per_ue)");
}

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

[[noreturn]] void out_of_range(const std::string& key, const std::string& value,
                               const std::string& range) {
  throw ConfigError("config key '" + key + "': value '" + value +
                    "' outside allowed range " + range);
}

void check(bool ok, const std::string& key, const std::string& value,
           const std::string& range) {
  if (!ok) out_of_range(key, value, range);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': cannot parse '" + value +
                      "' as a number");
  }
}

int parse_int(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    const long v = std::stol(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return static_cast<int>(v);
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': cannot parse '" + value +
                      "' as an integer");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError("config key '" + key + "': cannot parse '" + value +
                    "' as a bool (true/false)");
}

}  // namespace

std::vector<uint64_t> parse_seed_list(const std::string& text) {
  std::vector<uint64_t> seeds;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    try {
      seeds.push_back(std::stoull(item));
    } catch (const std::exception&) {
      throw ConfigError("seeds: cannot parse '" + item + "' as an integer");
    }
  }
  if (seeds.empty()) throw ConfigError("seeds: empty list");
  return seeds;
}

void apply_config_value(RunConfig& config, const std::string& key,
                        const std::string& value) {
  if (key == "scheme") {
    config.scheme = scheme_from_name(value);
  } else if (key == "users_per_trp") {
    config.users_per_trp = parse_int(key, value);
  } else if (key == "max_coord") {
    config.max_coord = parse_int(key, value);
  } else if (key == "seeds") {
    config.seeds = parse_seed_list(value);
  } else if (key == "ttis") {
    config.ttis = parse_int(key, value);
  } else if (key == "trp_count") {
    config.trp_count = parse_int(key, value);
  } else if (key == "isd_m") {
    config.isd_m = parse_double(key, value);
  } else if (key == "tx_power_dbm") {
    config.tx_power_dbm = parse_double(key, value);
  } else if (key == "n_tx") {
    config.n_tx = parse_int(key, value);
  } else if (key == "n_rx") {
    config.n_rx = parse_int(key, value);
  } else if (key == "trp_antenna_gain_dbi") {
    config.trp_antenna_gain_dbi = parse_double(key, value);
  } else if (key == "ue_antenna_gain_dbi") {
    config.ue_antenna_gain_dbi = parse_double(key, value);
  } else if (key == "fc_ghz") {
    config.fc_ghz = parse_double(key, value);
  } else if (key == "n_prb") {
    config.n_prb = parse_int(key, value);
  } else if (key == "prb_bandwidth_hz") {
    config.prb_bandwidth_hz = parse_double(key, value);
  } else if (key == "tti_s") {
    config.tti_s = parse_double(key, value);
  } else if (key == "n_subbands") {
    config.n_subbands = parse_int(key, value);
  } else if (key == "fading_rho") {
    config.fading_rho = parse_double(key, value);
  } else if (key == "noise_psd_dbm_hz") {
    config.noise_psd_dbm_hz = parse_double(key, value);
  } else if (key == "ue_noise_figure_db") {
    config.ue_noise_figure_db = parse_double(key, value);
  } else if (key == "se_cap") {
    config.se_cap = parse_double(key, value);
  } else if (key == "feedback_delay_ttis") {
    config.feedback_delay_ttis = parse_int(key, value);
  } else if (key == "csi_error_std_db") {
    config.csi_error_std_db = parse_double(key, value);
  } else if (key == "csi_hypothesis_include_in_set") {
    config.csi_hypothesis_include_in_set = parse_bool(key, value);
  } else if (key == "file_bytes") {
    config.file_bytes = parse_double(key, value);
  } else if (key == "lambda_per_s") {
    config.lambda_per_s = parse_double(key, value);
  } else if (key == "traffic_scope") {
    config.traffic_scope = traffic_scope_from_name(value);
  } else if (key == "pf_horizon_ttis") {
    config.pf_horizon_ttis = parse_double(key, value);
  } else if (key == "pf_floor_bps") {
    config.pf_floor_bps = parse_double(key, value);
  } else if (key == "warmup_ttis") {
    config.warmup_ttis = parse_int(key, value);
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

RunConfig parse_config_file(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file '" + path + "'");
  }
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(line_no) +
                        ": expected 'key = value', got '" + line + "'");
    }
    apply_config_value(base, trim(line.substr(0, eq)),
                       trim(line.substr(eq + 1)));
  }
  return base;
}

void RunConfig::validate() const {
  auto num = [](double v) {
    std::ostringstream os;
    os << v;
    return os.str();
  };
  check(users_per_trp >= 1, "users_per_trp", num(users_per_trp), "[1, inf)");
  check(trp_count >= 1, "trp_count", num(trp_count), "[1, inf)");
  check(max_coord >= 1 && max_coord <= trp_count, "max_coord", num(max_coord),
        "[1, trp_count]");
  check(!seeds.empty(), "seeds", "", "non-empty list");
  check(ttis >= 1, "ttis", num(ttis), "[1, inf)");
  check(isd_m > 0, "isd_m", num(isd_m), "(0, inf)");
  check(std::isfinite(tx_power_dbm), "tx_power_dbm", num(tx_power_dbm),
        "finite");
  check(n_tx >= 1 && n_tx <= kMaxAntennas, "n_tx", num(n_tx), "[1, 8]");
  check(n_rx >= 1 && n_rx <= kMaxAntennas, "n_rx", num(n_rx), "[1, 8]");
  check(fc_ghz > 0, "fc_ghz", num(fc_ghz), "(0, inf)");
  check(n_prb >= 1, "n_prb", num(n_prb), "[1, inf)");
  check(prb_bandwidth_hz > 0, "prb_bandwidth_hz", num(prb_bandwidth_hz),
        "(0, inf)");
  check(tti_s > 0, "tti_s", num(tti_s), "(0, inf)");
  check(n_subbands >= 1 && n_subbands <= n_prb, "n_subbands", num(n_subbands),
        "[1, n_prb]");
  check(fading_rho >= 0 && fading_rho <= 1, "fading_rho", num(fading_rho),
        "[0, 1]");
  check(se_cap > 0, "se_cap", num(se_cap), "(0, inf)");
  check(feedback_delay_ttis >= 0, "feedback_delay_ttis",
        num(feedback_delay_ttis), "[0, inf)");
  check(csi_error_std_db >= 0, "csi_error_std_db", num(csi_error_std_db),
        "[0, inf)");
  check(file_bytes > 0, "file_bytes", num(file_bytes), "(0, inf)");
  check(lambda_per_s > 0, "lambda_per_s", num(lambda_per_s), "(0, inf)");
  check(pf_horizon_ttis >= 1, "pf_horizon_ttis", num(pf_horizon_ttis),
        "[1, inf)");
  check(pf_floor_bps > 0, "pf_floor_bps", num(pf_floor_bps), "(0, inf)");
  check(warmup_ttis >= 0 && warmup_ttis < ttis, "warmup_ttis",
        num(warmup_ttis), "[0, ttis)");
}

std::string to_key_values(const RunConfig& config) {
  std::ostringstream os;
  os.precision(17);
  os << "scheme = " << scheme_name(config.scheme) << "\n";
  os << "users_per_trp = " << config.users_per_trp << "\n";
  os << "max_coord = " << config.max_coord << "\n";
  os << "seeds = ";
  for (size_t i = 0; i < config.seeds.size(); ++i) {
    os << (i ? "," : "") << config.seeds[i];
  }
  os << "\n";
  os << "ttis = " << config.ttis << "\n";
  os << "trp_count = " << config.trp_count << "\n";
  os << "isd_m = " << config.isd_m << "\n";
  os << "tx_power_dbm = " << config.tx_power_dbm << "\n";
  os << "n_tx = " << config.n_tx << "\n";
  os << "n_rx = " << config.n_rx << "\n";
  os << "trp_antenna_gain_dbi = " << config.trp_antenna_gain_dbi << "\n";
  os << "ue_antenna_gain_dbi = " << config.ue_antenna_gain_dbi << "\n";
  os << "fc_ghz = " << config.fc_ghz << "\n";
  os << "n_prb = " << config.n_prb << "\n";
  os << "prb_bandwidth_hz = " << config.prb_bandwidth_hz << "\n";
  os << "tti_s = " << config.tti_s << "\n";
  os << "n_subbands = " << config.n_subbands << "\n";
  os << "fading_rho = " << config.fading_rho << "\n";
  os << "noise_psd_dbm_hz = " << config.noise_psd_dbm_hz << "\n";
  os << "ue_noise_figure_db = " << config.ue_noise_figure_db << "\n";
  os << "se_cap = " << config.se_cap << "\n";
  os << "feedback_delay_ttis = " << config.feedback_delay_ttis << "\n";
  os << "csi_error_std_db = " << config.csi_error_std_db << "\n";
  os << "csi_hypothesis_include_in_set = "
     << (config.csi_hypothesis_include_in_set ? "true" : "false") << "\n";
  os << "file_bytes = " << config.file_bytes << "\n";
  os << "lambda_per_s = " << config.lambda_per_s << "\n";
  os << "traffic_scope = " << traffic_scope_name(config.traffic_scope) << "\n";
  os << "pf_horizon_ttis = " << config.pf_horizon_ttis << "\n";
  os << "pf_floor_bps = " << config.pf_floor_bps << "\n";
  os << "warmup_ttis = " << config.warmup_ttis << "\n";
  return os.str();
}

}  // namespace ncjt
