#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ncjt/phy.hpp"

namespace ncjt {

enum class TrafficScope { kNetwork, kPerTrp, kPerUe };

const char* traffic_scope_name(TrafficScope scope);
TrafficScope traffic_scope_from_name(const std::string& name);

/// Fully resolved run parameters. Field defaults are the reference
/// configuration; parse_config_file and flag overrides replace individual
/// values, and validate() must pass before any run starts.
struct RunConfig {
  Scheme scheme = Scheme::kNone;
  int users_per_trp = 3;
  int max_coord = 2;
  std::vector<uint64_t> seeds = {1};
  int ttis = 10000;

  // deployment
  int trp_count = 8;
  double isd_m = 30.0;
  double tx_power_dbm = 24.0;
  int n_tx = 2;
  int n_rx = 4;
  double trp_antenna_gain_dbi = 5.0;
  double ue_antenna_gain_dbi = 0.0;

  // band
  double fc_ghz = 3.5;
  int n_prb = 50;  // 10 MHz at 15 kHz subcarrier spacing
  double prb_bandwidth_hz = 180000.0;
  double tti_s = 0.001;

  // channel and receiver
  int n_subbands = 4;
  double fading_rho = 0.99;
  double noise_psd_dbm_hz = -174.0;
  double ue_noise_figure_db = 9.0;
  double se_cap = 7.4;
  int feedback_delay_ttis = 5;
  double csi_error_std_db = 0.0;              // 0 disables measurement error
  bool csi_hypothesis_include_in_set = false;  // in-set TRPs silent by default

  // traffic
  double file_bytes = 500000.0;
  double lambda_per_s = 4.0;
  TrafficScope traffic_scope = TrafficScope::kPerUe;

  // proportional fair
  double pf_horizon_ttis = 100.0;
  double pf_floor_bps = 1.0;

  int warmup_ttis = 200;

  double file_size_bits() const { return file_bytes * 8.0; }
  double tx_power_watt() const { return dbm_to_watt(tx_power_dbm); }

  /// Throws ConfigError naming key, value and allowed range.
  void validate() const;
};

/// Applies `key = value` lines from a simple structured-text file on top of
/// base. '#' starts a comment; unknown keys are rejected.
RunConfig parse_config_file(const std::string& path, RunConfig base = {});

/// Applies a single key/value pair (shared by file parsing and flag
/// overrides).
void apply_config_value(RunConfig& config, const std::string& key,
                        const std::string& value);

/// Emits the resolved config in the same key-value format parse accepts, so
/// a run can be reproduced from its own output.
std::string to_key_values(const RunConfig& config);

std::vector<uint64_t> parse_seed_list(const std::string& text);

}  // namespace ncjt
