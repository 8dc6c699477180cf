#include "ncjt/engine.hpp"

#include <algorithm>
#include <cassert>

namespace ncjt {

double percentile_sorted(const std::vector<double>& sorted, double p) {
  assert(!sorted.empty());
  if (sorted.size() == 1) return sorted[0];
  const double rank = p / 100.0 * (sorted.size() - 1);
  const size_t lo = static_cast<size_t>(rank);
  const size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = rank - lo;
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

std::optional<Percentiles> collect_percentiles(std::vector<double> values) {
  if (values.empty()) return std::nullopt;
  std::sort(values.begin(), values.end());
  Percentiles pct;
  pct.p5 = percentile_sorted(values, 5.0);
  pct.p50 = percentile_sorted(values, 50.0);
  pct.p95 = percentile_sorted(values, 95.0);
  return pct;
}

std::vector<TrafficFile> spawn_arrivals(Rng& rng, int tti, int n_ues,
                                        double mean_files_per_tti,
                                        double file_size_bits) {
  std::vector<TrafficFile> files;
  const int count = rng.poisson(mean_files_per_tti);
  files.reserve(count);
  for (int i = 0; i < count; ++i) {
    TrafficFile file;
    file.ue_id = std::min(static_cast<int>(rng.uniform() * n_ues), n_ues - 1);
    file.size_bits = file_size_bits;
    file.remaining_bits = file_size_bits;
    file.arrival_tti = tti;
    files.push_back(file);
  }
  return files;
}

namespace {

// Fixed substream tags so every consumer owns an independent rng.
constexpr uint64_t kDropTag = 0x64726f70;      // deployment draws
constexpr uint64_t kFadingTag = 0x66616465;    // fast fading
constexpr uint64_t kCsiTag = 0x637369;         // hypothesis precoders, csi error
constexpr uint64_t kTrafficTag = 0x74726166;   // arrivals

}  // namespace

Simulation::Simulation(const RunConfig& config, uint64_t seed)
    : config_(config),
      drop_rng_(Rng(seed).fork(kDropTag)),
      fading_rng_(Rng(seed).fork(kFadingTag)),
      csi_rng_(Rng(seed).fork(kCsiTag)),
      traffic_rng_(Rng(seed).fork(kTrafficTag)),
      layout_(build_indoor_layout({.trp_count = config.trp_count,
                                   .isd_m = config.isd_m,
                                   .tx_power_dbm = config.tx_power_dbm,
                                   .n_tx = config.n_tx,
                                   .trp_antenna_gain_dbi =
                                       config.trp_antenna_gain_dbi,
                                   .n_rx = config.n_rx})),
      channel_(layout_,
               ChannelConfig{.fc_ghz = config.fc_ghz,
                             .n_subbands = config.n_subbands,
                             .fading_rho = config.fading_rho,
                             .ue_antenna_gain_dbi = config.ue_antenna_gain_dbi},
               drop_rng_),
      csi_store_(config.users_per_trp * config.trp_count, config.trp_count,
                 config.feedback_delay_ttis),
      pf_central_(PfConfig{config.pf_horizon_ttis, config.pf_floor_bps},
                  config.users_per_trp * config.trp_count),
      grid_(config.trp_count, config.n_prb) {
  ues_ = drop_users(layout_, config_.users_per_trp, channel_, drop_rng_);
  channel_.init_fading(ues_, fading_rng_);

  // No coordination means every TRP stands alone; other schemes partition by
  // max_coord.
  const int coord = config_.scheme == Scheme::kNone ? 1 : config_.max_coord;
  comp_sets_ = form_comp_sets(layout_.trps, coord);
  fill_user_vectors(comp_sets_, ues_);

  const int n_ues = static_cast<int>(ues_.size());
  const int n_trps = static_cast<int>(layout_.trps.size());
  set_of_ue_.assign(n_ues, -1);
  for (const auto& set : comp_sets_) {
    for (int ue : set.user_vector) {
      set_of_ue_[ue] = set.id;
    }
  }
  own_users_.assign(n_trps, {});
  for (const auto& ue : ues_) {
    own_users_[ue.serving_trp].push_back(ue.id);
  }

  noise_power_w_ = NoiseConfig{config_.noise_psd_dbm_hz,
                               config_.ue_noise_figure_db,
                               config_.prb_bandwidth_hz}
                       .prb_noise_watts();

  pf_local_.assign(
      n_trps, PfState(PfConfig{config_.pf_horizon_ttis, config_.pf_floor_bps},
                      n_ues));
  centralized_pf_ =
      config_.scheme == Scheme::kDps || config_.scheme == Scheme::kFncjt;

  prb_subband_.resize(config_.n_prb);
  for (int prb = 0; prb < config_.n_prb; ++prb) {
    prb_subband_[prb] = subband_of_prb(prb);
  }
  prb_power_w_.assign(n_trps, 0.0);
  hyp_precoders_.assign(n_trps,
                        std::vector<CVec>(config_.n_subbands, CVec()));
  queues_.assign(n_ues, {});
  active_.assign(n_ues, 0);
  bits_central_.assign(n_ues, 0.0);
  bits_local_.assign(n_trps, std::vector<double>(n_ues, 0.0));
}

void Simulation::run() {
  for (int t = 0; t < config_.ttis; ++t) {
    step_tti();
  }
}

void Simulation::step_tti() {
  // The construction-time fading draw is the state of TTI 0.
  if (tti_ > 0) channel_.evolve_all(fading_rng_);

  const int n_ues = static_cast<int>(ues_.size());
  double mean_files = config_.lambda_per_s * config_.tti_s;
  if (config_.traffic_scope == TrafficScope::kPerTrp) {
    mean_files *= config_.trp_count;
  } else if (config_.traffic_scope == TrafficScope::kPerUe) {
    mean_files *= n_ues;
  }
  for (auto& file : spawn_arrivals(traffic_rng_, tti_, n_ues, mean_files,
                                   config_.file_size_bits())) {
    total_arrived_bits_ += file.size_bits;
    queues_[file.ue_id].push_back(file);
  }

  measure_all_csi();
  build_active_mask();
  run_schedulers();
  transmit_and_collect();

  ++tti_;
  if (on_tti_end) on_tti_end(*this);
}

void Simulation::measure_all_csi() {
  const int n_trps = static_cast<int>(layout_.trps.size());
  const int n_sb = config_.n_subbands;

  // One hypothesis precoder per (TRP, subband) per TTI, drawn for every TRP
  // regardless of set structure so rng consumption is scheme-independent.
  for (int b = 0; b < n_trps; ++b) {
    const int n_tx = layout_.trps[b].n_tx;
    for (int s = 0; s < n_sb; ++s) {
      CVec w(n_tx);
      for (int i = 0; i < n_tx; ++i) w(i) = csi_rng_.cgaussian();
      const double norm = w.norm();
      if (norm > 0) w /= norm;
      else w(0) = 1.0;
      hyp_precoders_[b][s] = std::move(w);
    }
  }

  // The UE cannot know TTI power splits, so the hypothesis spreads each
  // TRP's power uniformly over the band.
  std::vector<double> hyp_prb_power(n_trps);
  for (int b = 0; b < n_trps; ++b) {
    hyp_prb_power[b] = dbm_to_watt(layout_.trps[b].tx_power_dbm) / config_.n_prb;
  }

  std::vector<const CMat*> subband_channels(n_sb);
  std::vector<std::vector<CVec>> interference(n_sb);

  for (const auto& ue : ues_) {
    const CompSet& set = comp_sets_[set_of_ue_[ue.id]];
    auto in_set = [&](int trp) {
      return std::find(set.trp_ids.begin(), set.trp_ids.end(), trp) !=
             set.trp_ids.end();
    };
    for (int trp : set.trp_ids) {
      for (int s = 0; s < n_sb; ++s) {
        subband_channels[s] = &channel_.fading(ue.id, trp, s);
        auto& cols = interference[s];
        cols.clear();
        for (int other = 0; other < n_trps; ++other) {
          if (other == trp) continue;
          if (!config_.csi_hypothesis_include_in_set && in_set(other)) {
            continue;  // coordination candidates, not fixed interferers
          }
          const double amp = std::sqrt(hyp_prb_power[other] *
                                       channel_.coupling_gain_lin(ue.id, other));
          cols.push_back(amp * (channel_.fading(ue.id, other, s) *
                                hyp_precoders_[other][s]));
        }
      }
      double desired_amp =
          std::sqrt(hyp_prb_power[trp] * channel_.coupling_gain_lin(ue.id, trp));
      if (config_.csi_error_std_db > 0) {
        desired_amp *=
            std::pow(10.0, config_.csi_error_std_db * csi_rng_.gaussian() / 20.0);
      }
      csi_store_.push(measure_csi(ue.id, trp, tti_, subband_channels,
                                  desired_amp, interference, noise_power_w_,
                                  config_.se_cap));
    }
  }
}

void Simulation::build_active_mask() {
  for (const auto& ue : ues_) {
    const bool has_traffic =
        !queues_[ue.id].empty() && queues_[ue.id].front().remaining_bits > 0;
    const bool has_csi =
        csi_store_.delayed(ue.id, ue.serving_trp, tti_) != nullptr;
    active_[ue.id] = has_traffic && has_csi ? 1 : 0;
  }
}

void Simulation::run_schedulers() {
  grid_.clear();
  switch (config_.scheme) {
    case Scheme::kDps:
      for (const auto& set : comp_sets_) {
        schedule_dps(set, SetWideCsi(csi_store_, tti_), pf_central_, active_,
                     prb_subband_, grid_);
      }
      break;
    case Scheme::kFncjt:
      for (const auto& set : comp_sets_) {
        schedule_fncjt(set, SetWideCsi(csi_store_, tti_), pf_central_, active_,
                       prb_subband_, grid_);
      }
      break;
    case Scheme::kNfncjt:
      for (const auto& set : comp_sets_) {
        for (int trp : set.trp_ids) {
          schedule_nfncjt(trp, set.user_vector,
                          TrpLocalCsi(csi_store_, tti_, trp), pf_local_[trp],
                          active_, prb_subband_, grid_);
        }
      }
      break;
    case Scheme::kNone:
      for (int trp = 0; trp < static_cast<int>(layout_.trps.size()); ++trp) {
        schedule_baseline(trp, own_users_[trp],
                          TrpLocalCsi(csi_store_, tti_, trp), pf_local_[trp],
                          active_, prb_subband_, grid_);
      }
      break;
  }

  for (int trp = 0; trp < static_cast<int>(layout_.trps.size()); ++trp) {
    const int n_tx_prbs = grid_.n_transmitting_prbs(trp);
    prb_power_w_[trp] =
        n_tx_prbs > 0
            ? dbm_to_watt(layout_.trps[trp].tx_power_dbm) / n_tx_prbs
            : 0.0;
  }
}

CVec Simulation::received_column(int target_ue, int trp, const GridEntry& entry,
                                 int prb) const {
  const double amp = std::sqrt(prb_power_w_[trp] *
                               channel_.coupling_gain_lin(target_ue, trp));
  return amp * (channel_.fading(target_ue, trp, subband_of_prb(prb)) *
                entry.precoder.vector);
}

EffectiveChannel Simulation::effective_channel(int target_ue, int prb) const {
  std::vector<GridEntry> row(layout_.trps.size());
  for (size_t trp = 0; trp < layout_.trps.size(); ++trp) {
    row[trp] = grid_.rows[trp][prb];
  }
  return compose_effective_channel(
      config_.scheme, comp_sets_[set_of_ue_[target_ue]], row, target_ue,
      [&](int trp, const GridEntry& entry) {
        return received_column(target_ue, trp, entry, prb);
      },
      noise_power_w_);
}

void Simulation::enqueue_file(int ue, double size_bits) {
  TrafficFile file;
  file.ue_id = ue;
  file.size_bits = size_bits;
  file.remaining_bits = size_bits;
  file.arrival_tti = tti_;
  total_arrived_bits_ += size_bits;
  queues_[ue].push_back(file);
}

double Simulation::drain_ue_queue(int ue, double bits) {
  double delivered_total = 0;
  auto& queue = queues_[ue];
  while (bits > 0 && !queue.empty()) {
    TrafficFile& file = queue.front();
    const double delivered = std::min(bits, file.remaining_bits);
    file.remaining_bits -= delivered;
    bits -= delivered;
    delivered_total += delivered;
    if (file.remaining_bits > 0) break;
    file.completion_tti = tti_;
    // Arrival opens the TTI, completion closes it.
    const double duration =
        (file.completion_tti + 1 - file.arrival_tti) * config_.tti_s;
    if (file.completion_tti >= config_.warmup_ttis) {
      samples_.push_back({ue, file.size_bits, duration});
    }
    queue.pop_front();
  }
  total_delivered_bits_ += delivered_total;
  return delivered_total;
}

void Simulation::transmit_and_collect() {
  const int n_trps = static_cast<int>(layout_.trps.size());
  const int n_ues = static_cast<int>(ues_.size());
  std::fill(bits_central_.begin(), bits_central_.end(), 0.0);
  for (auto& row : bits_local_) std::fill(row.begin(), row.end(), 0.0);

  const double bits_per_se = config_.prb_bandwidth_hz * config_.tti_s;
  std::vector<int> targets;
  for (int prb = 0; prb < config_.n_prb; ++prb) {
    for (const auto& set : comp_sets_) {
      targets.clear();
      for (int trp : set.trp_ids) {
        const GridEntry& entry = grid_.rows[trp][prb];
        if (entry.transmitting() &&
            std::find(targets.begin(), targets.end(), entry.ue_id) ==
                targets.end()) {
          targets.push_back(entry.ue_id);
        }
      }
      for (int target : targets) {
        const EffectiveChannel eff = effective_channel(target, prb);
        const std::vector<double> sinrs = per_layer_sinrs(eff);
        for (size_t layer = 0; layer < sinrs.size(); ++layer) {
          const double layer_bits =
              sinr_to_se(sinrs[layer], config_.se_cap) * bits_per_se;
          const double delivered = drain_ue_queue(target, layer_bits);
          bits_central_[target] += delivered;
          bits_local_[eff.desired_trp_ids[layer]][target] += delivered;
        }
      }
    }
  }

  const double dt = config_.tti_s;
  if (centralized_pf_) {
    for (int ue = 0; ue < n_ues; ++ue) {
      pf_central_.update(ue, bits_central_[ue], dt);
    }
  } else {
    // Each TRP keeps its own PF state, refreshed from the aggregate rate the
    // UE reports in its feedback. Tracking only own-delivered bits would pin
    // partner-served users at the floor and make every TRP chase the other
    // TRP's users from their weaker link.
    for (int trp = 0; trp < n_trps; ++trp) {
      for (int ue = 0; ue < n_ues; ++ue) {
        pf_local_[trp].update(ue, bits_central_[ue], dt);
      }
    }
  }
}

}  // namespace ncjt
