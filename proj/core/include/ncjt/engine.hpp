#pragma once

#include <deque>
#include <functional>
#include <optional>
#include <vector>

#include "ncjt/channel.hpp"
#include "ncjt/config.hpp"
#include "ncjt/scheduler.hpp"

namespace ncjt {

struct TrafficFile {
  int ue_id = -1;
  double size_bits = 0;
  int arrival_tti = 0;
  double remaining_bits = 0;
  int completion_tti = -1;
};

struct ThroughputSample {
  int ue_id = -1;
  double file_bits = 0;
  double duration_s = 0;

  double throughput_bps() const { return file_bits / duration_s; }
};

struct Percentiles {
  double p5 = 0;
  double p50 = 0;
  double p95 = 0;
};

/// Empirical percentiles by linear interpolation over the sorted values;
/// absent when there are no samples.
std::optional<Percentiles> collect_percentiles(std::vector<double> values);

/// Single percentile (p in [0,100]) of an already sorted vector.
double percentile_sorted(const std::vector<double>& sorted, double p);

/// Poisson file arrivals for one TTI, each assigned to a uniformly random UE.
std::vector<TrafficFile> spawn_arrivals(Rng& rng, int tti, int n_ues,
                                        double mean_files_per_tti,
                                        double file_size_bits);

/// One seeded simulation run: deployment, channel, CSI pipeline, scheduling,
/// per-PRB transmission and throughput collection.
class Simulation {
 public:
  Simulation(const RunConfig& config, uint64_t seed);
  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  void run();
  void step_tti();

  /// Queues a file directly, bypassing the arrival process (tooling/tests).
  void enqueue_file(int ue, double size_bits);

  int now() const { return tti_; }
  const RunConfig& config() const { return config_; }
  const Layout& layout() const { return layout_; }
  const std::vector<Ue>& ues() const { return ues_; }
  const std::vector<CompSet>& comp_sets() const { return comp_sets_; }
  const CompSet& comp_set_of_ue(int ue) const {
    return comp_sets_[set_of_ue_[ue]];
  }
  const ChannelModel& channel() const { return channel_; }
  const ScheduleGrid& grid() const { return grid_; }
  const CsiStore& csi_store() const { return csi_store_; }
  const std::vector<ThroughputSample>& samples() const { return samples_; }
  const std::vector<uint8_t>& active_mask() const { return active_; }
  const std::deque<TrafficFile>& queue(int ue) const { return queues_[ue]; }
  double total_arrived_bits() const { return total_arrived_bits_; }
  double total_delivered_bits() const { return total_delivered_bits_; }
  double noise_power_w() const { return noise_power_w_; }
  int subband_of_prb(int prb) const {
    return prb * config_.n_subbands / config_.n_prb;
  }

  /// Per-PRB transmit power of a TRP under the current grid (total power
  /// split over its transmitting PRBs); 0 when the TRP is silent.
  double prb_power_w(int trp) const { return prb_power_w_[trp]; }

  /// Received column at target_ue from one transmitting grid entry on prb.
  CVec received_column(int target_ue, int trp, const GridEntry& entry,
                       int prb) const;

  /// Effective channel for target_ue on prb under the current grid.
  EffectiveChannel effective_channel(int target_ue, int prb) const;

  /// Called at the end of every step_tti (debug taps).
  std::function<void(const Simulation&)> on_tti_end;

 private:
  void measure_all_csi();
  void build_active_mask();
  void run_schedulers();
  void transmit_and_collect();
  double drain_ue_queue(int ue, double bits);

  RunConfig config_;
  Rng drop_rng_;
  Rng fading_rng_;
  Rng csi_rng_;
  Rng traffic_rng_;

  Layout layout_;
  ChannelModel channel_;
  std::vector<Ue> ues_;
  std::vector<CompSet> comp_sets_;
  std::vector<int> set_of_ue_;             // ue -> comp set index
  std::vector<std::vector<int>> own_users_;  // trp -> attached ue ids
  double noise_power_w_ = 0;

  CsiStore csi_store_;
  PfState pf_central_;
  std::vector<PfState> pf_local_;

  ScheduleGrid grid_;
  std::vector<int> prb_subband_;
  std::vector<double> prb_power_w_;
  std::vector<std::vector<CVec>> hyp_precoders_;  // [trp][subband]

  std::vector<std::deque<TrafficFile>> queues_;  // per-UE FIFO
  std::vector<uint8_t> active_;
  std::vector<double> bits_central_;
  std::vector<std::vector<double>> bits_local_;  // [trp][ue]
  std::vector<ThroughputSample> samples_;
  double total_arrived_bits_ = 0;
  double total_delivered_bits_ = 0;

  int tti_ = 0;
  bool centralized_pf_ = false;
};

}  // namespace ncjt
