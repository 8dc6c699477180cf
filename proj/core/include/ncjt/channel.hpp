#pragma once

#include <vector>

#include "ncjt/common.hpp"
#include "ncjt/rng.hpp"
#include "ncjt/topology.hpp"

namespace ncjt {

struct NoiseConfig {
  double psd_dbm_hz = -174.0;
  double ue_noise_figure_db = 9.0;
  double prb_bandwidth_hz = 180000.0;  // 12 subcarriers x 15 kHz

  double prb_noise_watts() const {
    return dbm_to_watt(psd_dbm_hz + lin_to_db(prb_bandwidth_hz) +
                       ue_noise_figure_db);
  }
};

struct ChannelConfig {
  double fc_ghz = 3.5;
  int n_subbands = 4;
  double fading_rho = 0.99;  // AR(1) coefficient per TTI
  double ue_antenna_gain_dbi = 0.0;
};

/// One (UE, TRP) link: large-scale terms fixed at drop time, per-subband
/// fast fading evolved per TTI.
struct LinkState {
  int ue_id = -1;
  int trp_id = -1;
  bool is_los = false;
  double pathloss_db = 0;
  double shadowing_db = 0;
  double coupling_gain_db = 0;  // -pathloss - shadowing + antenna gains
  std::vector<CMat> fading;     // [subband], n_rx x n_tx, unit element power
};

/// Indoor-hotspot distance-dependent pathloss; distances below 1 m clamp.
double pathloss_db(double distance_3d_m, double fc_ghz, bool is_los);

/// Line-of-sight probability from 2-D distance.
double los_probability(double distance_2d_m);

/// Lognormal shadowing in dB: sigma 3 dB LOS, 4 dB NLOS.
double draw_shadowing_db(bool is_los, Rng& rng);

double coupling_gain_db(double pathloss_db, double shadowing_db,
                        double trp_antenna_gain_dbi,
                        double ue_antenna_gain_dbi = 0.0);

/// One AR(1) step on every subband: h <- rho*h + sqrt(1-rho^2)*innovation.
void evolve_fading(LinkState& link, double rho, Rng& rng);

/// Owns all (UE, TRP) links for one simulation run. Serves as the drop-time
/// gain sampler: propose() draws LOS + shadowing for a candidate position,
/// accept() commits those draws as the next UE's links.
class ChannelModel : public LinkSampler {
 public:
  ChannelModel(const Layout& layout, const ChannelConfig& config, Rng& drop_rng);

  // LinkSampler
  std::vector<double> propose(const Vec3& ue_position) override;
  void accept() override;
  void reject() override;

  /// Draws initial i.i.d. CN(0,1) fading for every committed link.
  void init_fading(const std::vector<Ue>& ues, Rng& rng);

  /// Advances fast fading on all links by one TTI.
  void evolve_all(Rng& rng);

  const LinkState& link(int ue_id, int trp_id) const {
    return links_[ue_id * n_trps_ + trp_id];
  }
  double coupling_gain_lin(int ue_id, int trp_id) const {
    return gain_lin_[ue_id * n_trps_ + trp_id];
  }
  const CMat& fading(int ue_id, int trp_id, int subband) const {
    return link(ue_id, trp_id).fading[subband];
  }
  int n_subbands() const { return config_.n_subbands; }
  int n_trps() const { return n_trps_; }
  int n_ues() const { return n_ues_; }

 private:
  const Layout& layout_;
  ChannelConfig config_;
  Rng* drop_rng_;
  int n_trps_;
  int n_ues_ = 0;
  std::vector<LinkState> links_;     // committed, [ue * n_trps + trp]
  std::vector<double> gain_lin_;
  std::vector<LinkState> pending_;   // last proposal
  bool has_pending_ = false;
};

}  // namespace ncjt
