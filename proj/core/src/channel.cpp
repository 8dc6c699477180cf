#include "ncjt/channel.hpp"

#include <cassert>

namespace ncjt {

double pathloss_db(double distance_3d_m, double fc_ghz, bool is_los) {
  const double d = std::max(distance_3d_m, 1.0);
  if (is_los) {
    return 16.9 * std::log10(d) + 32.8 + 20.0 * std::log10(fc_ghz);
  }
  return 43.3 * std::log10(d) + 11.5 + 20.0 * std::log10(fc_ghz);
}

double los_probability(double distance_2d_m) {
  if (distance_2d_m <= 18.0) return 1.0;
  if (distance_2d_m >= 37.0) return 0.5;
  // The raw exponential dips just below the 0.5 far-field floor shortly
  // before 37 m; flooring keeps the profile non-increasing.
  return std::max(0.5, std::exp(-(distance_2d_m - 18.0) / 27.0));
}

double draw_shadowing_db(bool is_los, Rng& rng) {
  const double sigma = is_los ? 3.0 : 4.0;
  return sigma * rng.gaussian();
}

double coupling_gain_db(double pathloss_db, double shadowing_db,
                        double trp_antenna_gain_dbi,
                        double ue_antenna_gain_dbi) {
  return -pathloss_db - shadowing_db + trp_antenna_gain_dbi +
         ue_antenna_gain_dbi;
}

void evolve_fading(LinkState& link, double rho, Rng& rng) {
  const double innov_scale = std::sqrt(1.0 - rho * rho);
  for (auto& h : link.fading) {
    for (int c = 0; c < h.cols(); ++c) {
      for (int r = 0; r < h.rows(); ++r) {
        h(r, c) = rho * h(r, c) + innov_scale * rng.cgaussian();
      }
    }
  }
}

ChannelModel::ChannelModel(const Layout& layout, const ChannelConfig& config,
                           Rng& drop_rng)
    : layout_(layout),
      config_(config),
      drop_rng_(&drop_rng),
      n_trps_(static_cast<int>(layout.trps.size())) {}

std::vector<double> ChannelModel::propose(const Vec3& ue_position) {
  assert(!has_pending_);
  pending_.clear();
  std::vector<double> gains(n_trps_);
  for (int b = 0; b < n_trps_; ++b) {
    const Trp& trp = layout_.trps[b];
    LinkState link;
    link.trp_id = trp.id;
    const double d2 = distance_2d(ue_position, trp.position);
    const double d3 = distance_3d(ue_position, trp.position);
    link.is_los = drop_rng_->uniform() < los_probability(d2);
    link.pathloss_db = pathloss_db(d3, config_.fc_ghz, link.is_los);
    link.shadowing_db = draw_shadowing_db(link.is_los, *drop_rng_);
    link.coupling_gain_db =
        coupling_gain_db(link.pathloss_db, link.shadowing_db,
                         trp.antenna_gain_dbi, config_.ue_antenna_gain_dbi);
    gains[b] = link.coupling_gain_db;
    pending_.push_back(std::move(link));
  }
  has_pending_ = true;
  return gains;
}

void ChannelModel::accept() {
  assert(has_pending_);
  const int ue_id = n_ues_++;
  for (auto& link : pending_) {
    link.ue_id = ue_id;
    gain_lin_.push_back(db_to_lin(link.coupling_gain_db));
    links_.push_back(std::move(link));
  }
  pending_.clear();
  has_pending_ = false;
}

void ChannelModel::reject() {
  assert(has_pending_);
  pending_.clear();
  has_pending_ = false;
}

void ChannelModel::init_fading(const std::vector<Ue>& ues, Rng& rng) {
  assert(static_cast<int>(ues.size()) == n_ues_);
  for (auto& link : links_) {
    const int n_rx = ues[link.ue_id].n_rx;
    const int n_tx = layout_.trps[link.trp_id].n_tx;
    link.fading.assign(config_.n_subbands, CMat(n_rx, n_tx));
    for (auto& h : link.fading) {
      for (int c = 0; c < n_tx; ++c) {
        for (int r = 0; r < n_rx; ++r) {
          h(r, c) = rng.cgaussian();
        }
      }
    }
  }
}

void ChannelModel::evolve_all(Rng& rng) {
  for (auto& link : links_) {
    evolve_fading(link, config_.fading_rho, rng);
  }
}

}  // namespace ncjt
