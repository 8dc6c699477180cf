#pragma once

#include <cstdint>
#include <vector>

#include "ncjt/phy.hpp"
#include "ncjt/topology.hpp"

namespace ncjt {

struct PfConfig {
  double horizon_ttis = 100.0;  // exponential smoothing horizon
  double floor_bps = 1.0;       // keeps the metric denominator away from zero
};

/// Per-UE exponentially smoothed average throughput.
class PfState {
 public:
  PfState(const PfConfig& config, int n_ues)
      : config_(config), avg_bps_(n_ues, config.floor_bps) {}

  double avg_bps(int ue) const { return avg_bps_[ue]; }
  int n_ues() const { return static_cast<int>(avg_bps_.size()); }

  /// T <- (1 - 1/tau)T + (1/tau)(bits/dt), floored. Call once per UE per TTI,
  /// served or not.
  void update(int ue, double served_bits, double tti_seconds) {
    const double alpha = 1.0 / config_.horizon_ttis;
    const double rate = served_bits / tti_seconds;
    avg_bps_[ue] = std::max((1.0 - alpha) * avg_bps_[ue] + alpha * rate,
                            config_.floor_bps);
  }

 private:
  PfConfig config_;
  std::vector<double> avg_bps_;
};

/// Proportional-fair score.
inline double pf_metric(double inst_se, double avg_thr_bps) {
  return inst_se / avg_thr_bps;
}

/// Max-score candidate; exact ties resolve through the ascending-id tied list
/// indexed by prb modulo its size (lowest id on PRB 0, cycling across PRBs so
/// fully symmetric users alternate).
int pick_pf_winner(const std::vector<std::pair<int, double>>& scored, int prb);

/// Ring buffer of CSI reports keyed by (ue, trp, measured tti); a report
/// becomes consumable feedback_delay TTIs after measurement.
class CsiStore {
 public:
  CsiStore(int n_ues, int n_trps, int feedback_delay);

  void push(CsiReport report);

  /// The report measured exactly (now - delay) TTIs ago, or nullptr.
  const CsiReport* delayed(int ue, int trp, int now) const;

  int feedback_delay() const { return delay_; }
  int n_trps() const { return n_trps_; }

  /// Test hook: mutable access to a stored slot (info-access experiments).
  CsiReport* slot(int ue, int trp, int measured_tti);

 private:
  int n_trps_;
  int delay_;
  int slots_;
  std::vector<CsiReport> ring_;
};

/// Centralized access: reports from every (user, in-set TRP) pair. Required
/// by DPS and F-NCJT, which cannot run on less.
class SetWideCsi {
 public:
  SetWideCsi(const CsiStore& store, int now) : store_(&store), now_(now) {}
  const CsiReport* report(int ue, int trp) const {
    return store_->delayed(ue, trp, now_);
  }

 private:
  const CsiStore* store_;
  int now_;
};

/// Distributed access: one TRP's own reports only. The interface has no way
/// to read another TRP's CSI, which is what makes NF-NCJT and the baseline
/// runnable without backhaul CSI exchange.
class TrpLocalCsi {
 public:
  TrpLocalCsi(const CsiStore& store, int now, int trp_id)
      : store_(&store), now_(now), trp_id_(trp_id) {}
  int trp_id() const { return trp_id_; }
  const CsiReport* report(int ue) const {
    return store_->delayed(ue, trp_id_, now_);
  }

 private:
  const CsiStore* store_;
  int now_;
  int trp_id_;
};

/// Network-wide allocation for one TTI: rows[trp][prb].
struct ScheduleGrid {
  int n_prb = 0;
  std::vector<std::vector<GridEntry>> rows;

  ScheduleGrid() = default;
  ScheduleGrid(int n_trps, int n_prb_)
      : n_prb(n_prb_), rows(n_trps, std::vector<GridEntry>(n_prb_)) {}

  void clear() {
    for (auto& row : rows) {
      std::fill(row.begin(), row.end(), GridEntry{});
    }
  }

  int n_transmitting_prbs(int trp) const {
    int n = 0;
    for (const auto& entry : rows[trp]) {
      if (entry.transmitting()) ++n;
    }
    return n;
  }
};

/// Per-PRB rate lookup: the PRB's subband entry of a report, falling back to
/// the wideband average when the report carries no subband detail.
inline double report_se(const CsiReport& report, int subband) {
  return subband < static_cast<int>(report.subband_se.size())
             ? report.subband_se[subband]
             : report.spectral_efficiency;
}

/// DPS: one pass per CoMP set. Per PRB the PF winner over the set-wide user
/// vector (metric max_i c_{j,b_i} on that PRB's subband) is placed on its
/// best TRP; every other in-set TRP is muted on that PRB. prb_subband maps
/// each PRB to its subband index.
void schedule_dps(const CompSet& set, const SetWideCsi& csi, const PfState& pf,
                  const std::vector<uint8_t>& active,
                  const std::vector<int>& prb_subband, ScheduleGrid& grid);

/// F-NCJT: one pass per CoMP set. Per PRB the PF winner (metric
/// sum_i c_{j,b_i}) occupies that PRB on all in-set TRPs simultaneously.
void schedule_fncjt(const CompSet& set, const SetWideCsi& csi,
                    const PfState& pf, const std::vector<uint8_t>& active,
                    const std::vector<int>& prb_subband, ScheduleGrid& grid);

/// NF-NCJT: one pass per TRP with local CSI and local PF state, over the
/// set-wide user vector. Overlap with other TRPs arises only by coincidence.
void schedule_nfncjt(int trp_id, const std::vector<int>& set_user_vector,
                     const TrpLocalCsi& csi, const PfState& local_pf,
                     const std::vector<uint8_t>& active,
                     const std::vector<int>& prb_subband, ScheduleGrid& grid);

/// No coordination: per-TRP PF over the TRP's own attached users.
void schedule_baseline(int trp_id, const std::vector<int>& own_users,
                       const TrpLocalCsi& csi, const PfState& local_pf,
                       const std::vector<uint8_t>& active,
                       const std::vector<int>& prb_subband,
                       ScheduleGrid& grid);

}  // namespace ncjt
