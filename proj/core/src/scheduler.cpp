#include "ncjt/scheduler.hpp"

#include <algorithm>
#include <cassert>

namespace ncjt {

int pick_pf_winner(const std::vector<std::pair<int, double>>& scored, int prb) {
  assert(!scored.empty());
  double best = scored[0].second;
  for (const auto& [ue, score] : scored) {
    if (score > best) best = score;
  }
  std::vector<int> tied;
  for (const auto& [ue, score] : scored) {
    if (score == best) tied.push_back(ue);
  }
  std::sort(tied.begin(), tied.end());
  return tied[prb % tied.size()];
}

CsiStore::CsiStore(int n_ues, int n_trps, int feedback_delay)
    : n_trps_(n_trps), delay_(feedback_delay), slots_(feedback_delay + 1),
      ring_(static_cast<size_t>(n_ues) * n_trps * slots_) {}

void CsiStore::push(CsiReport report) {
  const size_t idx =
      (static_cast<size_t>(report.ue_id) * n_trps_ + report.trp_id) * slots_ +
      report.measured_tti % slots_;
  ring_[idx] = std::move(report);
}

const CsiReport* CsiStore::delayed(int ue, int trp, int now) const {
  const int measured = now - delay_;
  if (measured < 0) return nullptr;
  const size_t idx =
      (static_cast<size_t>(ue) * n_trps_ + trp) * slots_ + measured % slots_;
  const CsiReport& report = ring_[idx];
  return report.measured_tti == measured ? &report : nullptr;
}

CsiReport* CsiStore::slot(int ue, int trp, int measured_tti) {
  const size_t idx = (static_cast<size_t>(ue) * n_trps_ + trp) * slots_ +
                     measured_tti % slots_;
  return ring_[idx].measured_tti == measured_tti ? &ring_[idx] : nullptr;
}

void schedule_dps(const CompSet& set, const SetWideCsi& csi, const PfState& pf,
                  const std::vector<uint8_t>& active,
                  const std::vector<int>& prb_subband, ScheduleGrid& grid) {
  // Per candidate and subband: the best in-set TRP and its rate.
  struct Candidate {
    int ue;
    std::vector<double> eta;              // [subband] max_i c
    std::vector<const CsiReport*> best;   // [subband] report at the max TRP
    std::vector<int> best_trp;            // [subband]
  };
  const int n_sb = 1 + *std::max_element(prb_subband.begin(), prb_subband.end());
  std::vector<Candidate> cands;
  for (int ue : set.user_vector) {
    if (!active[ue]) continue;
    Candidate cand;
    cand.ue = ue;
    cand.eta.assign(n_sb, 0.0);
    cand.best.assign(n_sb, nullptr);
    cand.best_trp.assign(n_sb, -1);
    for (int trp : set.trp_ids) {
      const CsiReport* report = csi.report(ue, trp);
      if (report == nullptr) continue;
      for (int s = 0; s < n_sb; ++s) {
        const double c = report_se(*report, s);
        // Strict > keeps the first TRP in set order on equal c.
        if (cand.best_trp[s] < 0 || c > cand.eta[s]) {
          cand.eta[s] = c;
          cand.best[s] = report;
          cand.best_trp[s] = trp;
        }
      }
    }
    if (cand.best_trp[0] >= 0) cands.push_back(std::move(cand));
  }
  if (cands.empty()) return;  // rows stay idle

  std::vector<std::pair<int, double>> scored(cands.size());
  for (int prb = 0; prb < grid.n_prb; ++prb) {
    const int sb = prb_subband[prb];
    for (size_t i = 0; i < cands.size(); ++i) {
      scored[i] = {cands[i].ue,
                   pf_metric(cands[i].eta[sb], pf.avg_bps(cands[i].ue))};
    }
    const int winner_ue = pick_pf_winner(scored, prb);
    const auto& winner = *std::find_if(
        cands.begin(), cands.end(),
        [&](const Candidate& c) { return c.ue == winner_ue; });
    for (int trp : set.trp_ids) {
      GridEntry& entry = grid.rows[trp][prb];
      if (trp == winner.best_trp[sb]) {
        entry.kind = GridEntry::Kind::kUser;
        entry.ue_id = winner.ue;
        entry.precoder = winner.best[sb]->recommended_precoder;
      } else {
        entry = GridEntry{};
        entry.kind = GridEntry::Kind::kBlank;
      }
    }
  }
}

void schedule_fncjt(const CompSet& set, const SetWideCsi& csi,
                    const PfState& pf, const std::vector<uint8_t>& active,
                    const std::vector<int>& prb_subband, ScheduleGrid& grid) {
  struct Candidate {
    int ue;
    std::vector<double> eta;                // [subband] sum_i c
    std::vector<const CsiReport*> reports;  // one per in-set TRP, set order
  };
  const int n_sb = 1 + *std::max_element(prb_subband.begin(), prb_subband.end());
  std::vector<Candidate> cands;
  for (int ue : set.user_vector) {
    if (!active[ue]) continue;
    Candidate cand;
    cand.ue = ue;
    cand.eta.assign(n_sb, 0.0);
    bool complete = true;
    for (int trp : set.trp_ids) {
      const CsiReport* report = csi.report(ue, trp);
      if (report == nullptr) {
        complete = false;
        break;
      }
      for (int s = 0; s < n_sb; ++s) cand.eta[s] += report_se(*report, s);
      cand.reports.push_back(report);
    }
    // Full overlap needs a precoder at every in-set TRP; reports for a UE
    // are measured together, so this only filters the warm-up TTIs.
    if (complete) cands.push_back(std::move(cand));
  }
  if (cands.empty()) return;

  std::vector<std::pair<int, double>> scored(cands.size());
  for (int prb = 0; prb < grid.n_prb; ++prb) {
    const int sb = prb_subband[prb];
    for (size_t i = 0; i < cands.size(); ++i) {
      scored[i] = {cands[i].ue,
                   pf_metric(cands[i].eta[sb], pf.avg_bps(cands[i].ue))};
    }
    const int winner_ue = pick_pf_winner(scored, prb);
    const auto& winner =
        *std::find_if(cands.begin(), cands.end(),
                      [&](const Candidate& c) { return c.ue == winner_ue; });
    for (size_t i = 0; i < set.trp_ids.size(); ++i) {
      GridEntry& entry = grid.rows[set.trp_ids[i]][prb];
      entry.kind = GridEntry::Kind::kUser;
      entry.ue_id = winner.ue;
      entry.precoder = winner.reports[i]->recommended_precoder;
    }
  }
}

namespace {

void schedule_local(int trp_id, const std::vector<int>& users,
                    const TrpLocalCsi& csi, const PfState& local_pf,
                    const std::vector<uint8_t>& active,
                    const std::vector<int>& prb_subband, ScheduleGrid& grid) {
  assert(csi.trp_id() == trp_id);
  struct Candidate {
    int ue;
    const CsiReport* report;
  };
  std::vector<Candidate> cands;
  for (int ue : users) {
    if (!active[ue]) continue;
    const CsiReport* report = csi.report(ue);
    if (report != nullptr) cands.push_back({ue, report});
  }
  if (cands.empty()) return;

  std::vector<std::pair<int, double>> scored(cands.size());
  for (int prb = 0; prb < grid.n_prb; ++prb) {
    const int sb = prb_subband[prb];
    for (size_t i = 0; i < cands.size(); ++i) {
      scored[i] = {cands[i].ue,
                   pf_metric(report_se(*cands[i].report, sb),
                             local_pf.avg_bps(cands[i].ue))};
    }
    const int winner_ue = pick_pf_winner(scored, prb);
    const auto& winner =
        *std::find_if(cands.begin(), cands.end(),
                      [&](const Candidate& c) { return c.ue == winner_ue; });
    GridEntry& entry = grid.rows[trp_id][prb];
    entry.kind = GridEntry::Kind::kUser;
    entry.ue_id = winner.ue;
    entry.precoder = winner.report->recommended_precoder;
  }
}

}  // namespace

void schedule_nfncjt(int trp_id, const std::vector<int>& set_user_vector,
                     const TrpLocalCsi& csi, const PfState& local_pf,
                     const std::vector<uint8_t>& active,
                     const std::vector<int>& prb_subband, ScheduleGrid& grid) {
  schedule_local(trp_id, set_user_vector, csi, local_pf, active, prb_subband,
                 grid);
}

void schedule_baseline(int trp_id, const std::vector<int>& own_users,
                       const TrpLocalCsi& csi, const PfState& local_pf,
                       const std::vector<uint8_t>& active,
                       const std::vector<int>& prb_subband,
                       ScheduleGrid& grid) {
  schedule_local(trp_id, own_users, csi, local_pf, active, prb_subband, grid);
}

}  // namespace ncjt
