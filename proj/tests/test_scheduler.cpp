#include <doctest.h>

#include <cmath>

#include "ncjt/rng.hpp"
#include "ncjt/scheduler.hpp"

using namespace ncjt;

namespace {

Precoder e1_precoder(int n_tx = 2) {
  Precoder p;
  p.vector = CVec::Unit(n_tx, 0);
  return p;
}

/// Store with one consumable report per (ue, trp) pair; se < 0 omits a pair.
CsiStore make_store(int n_ues, int n_trps, int delay, int now,
                    const std::vector<std::vector<double>>& se) {
  CsiStore store(n_ues, n_trps, delay);
  for (int ue = 0; ue < n_ues; ++ue) {
    for (int trp = 0; trp < n_trps; ++trp) {
      if (se[ue][trp] < 0) continue;
      CsiReport r;
      r.ue_id = ue;
      r.trp_id = trp;
      r.recommended_precoder = e1_precoder();
      r.spectral_efficiency = se[ue][trp];
      r.subband_se = {se[ue][trp]};
      r.measured_tti = now - delay;
      store.push(r);
    }
  }
  return store;
}

bool grids_equal(const ScheduleGrid& a, const ScheduleGrid& b) {
  if (a.n_prb != b.n_prb || a.rows.size() != b.rows.size()) return false;
  for (size_t trp = 0; trp < a.rows.size(); ++trp) {
    for (int prb = 0; prb < a.n_prb; ++prb) {
      const auto& x = a.rows[trp][prb];
      const auto& y = b.rows[trp][prb];
      if (x.kind != y.kind || x.ue_id != y.ue_id) return false;
      if (x.kind == GridEntry::Kind::kUser &&
          x.precoder.vector != y.precoder.vector) {
        return false;
      }
    }
  }
  return true;
}

std::vector<int> flat_sb(int n_prb) { return std::vector<int>(n_prb, 0); }

PfState pf_with(const std::vector<double>& avg_bps) {
  PfState pf(PfConfig{1.0, 1.0}, static_cast<int>(avg_bps.size()));
  for (size_t ue = 0; ue < avg_bps.size(); ++ue) {
    pf.update(static_cast<int>(ue), avg_bps[ue], 1.0);  // tau=1: T = rate
  }
  return pf;
}

}  // namespace

TEST_SUITE("scheduler") {

TEST_CASE("pf update fixed points") {
  PfState pf(PfConfig{100.0, 1.0}, 1);
  // Constant rate converges to that rate.
  for (int t = 0; t < 5000; ++t) pf.update(0, 500.0, 0.001);  // 500 kbps
  CHECK(pf.avg_bps(0) == doctest::Approx(500000.0).epsilon(1e-3));
  // Starvation decays to the floor.
  for (int t = 0; t < 5000; ++t) pf.update(0, 0.0, 0.001);
  CHECK(pf.avg_bps(0) == doctest::Approx(1.0));
  // Horizon one tracks the last TTI exactly.
  PfState fast(PfConfig{1.0, 1.0}, 1);
  fast.update(0, 123.0, 0.001);
  CHECK(fast.avg_bps(0) == doctest::Approx(123000.0));
}

TEST_CASE("pf winner: max metric, then lowest id, cycling by prb") {
  // Distinct scores: plain argmax.
  CHECK(pick_pf_winner({{1, 0.5}, {2, 0.9}, {3, 0.7}}, 0) == 2);
  // All equal: lowest id on PRB 0, cycling on later PRBs.
  const std::vector<std::pair<int, double>> tied = {{4, 1.0}, {2, 1.0}, {7, 1.0}};
  CHECK(pick_pf_winner(tied, 0) == 2);
  CHECK(pick_pf_winner(tied, 1) == 4);
  CHECK(pick_pf_winner(tied, 2) == 7);
  CHECK(pick_pf_winner(tied, 3) == 2);
}

TEST_CASE("pf metric prefers starved users and higher rates") {
  // Equal rate, different history: the starved user wins.
  CHECK(pf_metric(2.0, 1.0) > pf_metric(2.0, 2.0));
  // Equal history, different rate: the faster user wins.
  CHECK(pf_metric(3.5, 5.0) > pf_metric(2.0, 5.0));
}

TEST_CASE("csi store delay-queue semantics") {
  CsiStore store(1, 1, 5);
  CsiReport r;
  r.ue_id = 0;
  r.trp_id = 0;
  r.spectral_efficiency = 3.0;
  r.measured_tti = 2;
  store.push(r);
  // At tti 7 the report measured at 2 becomes consumable.
  const CsiReport* got = store.delayed(0, 0, 7);
  REQUIRE(got != nullptr);
  CHECK(got->measured_tti == 2);
  CHECK(got->spectral_efficiency == 3.0);
  // Neighboring TTIs see nothing.
  CHECK(store.delayed(0, 0, 6) == nullptr);
  CHECK(store.delayed(0, 0, 8) == nullptr);
  // Before the pipeline fills there is nothing to consume.
  CHECK(store.delayed(0, 0, 3) == nullptr);
}

TEST_CASE("point selection serves from the best TRP and mutes the rest") {
  CompSet set;
  set.trp_ids = {0, 1};
  set.user_vector = {0};
  const CsiStore store = make_store(1, 2, 5, 10, {{2.0, 3.5}});
  const PfState pf = pf_with({1000.0});
  ScheduleGrid grid(2, 4);
  schedule_dps(set, SetWideCsi(store, 10), pf, {1}, flat_sb(grid.n_prb), grid);
  for (int prb = 0; prb < 4; ++prb) {
    CHECK(grid.rows[1][prb].kind == GridEntry::Kind::kUser);
    CHECK(grid.rows[1][prb].ue_id == 0);
    CHECK(grid.rows[0][prb].kind == GridEntry::Kind::kBlank);
  }
}

TEST_CASE("point selection alternates symmetric users across prbs") {
  CompSet set;
  set.trp_ids = {0, 1};
  set.user_vector = {0, 1};
  const CsiStore store = make_store(2, 2, 5, 10, {{2.0, 2.0}, {2.0, 2.0}});
  const PfState pf = pf_with({1000.0, 1000.0});
  ScheduleGrid grid(2, 2);
  schedule_dps(set, SetWideCsi(store, 10), pf, {1, 1}, flat_sb(grid.n_prb), grid);
  // Equal c at both TRPs places winners on the first TRP in set order.
  CHECK(grid.rows[0][0].ue_id == 0);
  CHECK(grid.rows[0][1].ue_id == 1);
  CHECK(grid.rows[1][0].kind == GridEntry::Kind::kBlank);
  CHECK(grid.rows[1][1].kind == GridEntry::Kind::kBlank);
}

TEST_CASE("point selection never co-schedules inside a set") {
  Rng rng(71);
  CompSet set;
  set.trp_ids = {0, 1, 2};
  set.user_vector = {0, 1, 2, 3, 4};
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::vector<double>> se(5, std::vector<double>(3));
    std::vector<uint8_t> active(5);
    for (int ue = 0; ue < 5; ++ue) {
      active[ue] = rng.uniform() < 0.7 ? 1 : 0;
      for (int trp = 0; trp < 3; ++trp) se[ue][trp] = rng.uniform(0.1, 7.0);
    }
    const CsiStore store = make_store(5, 3, 0, 0, se);
    const PfState pf = pf_with({500, 900, 100, 2000, 700});
    ScheduleGrid grid(3, 6);
    schedule_dps(set, SetWideCsi(store, 0), pf, active, flat_sb(grid.n_prb), grid);
    const bool any_active = active[0] || active[1] || active[2] || active[3] ||
                            active[4];
    for (int prb = 0; prb < 6; ++prb) {
      int transmitting = 0;
      int muted = 0;
      for (int trp : set.trp_ids) {
        if (grid.rows[trp][prb].kind == GridEntry::Kind::kUser) ++transmitting;
        if (grid.rows[trp][prb].kind == GridEntry::Kind::kBlank) ++muted;
      }
      if (any_active) {
        CHECK(transmitting == 1);
        CHECK(muted == 2);
      } else {
        CHECK(transmitting == 0);
        CHECK(muted == 0);  // nothing to protect: idle, not blank
      }
    }
  }
}

TEST_CASE("full overlap scheduling sums the per-TRP rates") {
  CompSet set;
  set.trp_ids = {0, 1};
  set.user_vector = {0, 1};
  // eta: ue0 = 5.5, ue1 = 4.8 at equal history -> ue0 takes every PRB.
  const CsiStore store = make_store(2, 2, 5, 10, {{2.0, 3.5}, {2.4, 2.4}});
  const PfState pf = pf_with({1000.0, 1000.0});
  ScheduleGrid grid(2, 4);
  schedule_fncjt(set, SetWideCsi(store, 10), pf, {1, 1}, flat_sb(grid.n_prb), grid);
  for (int prb = 0; prb < 4; ++prb) {
    for (int trp : set.trp_ids) {
      CHECK(grid.rows[trp][prb].kind == GridEntry::Kind::kUser);
      CHECK(grid.rows[trp][prb].ue_id == 0);
    }
  }
}

TEST_CASE("full overlap favors one strong link over two useful ones") {
  CompSet set;
  set.trp_ids = {0, 1};
  set.user_vector = {0, 1};
  // 5.0 + 0.01 > 2.4 + 2.4 even though the second link is useless.
  const CsiStore store = make_store(2, 2, 5, 10, {{5.0, 0.01}, {2.4, 2.4}});
  const PfState pf = pf_with({1000.0, 1000.0});
  ScheduleGrid grid(2, 8);
  schedule_fncjt(set, SetWideCsi(store, 10), pf, {1, 1}, flat_sb(grid.n_prb), grid);
  for (int prb = 0; prb < 8; ++prb) {
    CHECK(grid.rows[0][prb].ue_id == 0);
    CHECK(grid.rows[1][prb].ue_id == 0);
  }
}

TEST_CASE("local schedulers split users by local channel quality") {
  CompSet set;
  set.trp_ids = {0, 1};
  set.user_vector = {0, 1};
  const CsiStore store = make_store(2, 2, 5, 10, {{3.0, 1.0}, {1.0, 3.0}});
  const PfState pf = pf_with({1000.0, 1000.0});
  ScheduleGrid grid(2, 4);
  schedule_nfncjt(0, set.user_vector, TrpLocalCsi(store, 10, 0), pf, {1, 1},
                  flat_sb(grid.n_prb), grid);
  schedule_nfncjt(1, set.user_vector, TrpLocalCsi(store, 10, 1), pf, {1, 1},
                  flat_sb(grid.n_prb), grid);
  for (int prb = 0; prb < 4; ++prb) {
    CHECK(grid.rows[0][prb].ue_id == 0);
    CHECK(grid.rows[1][prb].ue_id == 1);
  }
}

TEST_CASE("local schedulers coincide on a lone user, matching full overlap") {
  CompSet set;
  set.trp_ids = {0, 1};
  set.user_vector = {0};
  const CsiStore store = make_store(1, 2, 5, 10, {{2.5, 1.5}});
  const PfState pf = pf_with({1000.0});
  ScheduleGrid nf_grid(2, 4);
  schedule_nfncjt(0, set.user_vector, TrpLocalCsi(store, 10, 0), pf, {1},
                  flat_sb(nf_grid.n_prb), nf_grid);
  schedule_nfncjt(1, set.user_vector, TrpLocalCsi(store, 10, 1), pf, {1},
                  flat_sb(nf_grid.n_prb), nf_grid);
  ScheduleGrid f_grid(2, 4);
  schedule_fncjt(set, SetWideCsi(store, 10), pf, {1}, flat_sb(f_grid.n_prb), f_grid);
  CHECK(grids_equal(nf_grid, f_grid));
}

TEST_CASE("baseline equals distributed scheduling over singleton sets") {
  const CsiStore store = make_store(3, 1, 5, 10, {{2.0}, {3.0}, {1.0}});
  const PfState pf = pf_with({900.0, 400.0, 1600.0});
  const std::vector<int> users = {0, 1, 2};
  ScheduleGrid a(1, 6), b(1, 6);
  schedule_baseline(0, users, TrpLocalCsi(store, 10, 0), pf, {1, 1, 1}, flat_sb(a.n_prb), a);
  schedule_nfncjt(0, users, TrpLocalCsi(store, 10, 0), pf, {1, 1, 1}, flat_sb(b.n_prb), b);
  CHECK(grids_equal(a, b));
}

TEST_CASE("one user per TRP keeps every PRB") {
  const CsiStore store = make_store(1, 1, 5, 10, {{2.0}});
  const PfState pf = pf_with({1000.0});
  ScheduleGrid grid(1, 50);
  schedule_baseline(0, {0}, TrpLocalCsi(store, 10, 0), pf, {1}, flat_sb(grid.n_prb), grid);
  for (int prb = 0; prb < 50; ++prb) {
    CHECK(grid.rows[0][prb].ue_id == 0);
  }
}

TEST_CASE("distributed scheduling ignores other TRPs' reports") {
  CompSet set;
  set.trp_ids = {0, 1};
  set.user_vector = {0, 1};
  const std::vector<std::vector<double>> se = {{2.0, 3.5}, {1.0, 0.5}};
  CsiStore clean = make_store(2, 2, 5, 10, se);
  CsiStore corrupted = make_store(2, 2, 5, 10, se);
  for (int ue = 0; ue < 2; ++ue) {
    CsiReport* foreign = corrupted.slot(ue, 1, 5);
    REQUIRE(foreign != nullptr);
    foreign->spectral_efficiency = 99.0;
    foreign->subband_se = {99.0};
  }
  const PfState pf = pf_with({1000.0, 1000.0});

  ScheduleGrid a(2, 4), b(2, 4);
  schedule_nfncjt(0, set.user_vector, TrpLocalCsi(clean, 10, 0), pf, {1, 1}, flat_sb(a.n_prb), a);
  schedule_nfncjt(0, set.user_vector, TrpLocalCsi(corrupted, 10, 0), pf, {1, 1},
                  flat_sb(b.n_prb), b);
  CHECK(grids_equal(a, b));

  // The centralized scheduler does depend on the full set-wide view: the
  // corrupted report moves ue0's placement.
  ScheduleGrid c(2, 4), d(2, 4);
  schedule_dps(set, SetWideCsi(clean, 10), pf, {1, 1}, flat_sb(c.n_prb), c);
  schedule_dps(set, SetWideCsi(corrupted, 10), pf, {1, 1}, flat_sb(d.n_prb), d);
  CHECK(!grids_equal(c, d));
}

TEST_CASE("winners are invariant to a common rate scale") {
  CompSet set;
  set.trp_ids = {0, 1};
  set.user_vector = {0, 1, 2};
  std::vector<std::vector<double>> se = {{2.0, 3.5}, {2.4, 2.4}, {0.7, 1.1}};
  std::vector<std::vector<double>> scaled = se;
  for (auto& row : scaled) {
    for (auto& c : row) c *= 7.0;
  }
  const PfState pf = pf_with({500.0, 900.0, 100.0});
  const CsiStore store_a = make_store(3, 2, 5, 10, se);
  const CsiStore store_b = make_store(3, 2, 5, 10, scaled);
  for (auto* schedule : {&schedule_dps, &schedule_fncjt}) {
    ScheduleGrid a(2, 8), b(2, 8);
    (*schedule)(set, SetWideCsi(store_a, 10), pf, {1, 1, 1}, flat_sb(a.n_prb), a);
    (*schedule)(set, SetWideCsi(store_b, 10), pf, {1, 1, 1}, flat_sb(b.n_prb), b);
    CHECK(grids_equal(a, b));
  }
}

TEST_CASE("no active users leaves the grid idle") {
  CompSet set;
  set.trp_ids = {0, 1};
  set.user_vector = {0};
  const CsiStore store = make_store(1, 2, 5, 10, {{2.0, 3.0}});
  const PfState pf = pf_with({1000.0});
  ScheduleGrid grid(2, 4);
  schedule_dps(set, SetWideCsi(store, 10), pf, {0}, flat_sb(grid.n_prb), grid);
  schedule_fncjt(set, SetWideCsi(store, 10), pf, {0}, flat_sb(grid.n_prb), grid);
  schedule_nfncjt(0, set.user_vector, TrpLocalCsi(store, 10, 0), pf, {0}, flat_sb(grid.n_prb), grid);
  for (int trp = 0; trp < 2; ++trp) {
    for (int prb = 0; prb < 4; ++prb) {
      CHECK(grid.rows[trp][prb].kind == GridEntry::Kind::kIdle);
    }
  }
}

TEST_CASE("identical inputs produce identical grids") {
  CompSet set;
  set.trp_ids = {0, 1};
  set.user_vector = {0, 1};
  const CsiStore store = make_store(2, 2, 5, 10, {{2.0, 3.5}, {2.4, 2.4}});
  const PfState pf = pf_with({700.0, 1100.0});
  ScheduleGrid a(2, 16), b(2, 16);
  schedule_fncjt(set, SetWideCsi(store, 10), pf, {1, 1}, flat_sb(a.n_prb), a);
  schedule_fncjt(set, SetWideCsi(store, 10), pf, {1, 1}, flat_sb(b.n_prb), b);
  CHECK(grids_equal(a, b));
}

TEST_CASE("long-run proportional fairness splits symmetric users evenly") {
  // Two statistically identical full-buffer users on one TRP: PRB shares
  // converge to one half each.
  Rng rng(79);
  const int n_prb = 50;
  const int ttis = 10000;
  PfState pf(PfConfig{100.0, 1.0}, 2);
  long share[2] = {0, 0};
  for (int t = 0; t < ttis; ++t) {
    std::vector<std::vector<double>> se(2, std::vector<double>(1));
    for (int ue = 0; ue < 2; ++ue) {
      se[ue][0] = sinr_to_se(std::pow(10.0, rng.uniform(0.0, 2.5)));
    }
    const CsiStore store = make_store(2, 1, 0, t, se);
    ScheduleGrid grid(1, n_prb);
    schedule_baseline(0, {0, 1}, TrpLocalCsi(store, t, 0), pf, {1, 1}, flat_sb(n_prb), grid);
    double bits[2] = {0, 0};
    for (int prb = 0; prb < n_prb; ++prb) {
      const int ue = grid.rows[0][prb].ue_id;
      ++share[ue];
      bits[ue] += se[ue][0] * 180000.0 * 0.001;
    }
    pf.update(0, bits[0], 0.001);
    pf.update(1, bits[1], 0.001);
  }
  const double total = double(share[0] + share[1]);
  CHECK(share[0] / total > 0.45);
  CHECK(share[0] / total < 0.55);
}

}  // TEST_SUITE
