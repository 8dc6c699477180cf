#pragma once

#include <vector>

#include "ncjt/common.hpp"
#include "ncjt/rng.hpp"

namespace ncjt {

struct Trp {
  int id = 0;
  Vec3 position;
  double tx_power_dbm = 24.0;
  int n_tx = 2;  // uniform linear array
  double antenna_gain_dbi = 5.0;
};

struct Ue {
  int id = 0;
  Vec3 position;
  int n_rx = 4;
  int serving_trp = -1;
};

/// Disjoint group of coordinating TRPs. trp_ids keeps formation order (the
/// "first TRP in set order" tie-break refers to this order); user_vector is
/// the union of the member TRPs' attached users, ascending by UE id.
struct CompSet {
  int id = 0;
  std::vector<int> trp_ids;
  std::vector<int> user_vector;
};

struct FloorPlan {
  double length = 120.0;
  double width = 50.0;
};

struct LayoutConfig {
  int trp_count = 8;
  double isd_m = 30.0;
  double trp_height_m = 6.0;
  double ue_height_m = 1.5;
  double tx_power_dbm = 24.0;
  int n_tx = 2;
  double trp_antenna_gain_dbi = 5.0;
  int n_rx = 4;
};

struct Layout {
  std::vector<Trp> trps;
  FloorPlan floor;
  double ue_height_m = 1.5;
  int n_rx = 4;
};

/// Two rows of trp_count/2 TRPs inside a hall: x margin isd/2, rows at
/// y = 15 and y = 35, height 6 m. trp_count == 1 degenerates to the floor
/// center; odd counts > 1 are not expressible as this grid.
Layout build_indoor_layout(const LayoutConfig& config);

/// Drop-time coupling-gain provider. propose() returns one gain per TRP for a
/// candidate position and may be followed by exactly one accept() or
/// reject(); accept keeps whatever link state backed the proposal.
class LinkSampler {
 public:
  virtual ~LinkSampler() = default;
  virtual std::vector<double> propose(const Vec3& ue_position) = 0;
  virtual void accept() = 0;
  virtual void reject() = 0;
};

/// Index of the max-gain TRP; ties break toward the lowest TRP id.
int best_serving_trp(const std::vector<double>& gains_db);

/// Re-points every UE at its max-coupling-gain TRP. gains_db[u][b] indexes
/// UE u, TRP b.
void attach_users(std::vector<Ue>& ues, const std::vector<Trp>& trps,
                  const std::vector<std::vector<double>>& gains_db);

/// Uniform drops on the floor at UE height, attached on the fly; a candidate
/// whose best TRP already carries n_per_trp users is rejected and re-drawn,
/// so every TRP ends up serving exactly n_per_trp users.
std::vector<Ue> drop_users(const Layout& layout, int n_per_trp,
                           LinkSampler& sampler, Rng& rng,
                           int max_attempts = 1000000);

/// Greedy partition into disjoint sets of size <= max_coord: lowest
/// unassigned id seeds a set, nearest unassigned TRPs join it (distance ties
/// toward the lower id).
std::vector<CompSet> form_comp_sets(const std::vector<Trp>& trps,
                                    int max_coord);

/// Recomputes every set's user_vector from current attachments.
void fill_user_vectors(std::vector<CompSet>& sets, const std::vector<Ue>& ues);

}  // namespace ncjt
