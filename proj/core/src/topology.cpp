#include "ncjt/topology.hpp"

#include <algorithm>
#include <limits>

namespace ncjt {

Layout build_indoor_layout(const LayoutConfig& config) {
  if (config.trp_count < 1) {
    throw ConfigError("trp_count must be >= 1, got " +
                      std::to_string(config.trp_count));
  }
  if (config.isd_m <= 0) {
    throw ConfigError("isd_m must be > 0");
  }

  Layout layout;
  layout.ue_height_m = config.ue_height_m;
  layout.n_rx = config.n_rx;

  auto make_trp = [&](int id, double x, double y) {
    Trp trp;
    trp.id = id;
    trp.position = {x, y, config.trp_height_m};
    trp.tx_power_dbm = config.tx_power_dbm;
    trp.n_tx = config.n_tx;
    trp.antenna_gain_dbi = config.trp_antenna_gain_dbi;
    return trp;
  };

  if (config.trp_count == 1) {
    layout.floor = FloorPlan{};
    layout.trps.push_back(
        make_trp(0, layout.floor.length / 2, layout.floor.width / 2));
    return layout;
  }
  if (config.trp_count % 2 != 0) {
    throw ConfigError("trp_count " + std::to_string(config.trp_count) +
                      " is not expressible as a two-row grid (must be 1 or even)");
  }

  const int cols = config.trp_count / 2;
  layout.floor.length = cols * config.isd_m;
  layout.floor.width = 50.0;
  const double row_y[2] = {15.0, 35.0};
  int id = 0;
  for (int row = 0; row < 2; ++row) {
    for (int col = 0; col < cols; ++col) {
      const double x = config.isd_m * (col + 0.5);
      layout.trps.push_back(make_trp(id++, x, row_y[row]));
    }
  }
  return layout;
}

int best_serving_trp(const std::vector<double>& gains_db) {
  int best = 0;
  for (int b = 1; b < static_cast<int>(gains_db.size()); ++b) {
    if (gains_db[b] > gains_db[best]) best = b;
  }
  return best;
}

void attach_users(std::vector<Ue>& ues, const std::vector<Trp>& trps,
                  const std::vector<std::vector<double>>& gains_db) {
  for (auto& ue : ues) {
    const auto& gains = gains_db.at(ue.id);
    ue.serving_trp = trps[best_serving_trp(gains)].id;
  }
}

std::vector<Ue> drop_users(const Layout& layout, int n_per_trp,
                           LinkSampler& sampler, Rng& rng, int max_attempts) {
  if (n_per_trp < 1) {
    throw ConfigError("n_per_trp must be >= 1");
  }
  const int n_trps = static_cast<int>(layout.trps.size());
  const int n_ues = n_per_trp * n_trps;

  std::vector<Ue> ues;
  ues.reserve(n_ues);
  std::vector<int> load(n_trps, 0);
  int attempts = 0;
  while (static_cast<int>(ues.size()) < n_ues) {
    if (++attempts > max_attempts) {
      throw SetupError("drop_users: could not satisfy " +
                       std::to_string(n_per_trp) +
                       " users per TRP within the retry budget");
    }
    Vec3 pos{rng.uniform(0.0, layout.floor.length),
             rng.uniform(0.0, layout.floor.width), layout.ue_height_m};
    const std::vector<double> gains = sampler.propose(pos);
    const int serving = best_serving_trp(gains);
    if (load[serving] >= n_per_trp) {
      sampler.reject();
      continue;
    }
    sampler.accept();
    ++load[serving];
    Ue ue;
    ue.id = static_cast<int>(ues.size());
    ue.position = pos;
    ue.n_rx = layout.n_rx;
    ue.serving_trp = layout.trps[serving].id;
    ues.push_back(ue);
  }
  return ues;
}

std::vector<CompSet> form_comp_sets(const std::vector<Trp>& trps,
                                    int max_coord) {
  const int n = static_cast<int>(trps.size());
  if (max_coord < 1 || max_coord > n) {
    throw ConfigError("max_coord must be in [1, trp_count], got " +
                      std::to_string(max_coord));
  }
  std::vector<bool> assigned(n, false);
  std::vector<CompSet> sets;
  for (int remaining = n; remaining > 0;) {
    int seed = -1;
    for (int b = 0; b < n; ++b) {
      if (!assigned[b]) {
        seed = b;
        break;
      }
    }
    CompSet set;
    set.id = static_cast<int>(sets.size());
    set.trp_ids.push_back(trps[seed].id);
    assigned[seed] = true;
    --remaining;
    while (static_cast<int>(set.trp_ids.size()) < max_coord && remaining > 0) {
      int nearest = -1;
      double best_dist = std::numeric_limits<double>::infinity();
      for (int b = 0; b < n; ++b) {
        if (assigned[b]) continue;
        const double d = distance_3d(trps[seed].position, trps[b].position);
        if (d < best_dist) {
          best_dist = d;
          nearest = b;
        }
      }
      set.trp_ids.push_back(trps[nearest].id);
      assigned[nearest] = true;
      --remaining;
    }
    sets.push_back(std::move(set));
  }
  return sets;
}

void fill_user_vectors(std::vector<CompSet>& sets, const std::vector<Ue>& ues) {
  for (auto& set : sets) {
    set.user_vector.clear();
    for (const auto& ue : ues) {
      if (std::find(set.trp_ids.begin(), set.trp_ids.end(), ue.serving_trp) !=
          set.trp_ids.end()) {
        set.user_vector.push_back(ue.id);
      }
    }
    std::sort(set.user_vector.begin(), set.user_vector.end());
  }
}

}  // namespace ncjt
