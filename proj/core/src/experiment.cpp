#include "ncjt/experiment.hpp"

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

namespace ncjt {

namespace fs = std::filesystem;

std::string serialize_samples(const std::vector<ThroughputSample>& samples) {
  std::string out;
  out.reserve(samples.size() * 48);
  char buf[96];
  for (const auto& s : samples) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g\n", s.ue_id, s.file_bits,
                  s.duration_s);
    out += buf;
  }
  return out;
}

namespace {

std::vector<ThroughputSample> run_one_seed(const RunConfig& config,
                                           uint64_t seed,
                                           const ExperimentOptions& options,
                                           const std::string& cell_name) {
  Simulation sim(config, seed);

  std::ofstream grid_dump;
  std::ofstream link_dump;
  if (options.dump_grids || options.dump_links) {
    const fs::path dir = fs::path(options.out_dir) / cell_name;
    fs::create_directories(dir);
    if (options.dump_grids) {
      grid_dump.open(dir / ("grids_seed" + std::to_string(seed) + ".csv"));
      grid_dump << "tti,trp,prb,kind,ue\n";
    }
    if (options.dump_links) {
      link_dump.open(dir / ("links_seed" + std::to_string(seed) + ".csv"));
      link_dump << "tti,ue,trp,subband,mean_gain_db\n";
    }
    sim.on_tti_end = [&](const Simulation& s) {
      const int tti = s.now() - 1;
      if (grid_dump.is_open()) {
        for (size_t trp = 0; trp < s.grid().rows.size(); ++trp) {
          for (int prb = 0; prb < s.grid().n_prb; ++prb) {
            const GridEntry& e = s.grid().rows[trp][prb];
            const char kind = e.kind == GridEntry::Kind::kUser    ? 'U'
                              : e.kind == GridEntry::Kind::kBlank ? 'B'
                                                                  : 'I';
            grid_dump << tti << ',' << trp << ',' << prb << ',' << kind << ','
                      << e.ue_id << '\n';
          }
        }
      }
      if (link_dump.is_open()) {
        for (const auto& ue : s.ues()) {
          for (int trp = 0; trp < s.channel().n_trps(); ++trp) {
            for (int sb = 0; sb < s.channel().n_subbands(); ++sb) {
              const auto& h = s.channel().fading(ue.id, trp, sb);
              const double mean_h2 = h.squaredNorm() / h.size();
              const double gain_db =
                  s.channel().link(ue.id, trp).coupling_gain_db +
                  lin_to_db(mean_h2);
              link_dump << tti << ',' << ue.id << ',' << trp << ',' << sb
                        << ',' << gain_db << '\n';
            }
          }
        }
      }
    };
  }

  sim.run();
  return sim.samples();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

std::string summary_header() {
  return "scheme,users_per_trp,max_coord,seed_count,p5_bps,p50_bps,p95_bps\n";
}

std::string summary_row(const CellOutcome& outcome) {
  char buf[256];
  const auto& c = outcome.spec.config;
  if (outcome.pct) {
    std::snprintf(buf, sizeof(buf), "%s,%d,%d,%zu,%.6g,%.6g,%.6g\n",
                  scheme_name(c.scheme), c.users_per_trp, c.max_coord,
                  c.seeds.size(), outcome.pct->p5, outcome.pct->p50,
                  outcome.pct->p95);
  } else {
    std::snprintf(buf, sizeof(buf), "%s,%d,%d,%zu,,,\n", scheme_name(c.scheme),
                  c.users_per_trp, c.max_coord, c.seeds.size());
  }
  return buf;
}

void write_cell_files(const CellOutcome& outcome,
                      const ExperimentOptions& options) {
  const fs::path dir = fs::path(options.out_dir) / outcome.spec.name;
  fs::create_directories(dir);

  {
    std::ofstream out(dir / "samples.csv");
    out << "ue_id,file_bits,duration_s,throughput_bps\n";
    char buf[160];
    for (const auto& s : outcome.samples) {
      std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g\n", s.ue_id,
                    s.file_bits, s.duration_s, s.throughput_bps());
      out << buf;
    }
  }
  {
    std::vector<double> thr;
    thr.reserve(outcome.samples.size());
    for (const auto& s : outcome.samples) thr.push_back(s.throughput_bps());
    std::sort(thr.begin(), thr.end());
    std::ofstream out(dir / "cdf.csv");
    out << "throughput_bps,cdf\n";
    char buf[96];
    for (size_t i = 0; i < thr.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", thr[i],
                    (i + 1.0) / thr.size());
      out << buf;
    }
  }
  write_text(dir / "resolved.cfg", to_key_values(outcome.spec.config));
}

}  // namespace

CellOutcome run_cell(const CellSpec& spec, const ExperimentOptions& options) {
  spec.config.validate();
  const auto& seeds = spec.config.seeds;
  std::vector<std::vector<ThroughputSample>> per_seed(seeds.size());

  const int jobs = std::max(
      1, std::min<int>(options.jobs, static_cast<int>(seeds.size())));
  if (jobs <= 1) {
    for (size_t i = 0; i < seeds.size(); ++i) {
      per_seed[i] = run_one_seed(spec.config, seeds[i], options, spec.name);
    }
  } else {
    std::atomic<size_t> next{0};
    auto worker = [&] {
      for (size_t i = next.fetch_add(1); i < seeds.size();
           i = next.fetch_add(1)) {
        per_seed[i] = run_one_seed(spec.config, seeds[i], options, spec.name);
      }
    };
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  if (options.self_check) {
    // Dumps already happened; re-run the first seed without them.
    ExperimentOptions quiet = options;
    quiet.dump_grids = quiet.dump_links = false;
    const auto again = run_one_seed(spec.config, seeds[0], quiet, spec.name);
    if (serialize_samples(again) != serialize_samples(per_seed[0])) {
      throw DeterminismError("cell '" + spec.name + "' seed " +
                             std::to_string(seeds[0]) +
                             ": sample stream differs between re-runs");
    }
  }

  CellOutcome outcome;
  outcome.spec = spec;
  for (auto& chunk : per_seed) {
    outcome.samples.insert(outcome.samples.end(), chunk.begin(), chunk.end());
  }
  std::vector<double> thr;
  thr.reserve(outcome.samples.size());
  for (const auto& s : outcome.samples) thr.push_back(s.throughput_bps());
  outcome.pct = collect_percentiles(std::move(thr));
  if (!outcome.pct) {
    std::cerr << "warning: cell '" << spec.name
              << "' produced no completed files; percentiles absent\n";
  }
  return outcome;
}

void write_layout_csv(const Layout& layout, const std::string& path) {
  std::ofstream out(path);
  out << "trp_id,x,y,z\n";
  for (const auto& trp : layout.trps) {
    out << trp.id << ',' << trp.position.x << ',' << trp.position.y << ','
        << trp.position.z << '\n';
  }
}

int run_experiment(const RunConfig& config, const ExperimentOptions& options) {
  config.validate();
  fs::create_directories(options.out_dir);
  if (options.dump_layout) {
    write_layout_csv(build_indoor_layout({.trp_count = config.trp_count,
                                          .isd_m = config.isd_m,
                                          .tx_power_dbm = config.tx_power_dbm,
                                          .n_tx = config.n_tx,
                                          .n_rx = config.n_rx}),
                     (fs::path(options.out_dir) / "layout.csv").string());
  }

  CellSpec spec;
  spec.name = std::string(scheme_name(config.scheme)) + "_u" +
              std::to_string(config.users_per_trp) + "_mc" +
              std::to_string(config.max_coord);
  spec.config = config;
  const CellOutcome outcome = run_cell(spec, options);
  write_cell_files(outcome, options);

  std::ofstream summary(fs::path(options.out_dir) / "summary.csv");
  summary << summary_header() << summary_row(outcome);
  std::cout << summary_header() << summary_row(outcome);
  return 0;
}

namespace {

double pct_delta(double value, double reference) {
  return 100.0 * (value - reference) / reference;
}

}  // namespace

int run_paper_suite(const RunConfig& base, const ExperimentOptions& options) {
  base.validate();
  fs::create_directories(options.out_dir);
  if (options.dump_layout) {
    write_layout_csv(build_indoor_layout({.trp_count = base.trp_count,
                                          .isd_m = base.isd_m,
                                          .tx_power_dbm = base.tx_power_dbm,
                                          .n_tx = base.n_tx,
                                          .n_rx = base.n_rx}),
                     (fs::path(options.out_dir) / "layout.csv").string());
  }

  const Scheme schemes[] = {Scheme::kNone, Scheme::kDps, Scheme::kFncjt,
                            Scheme::kNfncjt};
  const int user_loads[] = {3, 5};
  const int coord_sizes[] = {2, 3, 4};

  auto cell_name = [](const RunConfig& c) {
    return std::string(scheme_name(c.scheme)) + "_u" +
           std::to_string(c.users_per_trp) + "_mc" +
           std::to_string(c.max_coord);
  };

  std::vector<CellOutcome> scheme_grid;  // 8 cells
  for (int users : user_loads) {
    for (Scheme scheme : schemes) {
      RunConfig c = base;
      c.scheme = scheme;
      c.users_per_trp = users;
      CellSpec spec{cell_name(c), c};
      std::cout << "running " << spec.name << " (" << c.seeds.size()
                << " seeds)...\n";
      scheme_grid.push_back(run_cell(spec, options));
      write_cell_files(scheme_grid.back(), options);
    }
  }

  std::vector<CellOutcome> coord_grid;  // 3 cells, mc=2 reuses the scheme grid
  for (int mc : coord_sizes) {
    RunConfig c = base;
    c.scheme = Scheme::kNfncjt;
    c.users_per_trp = 3;
    c.max_coord = mc;
    if (mc == base.max_coord) {
      auto it = std::find_if(scheme_grid.begin(), scheme_grid.end(),
                             [&](const CellOutcome& o) {
                               return o.spec.config.scheme == Scheme::kNfncjt &&
                                      o.spec.config.users_per_trp == 3 &&
                                      o.spec.config.max_coord == mc;
                             });
      coord_grid.push_back(*it);
      continue;
    }
    CellSpec spec{cell_name(c), c};
    std::cout << "running " << spec.name << " (" << c.seeds.size()
              << " seeds)...\n";
    coord_grid.push_back(run_cell(spec, options));
    write_cell_files(coord_grid.back(), options);
  }

  std::ofstream summary(fs::path(options.out_dir) / "summary.csv");
  summary << summary_header();
  for (const auto& o : scheme_grid) summary << summary_row(o);
  for (const auto& o : coord_grid) summary << summary_row(o);

  // Scheme table: percentage deltas against no coordination at the same load.
  {
    std::ofstream out(fs::path(options.out_dir) / "scheme_comparison.csv");
    out << "users_per_trp,scheme,p5_bps,p50_bps,p95_bps,"
           "p5_vs_none_pct,p50_vs_none_pct,p95_vs_none_pct\n";
    std::cout << "\nscheme comparison (deltas vs no coordination):\n";
    for (int users : user_loads) {
      const CellOutcome* ref = nullptr;
      for (const auto& o : scheme_grid) {
        if (o.spec.config.users_per_trp == users &&
            o.spec.config.scheme == Scheme::kNone) {
          ref = &o;
        }
      }
      for (const auto& o : scheme_grid) {
        if (o.spec.config.users_per_trp != users || !o.pct) continue;
        char buf[256];
        std::snprintf(buf, sizeof(buf),
                      "%d,%s,%.6g,%.6g,%.6g,%+.1f,%+.1f,%+.1f\n", users,
                      scheme_name(o.spec.config.scheme), o.pct->p5, o.pct->p50,
                      o.pct->p95, pct_delta(o.pct->p5, ref->pct->p5),
                      pct_delta(o.pct->p50, ref->pct->p50),
                      pct_delta(o.pct->p95, ref->pct->p95));
        out << buf;
        std::cout << "  " << buf;
      }
    }
  }

  // Coordination-size table: deltas against max_coord = 2.
  {
    std::ofstream out(fs::path(options.out_dir) / "coordination_comparison.csv");
    out << "max_coord,p5_bps,p50_bps,p95_bps,"
           "p5_vs_mc2_pct,p50_vs_mc2_pct,p95_vs_mc2_pct\n";
    std::cout << "\nnf-ncjt coordination size (deltas vs max_coord=2):\n";
    const CellOutcome& ref = coord_grid.front();
    for (const auto& o : coord_grid) {
      if (!o.pct) continue;
      char buf[256];
      std::snprintf(buf, sizeof(buf), "%d,%.6g,%.6g,%.6g,%+.1f,%+.1f,%+.1f\n",
                    o.spec.config.max_coord, o.pct->p5, o.pct->p50, o.pct->p95,
                    pct_delta(o.pct->p5, ref.pct->p5),
                    pct_delta(o.pct->p50, ref.pct->p50),
                    pct_delta(o.pct->p95, ref.pct->p95));
      out << buf;
      std::cout << "  " << buf;
    }
  }
  return 0;
}

}  // namespace ncjt
