#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ncjt/engine.hpp"

namespace ncjt {

/// A seeded batch failed to reproduce itself bit-for-bit.
class DeterminismError : public std::runtime_error {
 public:
  explicit DeterminismError(const std::string& what)
      : std::runtime_error(what) {}
};

struct ExperimentOptions {
  std::string out_dir = "out";
  bool dump_grids = false;
  bool dump_links = false;
  bool dump_layout = false;
  bool self_check = false;
  int jobs = 1;
};

/// One point of the experiment grid: a named config run over its seed list.
struct CellSpec {
  std::string name;
  RunConfig config;
};

struct CellOutcome {
  CellSpec spec;
  std::vector<ThroughputSample> samples;  // pooled in seed order
  std::optional<Percentiles> pct;
};

/// Stable text form of a sample stream; equal strings mean bit-identical
/// runs.
std::string serialize_samples(const std::vector<ThroughputSample>& samples);

/// Runs every seed of a cell (optionally across threads; pooling stays in
/// seed order) and, with self_check, re-runs the first seed and compares the
/// streams byte for byte.
CellOutcome run_cell(const CellSpec& spec, const ExperimentOptions& options);

/// Single-cell experiment: runs config over its seeds and writes samples,
/// CDF, summary and the resolved config under out_dir.
int run_experiment(const RunConfig& config, const ExperimentOptions& options);

/// Full comparison grid: {none,dps,fncjt,nfncjt} x {3,5} users per TRP plus
/// the NF-NCJT coordination-size sweep (max_coord 2..4 at 3 users), with
/// percentage-delta tables against the no-coordination and max_coord=2
/// references.
int run_paper_suite(const RunConfig& base, const ExperimentOptions& options);

void write_layout_csv(const Layout& layout, const std::string& path);

}  // namespace ncjt
