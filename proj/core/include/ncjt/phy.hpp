#pragma once

#include <functional>
#include <vector>

#include "ncjt/common.hpp"
#include "ncjt/topology.hpp"

namespace ncjt {

enum class Scheme { kNone, kDps, kFncjt, kNfncjt };

const char* scheme_name(Scheme scheme);
Scheme scheme_from_name(const std::string& name);

inline constexpr double kDefaultSeCap = 7.4;  // bps/Hz

/// Unit-norm single-layer transmit vector.
struct Precoder {
  CVec vector;
};

/// Rank-1 precoder: dominant right singular vector of h. The returned vector
/// is the normalized projection of the first feasible standard basis vector
/// onto the dominant right-singular subspace, which fixes the phase (first
/// nonzero entry real, non-negative) and breaks degenerate-singular-value
/// ties toward e1. An all-zero h yields e1. Rows are unbounded (wideband
/// selection stacks subband channels); columns stay within kMaxAntennas.
Precoder select_precoder(const Eigen::Ref<const Eigen::MatrixXcd>& h);

/// Post-combining SINR of an MMSE-IRC receiver: d^H R^-1 d with
/// R = sum_i g_i g_i^H + noise_power * I over the interferer columns.
double mmse_irc_sinr(const CVec& desired, const std::vector<CVec>& interferers,
                     double noise_power_w);

/// Shannon spectral efficiency with a modulation ceiling.
double sinr_to_se(double sinr_linear, double se_cap = kDefaultSeCap);

struct CsiReport {
  int ue_id = -1;
  int trp_id = -1;
  Precoder recommended_precoder;
  double spectral_efficiency = 0;    // bps/Hz, averaged over subbands
  std::vector<double> subband_se;    // per-subband values behind the average
  int measured_tti = -1;
};

/// Measures one (UE, TRP) link: a wideband precoder selected on the stacked
/// per-subband channels, then the per-subband MMSE-IRC SINR against the given
/// interference hypothesis, averaged into a single spectral efficiency.
/// hypothesis_interference[s] holds pre-scaled received interferer columns
/// for subband s; desired_amp scales channel*precoder into received units.
CsiReport measure_csi(int ue_id, int trp_id, int tti,
                      const std::vector<const CMat*>& subband_channels,
                      double desired_amp,
                      const std::vector<std::vector<CVec>>& hypothesis_interference,
                      double noise_power_w, double se_cap = kDefaultSeCap);

/// One TRP's allocation on one PRB.
struct GridEntry {
  enum class Kind {
    kIdle,   // nothing to send
    kBlank,  // deliberately muted (coordination)
    kUser,   // serving ue_id with precoder
  };
  Kind kind = Kind::kIdle;
  int ue_id = -1;
  Precoder precoder;

  bool transmitting() const { return kind == Kind::kUser; }
};

/// Received-signal decomposition at one UE on one PRB. desired_trp_ids maps
/// each desired layer back to the in-set TRP that radiates it.
struct EffectiveChannel {
  std::vector<CVec> desired;
  std::vector<int> desired_trp_ids;
  std::vector<CVec> interference;
  double noise_power_w = 0;

  /// False means no in-set TRP serves this UE on the PRB (UE idle here).
  bool scheduled() const { return !desired.empty(); }
};

/// Received column at the target UE for one transmitting TRP's grid entry.
using ReceivedColumnFn = std::function<CVec(int trp_id, const GridEntry&)>;

/// Splits one PRB's network-wide row into desired and interference columns
/// for target_ue: in-set TRPs whose entry serves target_ue are desired
/// layers; every other transmitting TRP (in-set serving someone else, or any
/// out-of-set transmitter) contributes interference. BLANK and IDLE entries
/// contribute nothing.
EffectiveChannel compose_effective_channel(Scheme scheme,
                                           const CompSet& comp_set,
                                           const std::vector<GridEntry>& network_row,
                                           int target_ue,
                                           const ReceivedColumnFn& column_of,
                                           double noise_power_w);

/// MMSE-IRC SINR per desired layer, the other desired layers treated as
/// interference.
std::vector<double> per_layer_sinrs(const EffectiveChannel& eff);

}  // namespace ncjt
