#include "ncjt/phy.hpp"

#include <algorithm>
#include <cassert>

namespace ncjt {

const char* scheme_name(Scheme scheme) {
  switch (scheme) {
    case Scheme::kNone:
      return "none";
    case Scheme::kDps:
      return "dps";
    case Scheme::kFncjt:
      return "fncjt";
    case Scheme::kNfncjt:
      return "nfncjt";
  }
  return "?";
}

Scheme scheme_from_name(const std::string& name) {
  if (name == "none") return Scheme::kNone;
  if (name == "dps") return Scheme::kDps;
  if (name == "fncjt") return Scheme::kFncjt;
  if (name == "nfncjt") return Scheme::kNfncjt;
  throw ConfigError("unknown scheme '" + name +
                    "' (allowed: none, dps, fncjt, nfncjt)");
}

Precoder select_precoder(const Eigen::Ref<const Eigen::MatrixXcd>& h) {
  const int n_tx = static_cast<int>(h.cols());
  assert(n_tx >= 1 && n_tx <= kMaxAntennas);
  CVec v(n_tx);

  const CMat gram = h.adjoint() * h;
  if (gram.norm() == 0.0) {
    v.setZero();
    v(0) = 1.0;
    return Precoder{v};
  }

  Eigen::SelfAdjointEigenSolver<CMat> eig(gram);
  const auto& evals = eig.eigenvalues();  // ascending
  const double lambda_max = evals(n_tx - 1);
  // Dominant subspace: eigenvectors within a tight relative band of the top
  // eigenvalue, so exact degeneracies (e.g. h proportional to a unitary)
  // resolve by the basis-vector projection below rather than solver order.
  const double threshold = lambda_max * (1.0 - 1e-9);
  int first = n_tx - 1;
  while (first > 0 && evals(first - 1) >= threshold) --first;
  const CMat basis = eig.eigenvectors().rightCols(n_tx - first);

  for (int e = 0; e < n_tx; ++e) {
    // Projection of basis vector e_e onto the dominant subspace: B (B^H e).
    v = basis * basis.row(e).adjoint();
    const double norm = v.norm();
    if (norm > 1e-9) {
      v /= norm;
      return Precoder{v};
    }
  }
  // Unreachable: the projections of a full basis cannot all vanish.
  v = eig.eigenvectors().col(n_tx - 1);
  return Precoder{v};
}

double mmse_irc_sinr(const CVec& desired, const std::vector<CVec>& interferers,
                     double noise_power_w) {
  assert(noise_power_w > 0);
  const int n_rx = static_cast<int>(desired.size());
  CMat r = CMat::Zero(n_rx, n_rx);
  for (const auto& g : interferers) {
    r.noalias() += g * g.adjoint();
  }
  r.diagonal().array() += noise_power_w;
  const CVec x = Eigen::LDLT<CMat>(r).solve(desired);
  return std::real(desired.dot(x));
}

double sinr_to_se(double sinr_linear, double se_cap) {
  return std::min(std::log2(1.0 + sinr_linear), se_cap);
}

CsiReport measure_csi(int ue_id, int trp_id, int tti,
                      const std::vector<const CMat*>& subband_channels,
                      double desired_amp,
                      const std::vector<std::vector<CVec>>& hypothesis_interference,
                      double noise_power_w, double se_cap) {
  assert(!subband_channels.empty());
  assert(hypothesis_interference.size() == subband_channels.size());
  const int n_sb = static_cast<int>(subband_channels.size());
  const int n_rx = static_cast<int>(subband_channels[0]->rows());
  const int n_tx = static_cast<int>(subband_channels[0]->cols());

  // Wideband selection on the vertically stacked subband channels.
  Eigen::MatrixXcd stacked(n_rx * n_sb, n_tx);
  for (int s = 0; s < n_sb; ++s) {
    stacked.middleRows(s * n_rx, n_rx) = *subband_channels[s];
  }
  Precoder w = select_precoder(stacked);

  CsiReport report;
  report.subband_se.resize(n_sb);
  double se_sum = 0;
  for (int s = 0; s < n_sb; ++s) {
    const CVec d = desired_amp * (*subband_channels[s] * w.vector);
    const double sinr = mmse_irc_sinr(d, hypothesis_interference[s], noise_power_w);
    report.subband_se[s] = sinr_to_se(sinr, se_cap);
    se_sum += report.subband_se[s];
  }

  report.ue_id = ue_id;
  report.trp_id = trp_id;
  report.recommended_precoder = std::move(w);
  report.spectral_efficiency = se_sum / n_sb;
  report.measured_tti = tti;
  return report;
}

EffectiveChannel compose_effective_channel(Scheme scheme,
                                           const CompSet& comp_set,
                                           const std::vector<GridEntry>& network_row,
                                           int target_ue,
                                           const ReceivedColumnFn& column_of,
                                           double noise_power_w) {
  EffectiveChannel eff;
  eff.noise_power_w = noise_power_w;

  [[maybe_unused]] auto in_set = [&](int trp_id) {
    return std::find(comp_set.trp_ids.begin(), comp_set.trp_ids.end(),
                     trp_id) != comp_set.trp_ids.end();
  };

  for (int trp_id = 0; trp_id < static_cast<int>(network_row.size()); ++trp_id) {
    const GridEntry& entry = network_row[trp_id];
    if (!entry.transmitting()) continue;
    if (entry.ue_id == target_ue) {
      // A UE appears only in its own set's user vectors, so its server is
      // always in-set.
      assert(in_set(trp_id));
      eff.desired.push_back(column_of(trp_id, entry));
      eff.desired_trp_ids.push_back(trp_id);
    } else {
      eff.interference.push_back(column_of(trp_id, entry));
    }
  }

#ifndef NDEBUG
  if (scheme == Scheme::kDps) {
    int in_set_tx = 0;
    for (int trp_id : comp_set.trp_ids) {
      if (network_row[trp_id].transmitting()) ++in_set_tx;
    }
    assert(in_set_tx <= 1);
  }
#else
  (void)scheme;
#endif
  return eff;
}

std::vector<double> per_layer_sinrs(const EffectiveChannel& eff) {
  std::vector<double> sinrs;
  sinrs.reserve(eff.desired.size());
  std::vector<CVec> others;
  for (size_t layer = 0; layer < eff.desired.size(); ++layer) {
    others.clear();
    others.reserve(eff.desired.size() - 1 + eff.interference.size());
    for (size_t j = 0; j < eff.desired.size(); ++j) {
      if (j != layer) others.push_back(eff.desired[j]);
    }
    for (const auto& g : eff.interference) others.push_back(g);
    sinrs.push_back(mmse_irc_sinr(eff.desired[layer], others, eff.noise_power_w));
  }
  return sinrs;
}

}  // namespace ncjt
