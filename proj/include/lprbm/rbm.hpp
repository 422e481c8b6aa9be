#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "lprbm/potentials.hpp"
#include "lprbm/rng.hpp"
#include "lprbm/sequence.hpp"

namespace lprbm {

// Potts-visible RBM: N categorical visible units with q states, M hidden
// units with per-unit potentials.  Weights are kept in the zero-sum gauge
// sum_v w(i,mu,v) = 0 (reprojected after every training update).
struct RbmModel {
  int n_visible = 0;
  int q = 0;
  std::vector<HiddenPotential> potentials;  // one per hidden unit
  std::vector<double> fields;               // [i*q + v]
  std::vector<double> weights;              // [(mu*n_visible + i)*q + v]
  std::string gauge = "zero-sum";
  std::string provenance_json;              // training provenance, opaque here

  int n_hidden() const { return static_cast<int>(potentials.size()); }

  double field(int i, int v) const { return fields[static_cast<std::size_t>(i) * q + v]; }
  double& field(int i, int v) { return fields[static_cast<std::size_t>(i) * q + v]; }
  double weight(int mu, int i, int v) const {
    return weights[(static_cast<std::size_t>(mu) * n_visible + i) * q + v];
  }
  double& weight(int mu, int i, int v) {
    return weights[(static_cast<std::size_t>(mu) * n_visible + i) * q + v];
  }
  std::span<const double> unit_weights(int mu) const {
    return {weights.data() + static_cast<std::size_t>(mu) * n_visible * q,
            static_cast<std::size_t>(n_visible) * q};
  }

  static RbmModel create(int n_visible, int q, int n_hidden,
                         const HiddenPotential& potential);

  void validate_sequence(const Sequence& v) const;
  bool finite() const;
};

// I_mu(v) = sum_i w(i,mu,v_i)
void hidden_input(const RbmModel& m, const Sequence& v, std::span<double> out);
std::vector<double> hidden_input(const RbmModel& m, const Sequence& v);

std::vector<double> sample_hidden(const RbmModel& m, const Sequence& v, Rng& rng);
Sequence sample_visible(const RbmModel& m, std::span<const double> h, Rng& rng);

// Alternating Gibbs; returns the n_steps+1 visited visible states, the first
// entry being v0.
std::vector<Sequence> gibbs_chain(const RbmModel& m, const Sequence& v0,
                                  int n_steps, Rng& rng);

// In-place single Gibbs sweep with optional clamped hidden units: after each
// hidden-layer draw, h[unit] is overwritten with the clamped value.
struct HiddenClamp {
  int unit;
  double value;
};
void gibbs_step(const RbmModel& m, Sequence& v, std::vector<double>& h, Rng& rng,
                std::span<const HiddenClamp> clamps = {});

// E_eff(v) = -sum_i g_i(v_i) - sum_mu Gamma_mu(I_mu(v)); P(v) = e^{-E_eff}/Z
double effective_energy(const RbmModel& m, const Sequence& v);

// Exact pairwise reduction for all-quadratic models:
//   P(v) ~ exp( sum_i g~_i(v_i) + 1/2 sum_{i,j} J~_ij(v_i,v_j) )
// with the double sum running over both orders and the diagonal.
struct PairwiseModel {
  int n_visible = 0;
  int q = 0;
  std::vector<double> fields;     // [i*q+v]
  std::vector<double> couplings;  // [((i*n+j)*q + v)*q + v']
  double coupling(int i, int j, int v, int vp) const {
    return couplings[((static_cast<std::size_t>(i) * n_visible + j) * q + v) * q + vp];
  }
  double energy(const Sequence& v) const;  // -(field term + 1/2 coupling term)
};
PairwiseModel to_pairwise(const RbmModel& m);

// Random-weights ensemble with binary (q=2) visible units encoding +-1,
// ReLU hidden units, weights 0 or +-W/sqrt(N).
RbmModel random_ensemble_model(double alpha, double p, double weight_scale,
                               double theta, double field, int n_visible, Rng& rng);

// zero-sum weight gauge with exact theta compensation; also centers fields
void apply_zero_sum_gauge(RbmModel& m);

void save_model(const std::filesystem::path& path, const RbmModel& m);
RbmModel load_model(const std::filesystem::path& path);

}  // namespace lprbm
