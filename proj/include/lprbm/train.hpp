#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lprbm/rbm.hpp"

namespace lprbm {

struct TrainConfig {
  int n_chains = 100;          // persistent Gibbs chains
  int gibbs_steps = 10;        // chain steps per parameter update
  int batch_size = 100;
  int n_epochs = 200;
  double learning_rate = 0.05;
  double lr_decay_start = 0.5;  // fraction of epochs before 1/sqrt decay
  double lambda_l1b2 = 0.0;     // weight L1/L2 penalty strength
  double lambda_field_l2 = 0.0;
  double init_weight_scale = 0.01;  // noise scale (divided by sqrt(N))
  double field_pseudocount = 1e-4;
  std::uint64_t seed = 0;
  // exact model averages by state enumeration instead of PCD; only feasible
  // for small q^N
  bool exact_model_term = false;
};

// Weighted one-hot / Gamma'-weighted / dGamma-dxi moments of a set of
// sequences; the shared accumulator behind all three gradient forms.
struct Moments {
  std::vector<double> field_m;   // [i*q+v]      <delta_{v_i,v}>
  std::vector<double> weight_m;  // [(mu*N+i)*q+v] <delta * Gamma'_mu(I_mu)>
  std::vector<double> param_m;   // [mu*4+k]     <dGamma_mu/dxi_k>
  double total_weight = 0.0;

  static Moments zeros(const RbmModel& m);
  void accumulate(const RbmModel& m, const Sequence& v, double weight);
  void finalize();  // divide by total weight
};

Moments collect_moments(const RbmModel& m, std::span<const Sequence> batch);

// Gradients of the mean log-likelihood (ascent direction), data minus model.
std::vector<double> gradient_fields(const RbmModel& m,
                                    std::span<const Sequence> data_batch,
                                    std::span<const Sequence> model_batch);
std::vector<double> gradient_weights(const RbmModel& m,
                                     std::span<const Sequence> data_batch,
                                     std::span<const Sequence> model_batch);
// [mu*4+k] in the potential's parameter order
std::vector<double> gradient_potentials(const RbmModel& m,
                                        std::span<const Sequence> data_batch,
                                        std::span<const Sequence> model_batch);

// Penalty R = lambda1^2/(2Nq) sum_mu (sum_{i,v} |w|)^2 + lambda2 sum g^2 and
// its gradients (to be subtracted from the likelihood gradient).
struct Regularization {
  double value = 0.0;
  std::vector<double> weight_grad;
  std::vector<double> field_grad;
};
Regularization regularization_gradient(const RbmModel& m, double lambda_l1b2,
                                       double lambda_field_l2);

struct TrainLogRow {
  int epoch = 0;
  double learning_rate = 0.0;
  double data_energy = 0.0;   // mean E_eff over the epoch's data batches
  double model_energy = 0.0;  // mean E_eff over the persistent chains
  double reg_value = 0.0;
  double weight_norm = 0.0;
  double sparsity_p = 0.0;    // median participation-ratio sparsity
  double active_l = 0.0;      // median PR3 of data activities (subsample)
};

struct TrainResult {
  RbmModel model;
  std::vector<TrainLogRow> log;
};

struct ModelSpec {
  int n_hidden = 100;
  HiddenPotential potential = HiddenPotential::drelu(1.0, 1.0, 0.0, 0.0);
};

// Persistent-contrastive-divergence maximum likelihood (or exact-gradient
// when config.exact_model_term).  Deterministic given the seed.
// Throws on numerical divergence (non-finite parameters).
TrainResult train(std::span<const Sequence> data, int q, const ModelSpec& spec,
                  const TrainConfig& config);

// All q^N states with their exact probabilities under the model; the exact
// trainer's model term, also used by tests and AIS checks.
std::vector<Sequence> enumerate_states(int n_visible, int q);
std::vector<double> exact_state_log_probs(const RbmModel& m,
                                          std::span<const Sequence> states);
double exact_log_z(const RbmModel& m);

}  // namespace lprbm
