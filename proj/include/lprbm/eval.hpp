#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lprbm/fold.hpp"
#include "lprbm/rbm.hpp"

namespace lprbm {

// PR_e(x) = (sum |x|^e)^2 / sum |x|^{2e}; scale invariant, equals K for K
// equal-magnitude nonzero components.
double participation_ratio(std::span<const double> x, int e);
// weighted variant: (sum u|x|^e)^2 / sum u|x|^{2e}
double weighted_participation_ratio(std::span<const double> x,
                                    std::span<const double> u, int e);

struct SparsityReport {
  std::vector<double> per_unit;  // p_mu = PR2(site norms)/N
  double mean = 0.0;
  double median = 0.0;
};
SparsityReport weight_sparsity(const RbmModel& m);

// conditional mean activities <h_mu|I_mu(v)> for every sequence; rows are
// sequences
std::vector<std::vector<double>> unit_activities(const RbmModel& m,
                                                 std::span<const Sequence> msa);

struct ActiveUnitsReport {
  std::vector<double> per_sequence;  // L = PR3(|h - h0|)
  double median = 0.0;
  std::vector<double> unit_mode;  // h0 per unit (zero for non-dReLU models)
};
// dReLU units subtract the per-unit most-frequent activity (100-bin histogram
// argmax over the data) before the participation ratio.
ActiveUnitsReport active_units(const RbmModel& m, std::span<const Sequence> msa);

struct OverlapReport {
  int n_hidden = 0;
  std::vector<double> matrix;    // [mu*M+nu], cosine overlaps, O_mumu = 1
  std::vector<double> max_abs;   // per unit, max |O| over others
  std::vector<double> unit_weight;  // 1/(1 + #neighbours with |O|>0.9)
  double overlap(int mu, int nu) const { return matrix[static_cast<std::size_t>(mu) * n_hidden + nu]; }
};
OverlapReport overlaps(const RbmModel& m);

// duplicate-weighted L, using the overlap unit weights
ActiveUnitsReport weighted_active_units(const RbmModel& m,
                                        std::span<const Sequence> msa,
                                        const OverlapReport& ov);

struct AisResult {
  double log_z = 0.0;
  double std_err = 0.0;
  double ess = 0.0;  // effective sample size of the importance weights
  bool low_ess_warning = false;
  std::vector<double> log_weights;
};
// Annealed importance sampling from the fields-only base model (beta scales
// the weights only); beta schedule is geometric up to 0.1 then linear to 1.
AisResult ais_log_z(const RbmModel& m, int n_beta, int n_chains, std::uint64_t seed);

struct LikelihoodReport {
  std::vector<double> per_sequence;
  double mean = 0.0;
};
LikelihoodReport log_likelihood(const RbmModel& m, std::span<const Sequence> msa,
                                double log_z);

enum class FeatureClass { kDisconnected, kSingle, kPair, kTriplet, kExtended };
std::string to_string(FeatureClass c);

struct Feature {
  std::vector<int> sites;  // sites with sum_v |w| > 0.5 * max_i sum_v |w|
  FeatureClass cls = FeatureClass::kDisconnected;
};
std::vector<Feature> locate_features(const RbmModel& m);

struct ContactAnalysis {
  int pair_features = 0;
  int pair_true_positive = 0;
  int triplet_features = 0;
  int triplet_true_positive = 0;
  std::vector<int> true_positive_flag;  // -1 not pair/triplet, else 0/1
};
// pairs count as true when the two sites are in contact; triplets when at
// least two of the three site pairs are contacts (connected contact subgraph)
ContactAnalysis contact_analysis(std::span<const Feature> features, const Fold& fold);

// importance = std(data activity) * ||w||_2 per unit (activity rescaled to
// unit variance leaves the model invariant, so this is the rescaled norm)
std::vector<double> feature_importance(const RbmModel& m,
                                       std::span<const Sequence> msa);

}  // namespace lprbm
