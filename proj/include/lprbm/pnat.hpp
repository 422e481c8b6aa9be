#pragma once

#include <cstdint>
#include <vector>

#include "lprbm/fold.hpp"
#include "lprbm/mj.hpp"
#include "lprbm/sequence.hpp"

namespace lprbm {

// E(v;S) = sum over contacts of S of e(v_i, v_j)
double fold_energy(const Sequence& seq, const Fold& fold, const MjPotential& mj);

// Precomputed contact structures over the deduplicated contact-map classes.
// Scoring runs in log space over classes weighted by multiplicity; the fast
// path below supports single-site mutation updates for Monte Carlo.
class PnatModel {
 public:
  PnatModel(const FoldSet& folds, const MjPotential& mj);

  int num_folds() const { return static_cast<int>(fold_class_.size()); }
  int num_classes() const { return num_classes_; }
  const MjPotential& mj() const { return mj_; }

  // exact, double precision, log-sum-exp over all classes
  double log_p_nat(const Sequence& seq, std::uint32_t target_fold) const;
  double p_nat(const Sequence& seq, std::uint32_t target_fold) const;

  double class_energy(const Sequence& seq, std::uint32_t cls) const;
  std::uint32_t class_of_fold(std::uint32_t fold) const { return fold_class_[fold]; }

  // Incremental evaluator for chains of single-site mutations. Keeps all
  // class energies in single precision and refreshes them in double
  // periodically; the chain energy is -log p_nat of the current sequence.
  class Chain {
   public:
    Chain(const PnatModel& model, std::uint32_t target_fold, Sequence start);

    const Sequence& sequence() const { return seq_; }
    // -log p_nat, single-precision path (for Metropolis decisions)
    double energy() const { return target_energy_ - shift_ + std::log(weight_sum_); }
    // change in energy if seq[site] were set to residue; fills scratch
    double propose(int site, std::uint8_t residue);
    void accept();  // commit the last proposal
    double exact_log_p_nat() const;  // full-precision recheck of current state

   private:
    void refresh();

    const PnatModel& model_;
    std::uint32_t target_class_;
    Sequence seq_;
    std::vector<float> class_energy_;   // current
    std::vector<float> scratch_energy_; // proposed
    double target_energy_ = 0.0, proposed_target_energy_ = 0.0;
    double weight_sum_ = 0.0, proposed_weight_sum_ = 0.0;
    double shift_ = 0.0;
    int pending_site_ = -1;
    std::uint8_t pending_residue_ = 0;
    long steps_since_refresh_ = 0;
  };

 private:
  friend class Chain;

  MjPotential mj_;
  int num_classes_ = 0;
  std::vector<std::uint32_t> fold_class_;
  std::vector<float> class_weight_;              // contact-map multiplicity
  std::vector<std::uint8_t> class_contacts_;     // 56 bytes per class: (i,j)*28

  // per-site partner patterns: classes sharing the same partner set for a
  // site share one delta evaluation
  struct SitePatterns {
    std::vector<std::uint16_t> pattern_of_class;
    std::vector<std::uint8_t> partners;       // concatenated partner lists
    std::vector<std::uint32_t> offsets;       // pattern -> [begin,end) in partners
  };
  std::vector<SitePatterns> site_patterns_;  // one per chain position
};

}  // namespace lprbm
