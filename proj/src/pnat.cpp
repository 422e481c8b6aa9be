#include "lprbm/pnat.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "lprbm/mathutil.hpp"

namespace lprbm {

double fold_energy(const Sequence& seq, const Fold& fold, const MjPotential& mj) {
  validate_chain_sequence(seq);
  double e = 0.0;
  for (const auto& [i, j] : fold.contacts) e += mj(seq[i], seq[j]);
  return e;
}

PnatModel::PnatModel(const FoldSet& folds, const MjPotential& mj) : mj_(mj) {
  if (folds.size() == 0) throw std::invalid_argument("PnatModel: empty fold set");
  num_classes_ = static_cast<int>(folds.num_classes());
  fold_class_ = folds.class_of_fold;
  class_weight_.resize(folds.num_classes());
  for (std::size_t c = 0; c < folds.num_classes(); ++c)
    class_weight_[c] = static_cast<float>(folds.class_multiplicity[c]);

  class_contacts_.resize(static_cast<std::size_t>(num_classes_) * kNumContacts * 2);
  for (int c = 0; c < num_classes_; ++c) {
    const Fold& rep = folds.folds[folds.class_representative[static_cast<std::size_t>(c)]];
    for (int n = 0; n < kNumContacts; ++n) {
      class_contacts_[(static_cast<std::size_t>(c) * kNumContacts + n) * 2] =
          rep.contacts[n].first;
      class_contacts_[(static_cast<std::size_t>(c) * kNumContacts + n) * 2 + 1] =
          rep.contacts[n].second;
    }
  }

  // group classes by identical per-site partner sets
  site_patterns_.resize(kChainLength);
  std::vector<std::vector<std::uint8_t>> partners_of_class(
      static_cast<std::size_t>(num_classes_));
  for (int site = 0; site < kChainLength; ++site) {
    auto& sp = site_patterns_[static_cast<std::size_t>(site)];
    sp.pattern_of_class.resize(static_cast<std::size_t>(num_classes_));
    std::map<std::vector<std::uint8_t>, std::uint16_t> pattern_ids;
    for (int c = 0; c < num_classes_; ++c) {
      auto& p = partners_of_class[static_cast<std::size_t>(c)];
      p.clear();
      const std::uint8_t* pairs =
          class_contacts_.data() + static_cast<std::size_t>(c) * kNumContacts * 2;
      for (int n = 0; n < kNumContacts; ++n) {
        if (pairs[2 * n] == site) p.push_back(pairs[2 * n + 1]);
        if (pairs[2 * n + 1] == site) p.push_back(pairs[2 * n]);
      }
      std::sort(p.begin(), p.end());
      auto [it, inserted] =
          pattern_ids.try_emplace(p, static_cast<std::uint16_t>(pattern_ids.size()));
      if (inserted && pattern_ids.size() > 65535)
        throw std::logic_error("site pattern table overflow");
      sp.pattern_of_class[static_cast<std::size_t>(c)] = it->second;
    }
    sp.offsets.assign(pattern_ids.size() + 1, 0);
    for (const auto& [p, id] : pattern_ids)
      sp.offsets[static_cast<std::size_t>(id) + 1] = static_cast<std::uint32_t>(p.size());
    for (std::size_t k = 1; k < sp.offsets.size(); ++k) sp.offsets[k] += sp.offsets[k - 1];
    sp.partners.resize(sp.offsets.back());
    for (const auto& [p, id] : pattern_ids)
      std::copy(p.begin(), p.end(), sp.partners.begin() + sp.offsets[id]);
  }
}

double PnatModel::class_energy(const Sequence& seq, std::uint32_t cls) const {
  const std::uint8_t* pairs =
      class_contacts_.data() + static_cast<std::size_t>(cls) * kNumContacts * 2;
  double e = 0.0;
  for (int n = 0; n < kNumContacts; ++n)
    e += mj_(seq[pairs[2 * n]], seq[pairs[2 * n + 1]]);
  return e;
}

double PnatModel::log_p_nat(const Sequence& seq, std::uint32_t target_fold) const {
  validate_chain_sequence(seq);
  if (target_fold >= fold_class_.size())
    throw std::out_of_range("target fold index out of range");
  std::vector<double> neg_energy(static_cast<std::size_t>(num_classes_));
  for (int c = 0; c < num_classes_; ++c)
    neg_energy[static_cast<std::size_t>(c)] =
        -class_energy(seq, static_cast<std::uint32_t>(c));
  double mx = neg_energy[0];
  for (double x : neg_energy) mx = std::max(mx, x);
  double s = 0.0;
  for (int c = 0; c < num_classes_; ++c)
    s += static_cast<double>(class_weight_[static_cast<std::size_t>(c)]) *
         std::exp(neg_energy[static_cast<std::size_t>(c)] - mx);
  const double target = neg_energy[fold_class_[target_fold]];
  return (target - mx) - std::log(s);
}

double PnatModel::p_nat(const Sequence& seq, std::uint32_t target_fold) const {
  return std::exp(log_p_nat(seq, target_fold));
}

PnatModel::Chain::Chain(const PnatModel& model, std::uint32_t target_fold,
                        Sequence start)
    : model_(model), seq_(std::move(start)) {
  validate_chain_sequence(seq_);
  if (target_fold >= model_.fold_class_.size())
    throw std::out_of_range("target fold index out of range");
  target_class_ = model_.fold_class_[target_fold];
  class_energy_.resize(static_cast<std::size_t>(model_.num_classes_));
  scratch_energy_.resize(static_cast<std::size_t>(model_.num_classes_));
  refresh();
}

void PnatModel::Chain::refresh() {
  const int nc = model_.num_classes_;
  double mn = 1e300;
  for (int c = 0; c < nc; ++c) {
    const double e = model_.class_energy(seq_, static_cast<std::uint32_t>(c));
    class_energy_[static_cast<std::size_t>(c)] = static_cast<float>(e);
    mn = std::min(mn, e);
  }
  shift_ = mn;
  double s = 0.0;
  for (int c = 0; c < nc; ++c)
    s += static_cast<double>(model_.class_weight_[static_cast<std::size_t>(c)]) *
         std::exp(-(static_cast<double>(class_energy_[static_cast<std::size_t>(c)]) -
                    shift_));
  weight_sum_ = s;
  target_energy_ = static_cast<double>(class_energy_[target_class_]);
  steps_since_refresh_ = 0;
}

double PnatModel::Chain::propose(int site, std::uint8_t residue) {
  const std::uint8_t old = seq_[static_cast<std::size_t>(site)];
  pending_site_ = site;
  pending_residue_ = residue;
  const int nc = model_.num_classes_;
  if (residue == old) {
    std::copy(class_energy_.begin(), class_energy_.end(), scratch_energy_.begin());
    proposed_weight_sum_ = weight_sum_;
    proposed_target_energy_ = target_energy_;
    return 0.0;
  }

  // residue-change row: d[s] = e(new, s) - e(old, s)
  float row_delta[kAlphabetSize];
  for (int s = 0; s < kAlphabetSize; ++s)
    row_delta[s] = static_cast<float>(model_.mj_(residue, s) - model_.mj_(old, s));

  const auto& sp = model_.site_patterns_[static_cast<std::size_t>(site)];
  const int npat = static_cast<int>(sp.offsets.size()) - 1;
  std::vector<float> pattern_delta(static_cast<std::size_t>(npat));
  for (int p = 0; p < npat; ++p) {
    float d = 0.0f;
    for (std::uint32_t k = sp.offsets[static_cast<std::size_t>(p)];
         k < sp.offsets[static_cast<std::size_t>(p) + 1]; ++k)
      d += row_delta[seq_[sp.partners[k]]];
    pattern_delta[static_cast<std::size_t>(p)] = d;
  }

  const float shift = static_cast<float>(shift_);
  const float* cur = class_energy_.data();
  float* nxt = scratch_energy_.data();
  const std::uint16_t* pat = sp.pattern_of_class.data();
  const float* w = model_.class_weight_.data();
  const float* pd = pattern_delta.data();
  float acc0 = 0.0f, acc1 = 0.0f;
  for (int c = 0; c < nc; ++c) {
    const float e = cur[c] + pd[pat[c]];
    nxt[c] = e;
    const float wexp = w[c] * fast_exp_neg(e - shift);
    // two accumulators keep the reduction associative-friendly
    if (c & 1)
      acc1 += wexp;
    else
      acc0 += wexp;
  }
  proposed_weight_sum_ = static_cast<double>(acc0) + static_cast<double>(acc1);
  proposed_target_energy_ = static_cast<double>(nxt[target_class_]);

  const double new_energy =
      proposed_target_energy_ - shift_ + std::log(proposed_weight_sum_);
  return new_energy - energy();
}

void PnatModel::Chain::accept() {
  if (pending_site_ < 0) throw std::logic_error("accept without proposal");
  seq_[static_cast<std::size_t>(pending_site_)] = pending_residue_;
  class_energy_.swap(scratch_energy_);
  weight_sum_ = proposed_weight_sum_;
  target_energy_ = proposed_target_energy_;
  pending_site_ = -1;
  if (++steps_since_refresh_ >= 2000) refresh();
}

double PnatModel::Chain::exact_log_p_nat() const {
  // any fold of the target class scores identically
  for (std::uint32_t f = 0; f < model_.fold_class_.size(); ++f)
    if (model_.fold_class_[f] == target_class_) return model_.log_p_nat(seq_, f);
  throw std::logic_error("target class without fold");
}

}  // namespace lprbm
