#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "lprbm/msa.hpp"
#include "lprbm/rbm.hpp"

namespace lprbm {

struct SampleConfig {
  int n_chains = 100;
  int burn_in = 500;  // Gibbs steps discarded per chain
  int thin = 20;      // Gibbs steps between kept samples
  std::uint64_t seed = 0;
};

// Plain Gibbs sampling from the model; n samples spread over independent
// chains (per-chain RNG streams, deterministic output order).
std::vector<Sequence> sample_sequences(const RbmModel& m, int n,
                                       const SampleConfig& cfg);

// Gibbs with clamped hidden units: after every hidden draw the clamped units
// are overwritten, so samples follow P(v | h_clamped).
std::vector<Sequence> conditional_sample(const RbmModel& m,
                                         const std::map<int, double>& clamps,
                                         int n, const SampleConfig& cfg);

// Model whose effective energy is exactly n_dup times the original's:
// fields scaled by n_dup and every hidden unit duplicated n_dup times.
RbmModel duplicate_model(const RbmModel& m, int n_dup);

// Samples from P(v)^n_dup via Gibbs on the duplicated model.
std::vector<Sequence> low_temperature_sample(const RbmModel& m, int n_dup, int n,
                                             const SampleConfig& cfg);

// per-sequence minimum Hamming distance to the training set
std::vector<int> novelty(std::span<const Sequence> sequences, const Msa& training);

struct DesignReport {
  std::vector<Sequence> sequences;
  std::vector<double> p_nat;
  std::vector<int> nearest_distance;
  std::string mode;  // "gibbs", "clamp:<unit>=<value>", "power:<n>"
};

DesignReport score_designs(std::vector<Sequence> sequences, const PnatModel& pnat,
                           std::uint32_t target_fold, const Msa& training,
                           std::string mode);

void save_design_report(const std::filesystem::path& path, const DesignReport& report,
                        std::string_view config_hash = {});

}  // namespace lprbm
