#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "lprbm/pnat.hpp"
#include "lprbm/sequence.hpp"

namespace lprbm {

struct Msa {
  std::vector<Sequence> sequences;
  std::vector<double> labels;  // optional p_nat values, one per sequence
  std::string provenance;      // generator seed + parameters, free form

  std::size_t size() const { return sequences.size(); }
};

// one sequence per line; '#' lines are comments; labels go to "<path>.pnat"
void save_msa(const std::filesystem::path& path, const Msa& msa,
              std::string_view config_hash = {});
Msa load_msa(const std::filesystem::path& path);

// independently permutes every column across sequences; per-site single
// letter counts are exactly preserved
Msa shuffle_columns(const Msa& msa, std::uint64_t seed);

// disjoint random partition, sizes (ceil(f*B), B - ceil(f*B))
std::pair<Msa, Msa> split(const Msa& msa, double fraction, std::uint64_t seed);

struct McConfig {
  int n_chains = 50;
  int burn_in_sweeps = 2000;
  int thin_sweeps = 100;
  double temperature = 0.30;   // sequence-space sampling temperature
  int burn_in_budget_factor = 20;  // x burn_in_sweeps before giving up
};

// Metropolis sampling in sequence space with energy -log p_nat(v; target),
// single-site proposals (uniform site, uniform replacement residue).
// Samples are kept only if the exact p_nat exceeds the threshold; each of the
// independent chains owns an RNG stream derived from (seed, chain), so the
// output does not depend on scheduling.
Msa generate_msa(const PnatModel& model, std::uint32_t target_fold, int n_seq,
                 double threshold, const McConfig& mc, std::uint64_t seed);

}  // namespace lprbm
