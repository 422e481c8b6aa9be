#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lprbm/geometry.hpp"

namespace lprbm {

// A compact self-avoiding 27-mer conformation on the 3x3x3 cube.
struct Fold {
  std::array<std::uint8_t, kNumMoves> moves{};
  std::array<Vec3, kChainLength> coords{};
  // contact pairs (i,j), i+1 < j, lattice nearest neighbours; always 28
  std::array<std::pair<std::uint8_t, std::uint8_t>, kNumContacts> contacts{};

  std::string move_string() const;
  bool contact(int i, int j) const;
  // dense symmetric 27x27 view of the contacts
  std::array<std::array<std::uint8_t, kChainLength>, kChainLength> contact_map() const;

  // Builds a fold from a 26-letter move string; rejects anything that is not
  // a Hamiltonian path of the cube.
  static std::optional<Fold> from_moves(std::string_view moves);
};

enum class SymmetryConvention {
  kOctahedral,          // 48 rotations/reflections
  kOctahedralReversal,  // additionally identify chain-reversed conformations
};

std::string to_string(SymmetryConvention c);
std::optional<SymmetryConvention> convention_from_string(std::string_view s);

struct FoldSet {
  SymmetryConvention convention = SymmetryConvention::kOctahedral;
  std::vector<Fold> folds;  // lexicographically sorted canonical move strings

  // contact-map deduplication: folds sharing an identical 27x27 contact map
  // collapse into one energy class with a multiplicity
  std::vector<std::uint32_t> class_of_fold;
  std::vector<std::uint32_t> class_multiplicity;
  std::vector<std::uint32_t> class_representative;  // class -> first fold index

  std::size_t size() const { return folds.size(); }
  std::size_t num_classes() const { return class_multiplicity.size(); }

  void rebuild_dedup_index();
};

// Enumerates every compact conformation, one canonical representative per
// symmetry class. Deterministic: output is sorted by move string.
FoldSet enumerate_folds(SymmetryConvention convention);

// Orbit size of a fold under the convention's group (48 or 96 elements);
// used to cross-check enumeration against raw path counts.
std::uint64_t fold_orbit_size(const Fold& fold, SymmetryConvention convention);

void save_folds(const std::filesystem::path& path, const FoldSet& set,
                std::string_view config_hash = {});
FoldSet load_folds(const std::filesystem::path& path);

}  // namespace lprbm
