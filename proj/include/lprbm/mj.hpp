#pragma once

#include <array>
#include <filesystem>
#include <string>

#include "lprbm/sequence.hpp"

namespace lprbm {

// Symmetric 20x20 residue-residue contact energies, k_B T = 1.
// Entries are stored in canonical alphabet order (ACDEFGHIKLMNPQRSTVWY)
// regardless of the ordering used by the data file.
class MjPotential {
 public:
  double operator()(int a, int b) const { return e_[a * kAlphabetSize + b]; }

  const std::string& source_hash() const { return source_hash_; }
  const std::string& variant() const { return variant_; }

  // File format: comment lines start with '#' (a "# variant:" comment names
  // the published table); first data line is the 20-letter ordering of the
  // rows; then 20 rows, row r holding r+1 (lower triangle) or 20 entries.
  static MjPotential load(const std::filesystem::path& path);

  // uniform test potential
  static MjPotential constant(double value);

  static MjPotential from_matrix(const std::array<double, 400>& e);

 private:
  std::array<double, 400> e_{};
  std::string source_hash_;
  std::string variant_;
};

}  // namespace lprbm
