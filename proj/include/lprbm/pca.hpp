#pragma once

#include <span>
#include <vector>

#include "lprbm/sequence.hpp"

namespace lprbm {

// PCA of the one-hot encoded alignment (N*q binary coordinates).
struct PcaResult {
  int n_sites = 0;
  int q = 0;
  std::vector<double> mean;         // [i*q+v] empirical frequencies
  std::vector<double> eigenvalues;  // descending, length n_components
  std::vector<double> components;   // row-major [k][i*q+v], orthonormal rows

  double component(int k, int i, int v) const {
    return components[(static_cast<std::size_t>(k) * n_sites + i) * q + v];
  }
};

PcaResult pca_baseline(std::span<const Sequence> msa, int q, int n_components);

// projection of a one-hot encoded, mean-centered sequence onto component k
double pca_project(const PcaResult& pca, const Sequence& seq, int k);

}  // namespace lprbm
