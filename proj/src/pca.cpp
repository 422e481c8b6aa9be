#include "lprbm/pca.hpp"

#include <stdexcept>

#include <Eigen/Dense>

namespace lprbm {

PcaResult pca_baseline(std::span<const Sequence> msa, int q, int n_components) {
  if (msa.empty()) throw std::invalid_argument("pca: empty MSA");
  const int n = static_cast<int>(msa.front().size());
  const int d = n * q;
  if (n_components < 1 || n_components > d)
    throw std::invalid_argument("pca: bad component count");
  const double B = static_cast<double>(msa.size());

  PcaResult res;
  res.n_sites = n;
  res.q = q;
  res.mean.assign(static_cast<std::size_t>(d), 0.0);
  for (const Sequence& s : msa) {
    if (static_cast<int>(s.size()) != n) throw std::invalid_argument("pca: ragged MSA");
    for (int i = 0; i < n; ++i) res.mean[static_cast<std::size_t>(i) * q + s[static_cast<std::size_t>(i)]] += 1.0;
  }
  for (auto& m : res.mean) m /= B;

  // covariance of the one-hot encoding: C = <x x^T> - mean mean^T, and
  // <x_a x_b> has one-hot structure (frequencies and pair frequencies)
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
  for (const Sequence& s : msa)
    for (int i = 0; i < n; ++i) {
      const int a = i * q + s[static_cast<std::size_t>(i)];
      for (int j = 0; j < n; ++j) cov(a, j * q + s[static_cast<std::size_t>(j)]) += 1.0;
    }
  cov /= B;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      cov(a, b) -= res.mean[static_cast<std::size_t>(a)] * res.mean[static_cast<std::size_t>(b)];

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) throw std::runtime_error("pca: eigensolver failed");

  res.eigenvalues.resize(static_cast<std::size_t>(n_components));
  res.components.resize(static_cast<std::size_t>(n_components) * d);
  // Eigen returns ascending order; take the top n_components descending
  for (int k = 0; k < n_components; ++k) {
    const int src = d - 1 - k;
    res.eigenvalues[static_cast<std::size_t>(k)] = solver.eigenvalues()(src);
    for (int a = 0; a < d; ++a)
      res.components[static_cast<std::size_t>(k) * d + a] = solver.eigenvectors()(a, src);
  }
  return res;
}

double pca_project(const PcaResult& pca, const Sequence& seq, int k) {
  if (k < 0 || k >= static_cast<int>(pca.eigenvalues.size()))
    throw std::out_of_range("pca_project: component out of range");
  const int n = pca.n_sites, q = pca.q;
  double proj = 0.0;
  // one-hot minus mean, dotted with the component
  for (int i = 0; i < n; ++i) proj += pca.component(k, i, seq[static_cast<std::size_t>(i)]);
  for (int i = 0; i < n; ++i)
    for (int v = 0; v < q; ++v)
      proj -= pca.component(k, i, v) * pca.mean[static_cast<std::size_t>(i) * q + v];
  return proj;
}

}  // namespace lprbm
