#include "lprbm/mj.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "lprbm/digest.hpp"

namespace lprbm {

MjPotential MjPotential::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read MJ file: " + path.string());

  MjPotential mj;
  mj.source_hash_ = sha256_file_hex(path);

  std::string file_order;
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string key = "# variant:";
      if (line.rfind(key, 0) == 0) {
        mj.variant_ = line.substr(key.size());
        while (!mj.variant_.empty() && mj.variant_.front() == ' ')
          mj.variant_.erase(0, 1);
      }
      continue;
    }
    if (file_order.empty()) {
      std::istringstream ss(line);
      ss >> file_order;
      if (static_cast<int>(file_order.size()) != kAlphabetSize)
        throw std::runtime_error("MJ file: ordering line must have 20 letters");
      continue;
    }
    std::istringstream ss(line);
    std::vector<double> row;
    double v;
    while (ss >> v) row.push_back(v);
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.size() != kAlphabetSize)
    throw std::runtime_error("MJ file: expected 20 matrix rows");

  // map file ordering to canonical alphabet
  int canon_of_row[kAlphabetSize];
  bool seen[kAlphabetSize] = {};
  for (int r = 0; r < kAlphabetSize; ++r) {
    const int a = residue_from_letter(file_order[static_cast<std::size_t>(r)]);
    if (a < 0 || seen[a])
      throw std::runtime_error("MJ file: bad residue ordering line");
    seen[a] = true;
    canon_of_row[r] = a;
  }

  std::array<double, 400> e{};
  std::array<bool, 400> set{};
  for (int r = 0; r < kAlphabetSize; ++r) {
    const auto& row = rows[static_cast<std::size_t>(r)];
    const bool lower = static_cast<int>(row.size()) == r + 1;
    if (!lower && static_cast<int>(row.size()) != kAlphabetSize)
      throw std::runtime_error("MJ file: row " + std::to_string(r) +
                               " must have " + std::to_string(r + 1) + " or 20 entries");
    for (int c = 0; c < static_cast<int>(row.size()); ++c) {
      const double v = row[static_cast<std::size_t>(c)];
      if (!std::isfinite(v)) throw std::runtime_error("MJ file: non-finite entry");
      const int a = canon_of_row[r], b = canon_of_row[c];
      const int ij = a * kAlphabetSize + b, ji = b * kAlphabetSize + a;
      if (set[ij] && std::abs(e[ij] - v) > 1e-9)
        throw std::runtime_error("MJ file: asymmetric entries for pair " +
                                 std::string{kAlphabet[a]} + std::string{kAlphabet[b]});
      e[ij] = e[ji] = v;
      set[ij] = set[ji] = true;
    }
  }
  for (int ij = 0; ij < 400; ++ij)
    if (!set[ij]) throw std::runtime_error("MJ file: incomplete matrix");
  mj.e_ = e;
  return mj;
}

MjPotential MjPotential::constant(double value) {
  MjPotential mj;
  mj.e_.fill(value);
  mj.variant_ = "constant";
  return mj;
}

MjPotential MjPotential::from_matrix(const std::array<double, 400>& e) {
  for (int a = 0; a < kAlphabetSize; ++a)
    for (int b = 0; b < a; ++b)
      if (std::abs(e[a * kAlphabetSize + b] - e[b * kAlphabetSize + a]) > 1e-12)
        throw std::invalid_argument("MJ matrix must be symmetric");
  MjPotential mj;
  mj.e_ = e;
  mj.variant_ = "in-memory";
  return mj;
}

}  // namespace lprbm
