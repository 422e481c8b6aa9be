#include "lprbm/msa.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "lprbm/rng.hpp"

namespace lprbm {

void save_msa(const std::filesystem::path& path, const Msa& msa,
              std::string_view config_hash) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write MSA file: " + path.string());
  out << "# sequences: " << msa.size() << "\n";
  if (!config_hash.empty()) out << "# config: " << config_hash << "\n";
  if (!msa.provenance.empty()) out << "# provenance: " << msa.provenance << "\n";
  for (const Sequence& s : msa.sequences) out << sequence_to_string(s) << "\n";
  if (!out) throw std::runtime_error("write failed: " + path.string());

  if (!msa.labels.empty()) {
    if (msa.labels.size() != msa.size())
      throw std::invalid_argument("labels/sequences size mismatch");
    std::ofstream side(path.string() + ".pnat");
    side.precision(17);
    for (double p : msa.labels) side << p << "\n";
    if (!side) throw std::runtime_error("write failed: " + path.string() + ".pnat");
  }
}

Msa load_msa(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read MSA file: " + path.string());
  Msa msa;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string key = "# provenance: ";
      if (line.rfind(key, 0) == 0) msa.provenance = line.substr(key.size());
      continue;
    }
    msa.sequences.push_back(sequence_from_string(line));
  }
  const auto sidecar = std::filesystem::path(path.string() + ".pnat");
  if (std::filesystem::exists(sidecar)) {
    std::ifstream side(sidecar);
    double p;
    while (side >> p) msa.labels.push_back(p);
    if (msa.labels.size() != msa.size())
      throw std::runtime_error("p_nat sidecar size mismatch: " + sidecar.string());
  }
  return msa;
}

Msa shuffle_columns(const Msa& msa, std::uint64_t seed) {
  if (msa.size() == 0) throw std::invalid_argument("shuffle_columns: empty MSA");
  const std::size_t B = msa.size();
  const std::size_t L = msa.sequences.front().size();
  for (const Sequence& s : msa.sequences)
    if (s.size() != L) throw std::invalid_argument("shuffle_columns: ragged MSA");

  Msa out;
  out.sequences.assign(B, Sequence(L));
  out.provenance = msa.provenance;
  std::vector<std::uint32_t> perm(B);
  for (std::size_t col = 0; col < L; ++col) {
    Rng rng = Rng::stream(seed, col);
    for (std::size_t b = 0; b < B; ++b) perm[b] = static_cast<std::uint32_t>(b);
    for (std::size_t b = B; b > 1; --b)
      std::swap(perm[b - 1], perm[rng.uniform_below(static_cast<std::uint32_t>(b))]);
    for (std::size_t b = 0; b < B; ++b)
      out.sequences[b][col] = msa.sequences[perm[b]][col];
  }
  return out;  // labels dropped: they no longer describe the rows
}

std::pair<Msa, Msa> split(const Msa& msa, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0))
    throw std::invalid_argument("split: fraction must be in (0,1)");
  const std::size_t B = msa.size();
  const std::size_t n_train =
      static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(B)));
  std::vector<std::uint32_t> perm(B);
  for (std::size_t b = 0; b < B; ++b) perm[b] = static_cast<std::uint32_t>(b);
  Rng rng = Rng::stream(seed, 0x5eed'5eed);
  for (std::size_t b = B; b > 1; --b)
    std::swap(perm[b - 1], perm[rng.uniform_below(static_cast<std::uint32_t>(b))]);

  Msa train, test;
  train.provenance = msa.provenance;
  test.provenance = msa.provenance;
  const bool labeled = !msa.labels.empty();
  for (std::size_t k = 0; k < B; ++k) {
    Msa& dst = k < n_train ? train : test;
    dst.sequences.push_back(msa.sequences[perm[k]]);
    if (labeled) dst.labels.push_back(msa.labels[perm[k]]);
  }
  return {std::move(train), std::move(test)};
}

Msa generate_msa(const PnatModel& model, std::uint32_t target_fold, int n_seq,
                 double threshold, const McConfig& mc, std::uint64_t seed) {
  if (!(threshold > 0.0 && threshold < 1.0))
    throw std::invalid_argument("generate_msa: threshold must be in (0,1)");
  if (mc.n_chains < 1 || mc.burn_in_sweeps < 0 || mc.thin_sweeps < 1)
    throw std::invalid_argument("generate_msa: bad mc config");
  Msa msa;
  {
    std::ostringstream prov;
    prov << "generator=mc-metropolis target=" << target_fold << " seed=" << seed
         << " threshold=" << threshold << " chains=" << mc.n_chains
         << " burn_in=" << mc.burn_in_sweeps << " thin=" << mc.thin_sweeps
         << " T=" << mc.temperature;
    msa.provenance = prov.str();
  }
  if (n_seq == 0) return msa;
  if (n_seq < 0) throw std::invalid_argument("generate_msa: negative count");

  const double log_threshold = std::log(threshold);
  const double inv_t = 1.0 / mc.temperature;
  const long budget_sweeps =
      static_cast<long>(mc.burn_in_sweeps) * mc.burn_in_budget_factor + 1000;

  for (int chain = 0; chain < mc.n_chains; ++chain) {
    const int quota = n_seq / mc.n_chains + (chain < n_seq % mc.n_chains ? 1 : 0);
    if (quota == 0) continue;
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(chain));
    Sequence start(kChainLength);
    for (auto& a : start)
      a = static_cast<std::uint8_t>(rng.uniform_below(kAlphabetSize));
    PnatModel::Chain state(model, target_fold, std::move(start));

    const auto sweep = [&] {
      for (int s = 0; s < kChainLength; ++s) {
        const int site = static_cast<int>(rng.uniform_below(kChainLength));
        std::uint8_t r = static_cast<std::uint8_t>(rng.uniform_below(kAlphabetSize - 1));
        if (r >= state.sequence()[static_cast<std::size_t>(site)]) ++r;
        const double delta = state.propose(site, r);
        if (delta <= 0.0 || rng.uniform() < std::exp(-delta * inv_t)) state.accept();
      }
    };

    for (int sw = 0; sw < mc.burn_in_sweeps; ++sw) sweep();
    int taken = 0;
    long extra_sweeps = 0;
    while (taken < quota) {
      for (int sw = 0; sw < mc.thin_sweeps; ++sw) sweep();
      extra_sweeps += mc.thin_sweeps;
      const double lp = state.exact_log_p_nat();
      if (lp > log_threshold) {
        msa.sequences.push_back(state.sequence());
        msa.labels.push_back(std::exp(lp));
        ++taken;
      } else if (taken == 0 && extra_sweeps > budget_sweeps) {
        throw std::runtime_error(
            "generate_msa: chain failed to reach the p_nat threshold within the "
            "burn-in budget; lower the temperature or raise the budget");
      }
    }
  }
  return msa;
}

}  // namespace lprbm
