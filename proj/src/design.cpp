#include "lprbm/design.hpp"

#include <fstream>
#include <stdexcept>

namespace lprbm {

namespace {

std::vector<Sequence> run_chains(const RbmModel& m,
                                 std::span<const HiddenClamp> clamps, int n,
                                 const SampleConfig& cfg) {
  if (n < 0) throw std::invalid_argument("sample: negative count");
  std::vector<Sequence> out;
  out.reserve(static_cast<std::size_t>(n));
  const int n_chains = std::min(cfg.n_chains, std::max(1, n));
  std::vector<double> h;
  for (int c = 0; c < n_chains; ++c) {
    const int quota = n / n_chains + (c < n % n_chains ? 1 : 0);
    if (quota == 0) continue;
    Rng rng = Rng::stream(cfg.seed, 0x5a3c0000 + static_cast<std::uint64_t>(c));
    Sequence v(static_cast<std::size_t>(m.n_visible));
    for (auto& a : v)
      a = static_cast<std::uint8_t>(rng.uniform_below(static_cast<std::uint32_t>(m.q)));
    for (int s = 0; s < cfg.burn_in; ++s) gibbs_step(m, v, h, rng, clamps);
    for (int k = 0; k < quota; ++k) {
      for (int s = 0; s < cfg.thin; ++s) gibbs_step(m, v, h, rng, clamps);
      out.push_back(v);
    }
  }
  return out;
}

}  // namespace

std::vector<Sequence> sample_sequences(const RbmModel& m, int n,
                                       const SampleConfig& cfg) {
  return run_chains(m, {}, n, cfg);
}

std::vector<Sequence> conditional_sample(const RbmModel& m,
                                         const std::map<int, double>& clamps,
                                         int n, const SampleConfig& cfg) {
  std::vector<HiddenClamp> cl;
  for (const auto& [unit, value] : clamps) {
    if (unit < 0 || unit >= m.n_hidden())
      throw std::invalid_argument("conditional_sample: clamped unit out of range");
    cl.push_back({unit, value});
  }
  return run_chains(m, cl, n, cfg);
}

RbmModel duplicate_model(const RbmModel& m, int n_dup) {
  if (n_dup < 1) throw std::invalid_argument("duplicate_model: n_dup must be >= 1");
  RbmModel out;
  out.n_visible = m.n_visible;
  out.q = m.q;
  out.gauge = m.gauge;
  out.fields.resize(m.fields.size());
  for (std::size_t k = 0; k < m.fields.size(); ++k)
    out.fields[k] = n_dup * m.fields[k];
  out.potentials.reserve(m.potentials.size() * static_cast<std::size_t>(n_dup));
  out.weights.reserve(m.weights.size() * static_cast<std::size_t>(n_dup));
  for (int d = 0; d < n_dup; ++d) {
    out.potentials.insert(out.potentials.end(), m.potentials.begin(),
                          m.potentials.end());
    out.weights.insert(out.weights.end(), m.weights.begin(), m.weights.end());
  }
  return out;
}

std::vector<Sequence> low_temperature_sample(const RbmModel& m, int n_dup, int n,
                                             const SampleConfig& cfg) {
  const RbmModel powered = duplicate_model(m, n_dup);
  return run_chains(powered, {}, n, cfg);
}

std::vector<int> novelty(std::span<const Sequence> sequences, const Msa& training) {
  std::vector<int> out;
  out.reserve(sequences.size());
  for (const Sequence& s : sequences) {
    int best = static_cast<int>(s.size());
    for (const Sequence& t : training.sequences) {
      if (t.size() != s.size())
        throw std::invalid_argument("novelty: sequence length mismatch");
      int d = 0;
      const std::size_t len = s.size();
      for (std::size_t i = 0; i < len; ++i) d += s[i] != t[i];
      best = std::min(best, d);
      if (best == 0) break;
    }
    out.push_back(best);
  }
  return out;
}

DesignReport score_designs(std::vector<Sequence> sequences, const PnatModel& pnat,
                           std::uint32_t target_fold, const Msa& training,
                           std::string mode) {
  DesignReport rep;
  rep.mode = std::move(mode);
  rep.nearest_distance = novelty(sequences, training);
  rep.p_nat.reserve(sequences.size());
  for (const Sequence& s : sequences)
    rep.p_nat.push_back(pnat.p_nat(s, target_fold));
  rep.sequences = std::move(sequences);
  return rep;
}

void save_design_report(const std::filesystem::path& path, const DesignReport& report,
                        std::string_view config_hash) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write design report: " + path.string());
  if (!config_hash.empty()) out << "# config: " << config_hash << "\n";
  out << "sequence\tp_nat\tnearest_distance\tmode\n";
  out.precision(12);
  for (std::size_t k = 0; k < report.sequences.size(); ++k)
    out << sequence_to_string(report.sequences[k]) << "\t" << report.p_nat[k] << "\t"
        << report.nearest_distance[k] << "\t" << report.mode << "\n";
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace lprbm
