#include "lprbm/eval.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lprbm/mathutil.hpp"
#include "lprbm/train.hpp"

namespace lprbm {

namespace {

double median_of(std::vector<double> xs) {
  if (xs.empty()) throw std::invalid_argument("median of empty set");
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

}  // namespace

double participation_ratio(std::span<const double> x, int e) {
  if (e < 1) throw std::invalid_argument("participation_ratio: order must be >= 1");
  double num = 0.0, den = 0.0, mx = 0.0;
  for (double v : x) mx = std::max(mx, std::abs(v));
  if (mx == 0.0) throw std::invalid_argument("participation_ratio: all-zero vector");
  for (double v : x) {
    const double a = std::abs(v) / mx;  // rescale for overflow safety
    double p = 1.0;
    for (int k = 0; k < e; ++k) p *= a;
    num += p;
    den += p * p;
  }
  return num * num / den;
}

double weighted_participation_ratio(std::span<const double> x,
                                    std::span<const double> u, int e) {
  if (x.size() != u.size())
    throw std::invalid_argument("weighted PR: size mismatch");
  double num = 0.0, den = 0.0, mx = 0.0;
  for (double v : x) mx = std::max(mx, std::abs(v));
  if (mx == 0.0) throw std::invalid_argument("weighted PR: all-zero vector");
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double a = std::abs(x[k]) / mx;
    double p = 1.0;
    for (int i = 0; i < e; ++i) p *= a;
    num += u[k] * p;
    den += u[k] * p * p;
  }
  return num * num / den;
}

SparsityReport weight_sparsity(const RbmModel& m) {
  SparsityReport rep;
  const int n = m.n_visible, q = m.q;
  std::vector<double> site_norm(static_cast<std::size_t>(n));
  for (int mu = 0; mu < m.n_hidden(); ++mu) {
    bool all_zero = true;
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int v = 0; v < q; ++v) s += m.weight(mu, i, v) * m.weight(mu, i, v);
      site_norm[static_cast<std::size_t>(i)] = std::sqrt(s);
      all_zero = all_zero && s == 0.0;
    }
    rep.per_unit.push_back(all_zero ? 1.0 / n
                                    : participation_ratio(site_norm, 2) / n);
  }
  if (!rep.per_unit.empty()) {
    double total = 0.0;
    for (double p : rep.per_unit) total += p;
    rep.mean = total / static_cast<double>(rep.per_unit.size());
    rep.median = median_of(rep.per_unit);
  }
  return rep;
}

std::vector<std::vector<double>> unit_activities(const RbmModel& m,
                                                 std::span<const Sequence> msa) {
  std::vector<std::vector<double>> acts;
  acts.reserve(msa.size());
  std::vector<double> input(static_cast<std::size_t>(m.n_hidden()));
  for (const Sequence& v : msa) {
    m.validate_sequence(v);
    hidden_input(m, v, input);
    std::vector<double> row(static_cast<std::size_t>(m.n_hidden()));
    for (int mu = 0; mu < m.n_hidden(); ++mu)
      row[static_cast<std::size_t>(mu)] =
          gamma_d1(m.potentials[static_cast<std::size_t>(mu)],
                   input[static_cast<std::size_t>(mu)]);
    acts.push_back(std::move(row));
  }
  return acts;
}

namespace {

// histogram-argmax estimate of the most frequent activity per unit
std::vector<double> estimate_modes(const RbmModel& m,
                                   const std::vector<std::vector<double>>& acts) {
  const int M = m.n_hidden();
  std::vector<double> mode(static_cast<std::size_t>(M), 0.0);
  constexpr int kBins = 100;
  std::vector<int> hist(kBins);
  for (int mu = 0; mu < M; ++mu) {
    if (m.potentials[static_cast<std::size_t>(mu)].kind !=
        HiddenPotential::Kind::kDRelu)
      continue;  // only dReLU activities need the shift
    double lo = 1e300, hi = -1e300;
    for (const auto& row : acts) {
      lo = std::min(lo, row[static_cast<std::size_t>(mu)]);
      hi = std::max(hi, row[static_cast<std::size_t>(mu)]);
    }
    if (!(hi > lo)) {
      mode[static_cast<std::size_t>(mu)] = lo;
      continue;
    }
    std::fill(hist.begin(), hist.end(), 0);
    const double w = (hi - lo) / kBins;
    for (const auto& row : acts) {
      int b = static_cast<int>((row[static_cast<std::size_t>(mu)] - lo) / w);
      b = std::clamp(b, 0, kBins - 1);
      ++hist[static_cast<std::size_t>(b)];
    }
    const int best = static_cast<int>(
        std::max_element(hist.begin(), hist.end()) - hist.begin());
    mode[static_cast<std::size_t>(mu)] = lo + (best + 0.5) * w;
  }
  return mode;
}

ActiveUnitsReport active_units_impl(const RbmModel& m, std::span<const Sequence> msa,
                                    const std::vector<double>* unit_weights) {
  if (msa.empty()) throw std::invalid_argument("active_units: empty MSA");
  const auto acts = unit_activities(m, msa);
  ActiveUnitsReport rep;
  rep.unit_mode = estimate_modes(m, acts);
  std::vector<double> shifted(static_cast<std::size_t>(m.n_hidden()));
  for (const auto& row : acts) {
    for (int mu = 0; mu < m.n_hidden(); ++mu)
      shifted[static_cast<std::size_t>(mu)] =
          std::abs(row[static_cast<std::size_t>(mu)] -
                   rep.unit_mode[static_cast<std::size_t>(mu)]);
    double l;
    const bool degenerate =
        std::all_of(shifted.begin(), shifted.end(), [](double x) { return x == 0.0; });
    if (degenerate)
      l = 0.0;
    else if (unit_weights)
      l = weighted_participation_ratio(shifted, *unit_weights, 3);
    else
      l = participation_ratio(shifted, 3);
    rep.per_sequence.push_back(l);
  }
  rep.median = median_of(rep.per_sequence);
  return rep;
}

}  // namespace

ActiveUnitsReport active_units(const RbmModel& m, std::span<const Sequence> msa) {
  return active_units_impl(m, msa, nullptr);
}

OverlapReport overlaps(const RbmModel& m) {
  const int M = m.n_hidden();
  OverlapReport rep;
  rep.n_hidden = M;
  rep.matrix.assign(static_cast<std::size_t>(M) * M, 0.0);
  std::vector<double> norm(static_cast<std::size_t>(M));
  for (int mu = 0; mu < M; ++mu) {
    double s = 0.0;
    for (double w : m.unit_weights(mu)) s += w * w;
    norm[static_cast<std::size_t>(mu)] = std::sqrt(s);
  }
  for (int mu = 0; mu < M; ++mu) {
    rep.matrix[static_cast<std::size_t>(mu) * M + mu] = 1.0;
    const auto wmu = m.unit_weights(mu);
    for (int nu = mu + 1; nu < M; ++nu) {
      const auto wnu = m.unit_weights(nu);
      double dot = 0.0;
      for (std::size_t k = 0; k < wmu.size(); ++k) dot += wmu[k] * wnu[k];
      const double den = norm[static_cast<std::size_t>(mu)] * norm[static_cast<std::size_t>(nu)];
      const double o = den > 0.0 ? dot / den : 0.0;
      rep.matrix[static_cast<std::size_t>(mu) * M + nu] = o;
      rep.matrix[static_cast<std::size_t>(nu) * M + mu] = o;
    }
  }
  rep.max_abs.assign(static_cast<std::size_t>(M), 0.0);
  rep.unit_weight.assign(static_cast<std::size_t>(M), 1.0);
  for (int mu = 0; mu < M; ++mu) {
    double mx = 0.0;
    int neighbours = 0;
    for (int nu = 0; nu < M; ++nu) {
      if (nu == mu) continue;
      const double o = std::abs(rep.overlap(mu, nu));
      mx = std::max(mx, o);
      if (o > 0.9) ++neighbours;
    }
    rep.max_abs[static_cast<std::size_t>(mu)] = mx;
    rep.unit_weight[static_cast<std::size_t>(mu)] = 1.0 / (1.0 + neighbours);
  }
  return rep;
}

ActiveUnitsReport weighted_active_units(const RbmModel& m,
                                        std::span<const Sequence> msa,
                                        const OverlapReport& ov) {
  if (ov.n_hidden != m.n_hidden())
    throw std::invalid_argument("weighted_active_units: overlap report mismatch");
  return active_units_impl(m, msa, &ov.unit_weight);
}

AisResult ais_log_z(const RbmModel& m, int n_beta, int n_chains, std::uint64_t seed) {
  if (n_beta < 2) throw std::invalid_argument("ais: n_beta must be >= 2");
  if (n_chains < 2) throw std::invalid_argument("ais: n_chains must be >= 2");

  // base partition function (beta = 0): independent sites + free hidden units
  double log_z0 = 0.0;
  for (int i = 0; i < m.n_visible; ++i) {
    std::vector<double> row(static_cast<std::size_t>(m.q));
    for (int v = 0; v < m.q; ++v) row[static_cast<std::size_t>(v)] = m.field(i, v);
    log_z0 += logsumexp(row);
  }
  for (const auto& pot : m.potentials) log_z0 += gamma_value(pot, 0.0);

  // beta schedule: geometric 1e-4 -> 0.1 over the first 40%, then linear to 1
  std::vector<double> betas(static_cast<std::size_t>(n_beta));
  const int n_geo = std::max(1, static_cast<int>(0.4 * n_beta));
  for (int k = 0; k < n_geo; ++k)
    betas[static_cast<std::size_t>(k)] =
        1e-4 * std::pow(0.1 / 1e-4, static_cast<double>(k) / std::max(1, n_geo - 1));
  for (int k = n_geo; k < n_beta; ++k)
    betas[static_cast<std::size_t>(k)] =
        0.1 + (1.0 - 0.1) * static_cast<double>(k - n_geo + 1) / (n_beta - n_geo);
  betas.back() = 1.0;

  const int M = m.n_hidden();
  AisResult res;
  res.log_weights.resize(static_cast<std::size_t>(n_chains));
  std::vector<double> input(static_cast<std::size_t>(M));
  std::vector<double> h(static_cast<std::size_t>(M));
  std::vector<double> logits;

  for (int c = 0; c < n_chains; ++c) {
    Rng rng = Rng::stream(seed, 0xa150000 + static_cast<std::uint64_t>(c));
    // exact draw from the base distribution
    Sequence v(static_cast<std::size_t>(m.n_visible));
    for (int i = 0; i < m.n_visible; ++i) {
      std::vector<double> row(static_cast<std::size_t>(m.q));
      for (int s = 0; s < m.q; ++s) row[static_cast<std::size_t>(s)] = m.field(i, s);
      v[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(rng.categorical_from_logits(row));
    }
    double logw = 0.0;
    double beta_prev = 0.0;
    for (int k = 0; k < n_beta; ++k) {
      const double beta = betas[static_cast<std::size_t>(k)];
      hidden_input(m, v, input);
      // logw += log p_beta(v) - log p_beta_prev(v) (unnormalized):
      // only the Gamma terms depend on beta
      for (int mu = 0; mu < M; ++mu) {
        const auto& pot = m.potentials[static_cast<std::size_t>(mu)];
        logw += gamma_value(pot, beta * input[static_cast<std::size_t>(mu)]) -
                gamma_value(pot, beta_prev * input[static_cast<std::size_t>(mu)]);
      }
      // one Gibbs transition at the new beta (reusing the inputs)
      for (int mu = 0; mu < M; ++mu)
        h[static_cast<std::size_t>(mu)] = sample_conditional(
            m.potentials[static_cast<std::size_t>(mu)],
            beta * input[static_cast<std::size_t>(mu)], rng);
      logits.assign(m.fields.begin(), m.fields.end());
      for (int mu = 0; mu < M; ++mu) {
        const double hb = beta * h[static_cast<std::size_t>(mu)];
        if (hb == 0.0) continue;
        const double* w = m.weights.data() +
                          static_cast<std::size_t>(mu) * m.n_visible * m.q;
        for (int t = 0; t < m.n_visible * m.q; ++t) logits[static_cast<std::size_t>(t)] += hb * w[t];
      }
      for (int i = 0; i < m.n_visible; ++i)
        v[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(rng.categorical_from_logits(
            {logits.data() + static_cast<std::size_t>(i) * m.q, static_cast<std::size_t>(m.q)}));
      beta_prev = beta;
    }
    res.log_weights[static_cast<std::size_t>(c)] = logw;
  }

  const double lse = logsumexp(res.log_weights);
  res.log_z = log_z0 + lse - std::log(static_cast<double>(n_chains));

  // effective sample size of the normalized weights
  double sum_sq = 0.0;
  for (double lw : res.log_weights) {
    const double u = std::exp(lw - lse);
    sum_sq += u * u;
  }
  res.ess = 1.0 / sum_sq;
  res.low_ess_warning = res.ess < 0.1 * n_chains;

  // bootstrap standard error over chains
  Rng brng = Rng::stream(seed, 0xb007);
  constexpr int kResamples = 200;
  std::vector<double> resampled(static_cast<std::size_t>(n_chains));
  double mean = 0.0, m2 = 0.0;
  for (int r = 0; r < kResamples; ++r) {
    for (int c = 0; c < n_chains; ++c)
      resampled[static_cast<std::size_t>(c)] = res.log_weights[brng.uniform_below(
          static_cast<std::uint32_t>(n_chains))];
    const double est = logsumexp(resampled) - std::log(static_cast<double>(n_chains));
    const double d = est - mean;
    mean += d / (r + 1);
    m2 += d * (est - mean);
  }
  res.std_err = std::sqrt(m2 / (kResamples - 1));
  return res;
}

LikelihoodReport log_likelihood(const RbmModel& m, std::span<const Sequence> msa,
                                double log_z) {
  if (msa.empty()) throw std::invalid_argument("log_likelihood: empty MSA");
  LikelihoodReport rep;
  double total = 0.0;
  for (const Sequence& v : msa) {
    const double ll = -effective_energy(m, v) - log_z;
    rep.per_sequence.push_back(ll);
    total += ll;
  }
  rep.mean = total / static_cast<double>(msa.size());
  return rep;
}

std::string to_string(FeatureClass c) {
  switch (c) {
    case FeatureClass::kDisconnected: return "disconnected";
    case FeatureClass::kSingle: return "single";
    case FeatureClass::kPair: return "pair";
    case FeatureClass::kTriplet: return "triplet";
    case FeatureClass::kExtended: return "extended";
  }
  return "?";
}

std::vector<Feature> locate_features(const RbmModel& m) {
  std::vector<Feature> features;
  const int n = m.n_visible, q = m.q;
  std::vector<double> site_amp(static_cast<std::size_t>(n));
  for (int mu = 0; mu < m.n_hidden(); ++mu) {
    double mx = 0.0;
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int v = 0; v < q; ++v) s += std::abs(m.weight(mu, i, v));
      site_amp[static_cast<std::size_t>(i)] = s;
      mx = std::max(mx, s);
    }
    Feature f;
    if (mx > 0.0)
      for (int i = 0; i < n; ++i)
        if (site_amp[static_cast<std::size_t>(i)] > 0.5 * mx) f.sites.push_back(i);
    switch (f.sites.size()) {
      case 0: f.cls = FeatureClass::kDisconnected; break;
      case 1: f.cls = FeatureClass::kSingle; break;
      case 2: f.cls = FeatureClass::kPair; break;
      case 3: f.cls = FeatureClass::kTriplet; break;
      default: f.cls = FeatureClass::kExtended; break;
    }
    features.push_back(std::move(f));
  }
  return features;
}

ContactAnalysis contact_analysis(std::span<const Feature> features, const Fold& fold) {
  ContactAnalysis ca;
  for (const Feature& f : features) {
    int flag = -1;
    if (f.cls == FeatureClass::kPair) {
      ++ca.pair_features;
      flag = fold.contact(f.sites[0], f.sites[1]) ? 1 : 0;
      ca.pair_true_positive += flag;
    } else if (f.cls == FeatureClass::kTriplet) {
      ++ca.triplet_features;
      const int edges = fold.contact(f.sites[0], f.sites[1]) +
                        fold.contact(f.sites[0], f.sites[2]) +
                        fold.contact(f.sites[1], f.sites[2]);
      flag = edges >= 2 ? 1 : 0;
      ca.triplet_true_positive += flag;
    }
    ca.true_positive_flag.push_back(flag);
  }
  return ca;
}

std::vector<double> feature_importance(const RbmModel& m,
                                       std::span<const Sequence> msa) {
  if (msa.empty()) throw std::invalid_argument("feature_importance: empty MSA");
  const auto acts = unit_activities(m, msa);
  const int M = m.n_hidden();
  std::vector<double> importance(static_cast<std::size_t>(M), 0.0);
  for (int mu = 0; mu < M; ++mu) {
    double mean = 0.0;
    for (const auto& row : acts) mean += row[static_cast<std::size_t>(mu)];
    mean /= static_cast<double>(acts.size());
    double var = 0.0;
    for (const auto& row : acts) {
      const double d = row[static_cast<std::size_t>(mu)] - mean;
      var += d * d;
    }
    var /= static_cast<double>(acts.size());
    double norm = 0.0;
    for (double w : m.unit_weights(mu)) norm += w * w;
    importance[static_cast<std::size_t>(mu)] = std::sqrt(var) * std::sqrt(norm);
  }
  return importance;
}

}  // namespace lprbm
