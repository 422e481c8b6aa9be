#include "lprbm/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "lprbm/eval.hpp"
#include "lprbm/mathutil.hpp"

namespace lprbm {

Moments Moments::zeros(const RbmModel& m) {
  Moments mo;
  mo.field_m.assign(m.fields.size(), 0.0);
  mo.weight_m.assign(m.weights.size(), 0.0);
  mo.param_m.assign(static_cast<std::size_t>(m.n_hidden()) * 4, 0.0);
  return mo;
}

void Moments::accumulate(const RbmModel& m, const Sequence& v, double weight) {
  const int n = m.n_visible, q = m.q, M = m.n_hidden();
  for (int i = 0; i < n; ++i)
    field_m[static_cast<std::size_t>(i) * q + v[static_cast<std::size_t>(i)]] += weight;
  std::vector<double> input(static_cast<std::size_t>(M));
  hidden_input(m, v, input);
  for (int mu = 0; mu < M; ++mu) {
    const auto& pot = m.potentials[static_cast<std::size_t>(mu)];
    const double act = gamma_d1(pot, input[static_cast<std::size_t>(mu)]);
    double* wm = weight_m.data() + static_cast<std::size_t>(mu) * n * q;
    const double wact = weight * act;
    for (int i = 0; i < n; ++i) wm[i * q + v[static_cast<std::size_t>(i)]] += wact;
    const auto pg = gamma_param_grad(pot, input[static_cast<std::size_t>(mu)]);
    for (int k = 0; k < 4; ++k)
      param_m[static_cast<std::size_t>(mu) * 4 + k] += weight * pg[static_cast<std::size_t>(k)];
  }
  total_weight += weight;
}

void Moments::finalize() {
  if (total_weight <= 0.0) throw std::logic_error("Moments: no samples");
  const double inv = 1.0 / total_weight;
  for (auto& x : field_m) x *= inv;
  for (auto& x : weight_m) x *= inv;
  for (auto& x : param_m) x *= inv;
  total_weight = 1.0;
}

Moments collect_moments(const RbmModel& m, std::span<const Sequence> batch) {
  Moments mo = Moments::zeros(m);
  for (const Sequence& v : batch) mo.accumulate(m, v, 1.0);
  mo.finalize();
  return mo;
}

namespace {

void require_batches(std::span<const Sequence> a, std::span<const Sequence> b) {
  if (a.empty() || b.empty())
    throw std::invalid_argument("gradient: empty batch");
}

std::vector<double> subtract(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] - b[k];
  return out;
}

}  // namespace

std::vector<double> gradient_fields(const RbmModel& m,
                                    std::span<const Sequence> data_batch,
                                    std::span<const Sequence> model_batch) {
  require_batches(data_batch, model_batch);
  return subtract(collect_moments(m, data_batch).field_m,
                  collect_moments(m, model_batch).field_m);
}

std::vector<double> gradient_weights(const RbmModel& m,
                                     std::span<const Sequence> data_batch,
                                     std::span<const Sequence> model_batch) {
  require_batches(data_batch, model_batch);
  return subtract(collect_moments(m, data_batch).weight_m,
                  collect_moments(m, model_batch).weight_m);
}

std::vector<double> gradient_potentials(const RbmModel& m,
                                        std::span<const Sequence> data_batch,
                                        std::span<const Sequence> model_batch) {
  require_batches(data_batch, model_batch);
  return subtract(collect_moments(m, data_batch).param_m,
                  collect_moments(m, model_batch).param_m);
}

Regularization regularization_gradient(const RbmModel& m, double lambda_l1b2,
                                       double lambda_field_l2) {
  if (lambda_l1b2 < 0.0 || lambda_field_l2 < 0.0)
    throw std::invalid_argument("regularization strengths must be >= 0");
  Regularization reg;
  reg.weight_grad.assign(m.weights.size(), 0.0);
  reg.field_grad.assign(m.fields.size(), 0.0);
  const int n = m.n_visible, q = m.q;
  const double nq = static_cast<double>(n) * q;
  for (int mu = 0; mu < m.n_hidden(); ++mu) {
    const double* w = m.weights.data() + static_cast<std::size_t>(mu) * n * q;
    double* g = reg.weight_grad.data() + static_cast<std::size_t>(mu) * n * q;
    double abs_sum = 0.0;
    for (int k = 0; k < n * q; ++k) abs_sum += std::abs(w[k]);
    reg.value += lambda_l1b2 / (2.0 * nq) * abs_sum * abs_sum;
    const double scale = lambda_l1b2 / nq * abs_sum;
    for (int k = 0; k < n * q; ++k)
      g[k] = scale * (w[k] > 0.0 ? 1.0 : (w[k] < 0.0 ? -1.0 : 0.0));
  }
  for (std::size_t k = 0; k < m.fields.size(); ++k) {
    reg.value += lambda_field_l2 * m.fields[k] * m.fields[k];
    reg.field_grad[k] = 2.0 * lambda_field_l2 * m.fields[k];
  }
  return reg;
}

std::vector<Sequence> enumerate_states(int n_visible, int q) {
  double total = std::pow(static_cast<double>(q), n_visible);
  if (total > 2e6) throw std::invalid_argument("enumerate_states: q^N too large");
  std::vector<Sequence> states;
  states.reserve(static_cast<std::size_t>(total));
  Sequence v(static_cast<std::size_t>(n_visible), 0);
  for (;;) {
    states.push_back(v);
    int i = 0;
    while (i < n_visible && ++v[static_cast<std::size_t>(i)] == q) {
      v[static_cast<std::size_t>(i)] = 0;
      ++i;
    }
    if (i == n_visible) break;
  }
  return states;
}

std::vector<double> exact_state_log_probs(const RbmModel& m,
                                          std::span<const Sequence> states) {
  std::vector<double> neg_e(states.size());
  for (std::size_t k = 0; k < states.size(); ++k)
    neg_e[k] = -effective_energy(m, states[k]);
  const double log_z = logsumexp(neg_e);
  for (auto& x : neg_e) x -= log_z;
  return neg_e;
}

double exact_log_z(const RbmModel& m) {
  const auto states = enumerate_states(m.n_visible, m.q);
  std::vector<double> neg_e(states.size());
  for (std::size_t k = 0; k < states.size(); ++k)
    neg_e[k] = -effective_energy(m, states[k]);
  return logsumexp(neg_e);
}

namespace {

// exact model-term moments, weights = state probabilities
Moments exact_model_moments(const RbmModel& m, std::span<const Sequence> states) {
  const auto logp = exact_state_log_probs(m, states);
  Moments mo = Moments::zeros(m);
  for (std::size_t k = 0; k < states.size(); ++k)
    mo.accumulate(m, states[k], std::exp(logp[k]));
  mo.finalize();
  return mo;
}

class PcdTrainer {
 public:
  PcdTrainer(std::span<const Sequence> data, int q, const ModelSpec& spec,
             const TrainConfig& cfg)
      : data_(data), cfg_(cfg), rng_(Rng::stream(cfg.seed, 0xdadadada)) {
    if (data.empty()) throw std::invalid_argument("train: empty data");
    const int n = static_cast<int>(data.front().size());
    for (const Sequence& s : data) {
      if (static_cast<int>(s.size()) != n)
        throw std::invalid_argument("train: ragged data");
      for (std::uint8_t a : s)
        if (a >= q) throw std::invalid_argument("train: symbol out of range");
    }
    model_ = RbmModel::create(n, q, spec.n_hidden, spec.potential);
    init_fields();
    init_weights();
    if (cfg_.exact_model_term)
      states_ = enumerate_states(n, q);
    else
      init_chains();
  }

  TrainResult run() {
    const std::size_t B = data_.size();
    const int batches_per_epoch =
        std::max<int>(1, static_cast<int>((B + cfg_.batch_size - 1) / cfg_.batch_size));
    std::vector<std::uint32_t> order(B);
    std::iota(order.begin(), order.end(), 0u);

    TrainResult result;
    for (int epoch = 0; epoch < cfg_.n_epochs; ++epoch) {
      const double lr = learning_rate(epoch);
      // deterministic epoch shuffle
      Rng erng = Rng::stream(cfg_.seed, 0xe90c + static_cast<std::uint64_t>(epoch));
      for (std::size_t b = B; b > 1; --b)
        std::swap(order[b - 1], order[erng.uniform_below(static_cast<std::uint32_t>(b))]);

      double epoch_data_e = 0.0, epoch_model_e = 0.0;
      long counted = 0;
      for (int bi = 0; bi < batches_per_epoch; ++bi) {
        const std::size_t lo = static_cast<std::size_t>(bi) * cfg_.batch_size;
        const std::size_t hi = std::min(B, lo + cfg_.batch_size);
        if (lo >= hi) break;
        batch_.clear();
        for (std::size_t k = lo; k < hi; ++k)
          batch_.push_back(data_[order[k]]);
        update(lr);
        if (bi % 8 == 0) {  // subsampled energy bookkeeping
          epoch_data_e += effective_energy(model_, batch_.front());
          epoch_model_e += effective_energy(
              model_, cfg_.exact_model_term ? batch_.back() : chains_.front());
          ++counted;
        }
      }
      if (!model_.finite())
        throw std::runtime_error("train: parameters diverged (non-finite)");
      result.log.push_back(log_row(epoch, lr, epoch_data_e / counted,
                                   epoch_model_e / counted));
    }
    apply_zero_sum_gauge(model_);
    model_.provenance_json = provenance();
    result.model = std::move(model_);
    return result;
  }

 private:
  void init_fields() {
    const int n = model_.n_visible, q = model_.q;
    std::vector<double> freq(static_cast<std::size_t>(n) * q, cfg_.field_pseudocount);
    for (const Sequence& s : data_)
      for (int i = 0; i < n; ++i) freq[static_cast<std::size_t>(i) * q + s[static_cast<std::size_t>(i)]] += 1.0;
    for (int i = 0; i < n; ++i) {
      double total = 0.0;
      for (int v = 0; v < q; ++v) total += freq[static_cast<std::size_t>(i) * q + v];
      for (int v = 0; v < q; ++v)
        model_.field(i, v) = std::log(freq[static_cast<std::size_t>(i) * q + v] / total);
    }
  }

  void init_weights() {
    const double scale = cfg_.init_weight_scale / std::sqrt(model_.n_visible);
    for (auto& w : model_.weights) w = scale * rng_.normal();
    apply_zero_sum_gauge(model_);
  }

  void init_chains() {
    chains_.clear();
    for (int c = 0; c < cfg_.n_chains; ++c)
      chains_.push_back(data_[rng_.uniform_below(static_cast<std::uint32_t>(data_.size()))]);
    chain_rngs_.clear();
    for (int c = 0; c < cfg_.n_chains; ++c)
      chain_rngs_.push_back(Rng::stream(cfg_.seed, 0xc4a1 + static_cast<std::uint64_t>(c)));
  }

  double learning_rate(int epoch) const {
    const double start = cfg_.lr_decay_start * cfg_.n_epochs;
    if (epoch < start) return cfg_.learning_rate;
    return cfg_.learning_rate / std::sqrt(1.0 + (epoch - start));
  }

  void update(double lr) {
    Moments data_m = Moments::zeros(model_);
    for (const Sequence& v : batch_) data_m.accumulate(model_, v, 1.0);
    data_m.finalize();

    Moments model_m = Moments::zeros(model_);
    if (cfg_.exact_model_term) {
      model_m = exact_model_moments(model_, states_);
    } else {
      std::vector<double> h;
      for (int c = 0; c < cfg_.n_chains; ++c) {
        for (int s = 0; s < cfg_.gibbs_steps; ++s)
          gibbs_step(model_, chains_[static_cast<std::size_t>(c)], h,
                     chain_rngs_[static_cast<std::size_t>(c)]);
        model_m.accumulate(model_, chains_[static_cast<std::size_t>(c)], 1.0);
      }
      model_m.finalize();
    }

    const Regularization reg =
        regularization_gradient(model_, cfg_.lambda_l1b2, cfg_.lambda_field_l2);

    for (std::size_t k = 0; k < model_.fields.size(); ++k)
      model_.fields[k] += lr * (data_m.field_m[k] - model_m.field_m[k] - reg.field_grad[k]);
    for (std::size_t k = 0; k < model_.weights.size(); ++k)
      model_.weights[k] +=
          lr * (data_m.weight_m[k] - model_m.weight_m[k] - reg.weight_grad[k]);
    for (int mu = 0; mu < model_.n_hidden(); ++mu) {
      auto& pot = model_.potentials[static_cast<std::size_t>(mu)];
      const double* g = &data_m.param_m[static_cast<std::size_t>(mu) * 4];
      const double* gm = &model_m.param_m[static_cast<std::size_t>(mu) * 4];
      const auto step = [&](int k) { return lr * (g[k] - gm[k]); };
      switch (pot.kind) {
        case HiddenPotential::Kind::kBernoulli:
          pot.theta_plus += step(0);
          break;
        case HiddenPotential::Kind::kQuadratic:
        case HiddenPotential::Kind::kRelu:
          // gammas move in log space to stay positive
          pot.gamma_plus *= std::exp(pot.gamma_plus * step(0));
          pot.gamma_minus = pot.gamma_plus;
          pot.theta_plus += step(1);
          if (pot.kind == HiddenPotential::Kind::kQuadratic)
            pot.theta_minus = pot.theta_plus;
          break;
        case HiddenPotential::Kind::kDRelu:
          pot.gamma_plus *= std::exp(pot.gamma_plus * step(0));
          pot.gamma_minus *= std::exp(pot.gamma_minus * step(1));
          pot.theta_plus += step(2);
          pot.theta_minus += step(3);
          break;
      }
    }
    apply_zero_sum_gauge(model_);
  }

  TrainLogRow log_row(int epoch, double lr, double data_e, double model_e) {
    TrainLogRow row;
    row.epoch = epoch;
    row.learning_rate = lr;
    row.data_energy = data_e;
    row.model_energy = model_e;
    row.reg_value =
        regularization_gradient(model_, cfg_.lambda_l1b2, cfg_.lambda_field_l2).value;
    row.weight_norm = 0.0;
    for (double w : model_.weights) row.weight_norm += w * w;
    row.weight_norm = std::sqrt(row.weight_norm);
    const auto sp = weight_sparsity(model_);
    row.sparsity_p = sp.median;
    // L proxy over a fixed small subsample
    const std::size_t n_sub = std::min<std::size_t>(data_.size(), 200);
    std::vector<Sequence> sub(data_.begin(), data_.begin() + static_cast<long>(n_sub));
    row.active_l = active_units(model_, sub).median;
    return row;
  }

  std::string provenance() const {
    nlohmann::json j;
    j["trainer"] = cfg_.exact_model_term ? "exact-gradient" : "pcd";
    j["n_chains"] = cfg_.n_chains;
    j["gibbs_steps"] = cfg_.gibbs_steps;
    j["batch_size"] = cfg_.batch_size;
    j["n_epochs"] = cfg_.n_epochs;
    j["learning_rate"] = cfg_.learning_rate;
    j["lambda_l1b2"] = cfg_.lambda_l1b2;
    j["lambda_field_l2"] = cfg_.lambda_field_l2;
    j["seed"] = cfg_.seed;
    j["n_data"] = data_.size();
    return j.dump();
  }

  std::span<const Sequence> data_;
  TrainConfig cfg_;
  Rng rng_;
  RbmModel model_;
  std::vector<Sequence> batch_;
  std::vector<Sequence> chains_;
  std::vector<Rng> chain_rngs_;
  std::vector<Sequence> states_;  // exact mode
};

}  // namespace

TrainResult train(std::span<const Sequence> data, int q, const ModelSpec& spec,
                  const TrainConfig& config) {
  return PcdTrainer(data, q, spec, config).run();
}

}  // namespace lprbm
