#include "lprbm/rbm.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "lprbm/mathutil.hpp"

namespace lprbm {

using json = nlohmann::json;

RbmModel RbmModel::create(int n_visible, int q, int n_hidden,
                          const HiddenPotential& potential) {
  if (n_visible < 1 || q < 2 || n_hidden < 0)
    throw std::invalid_argument("RbmModel::create: bad dimensions");
  RbmModel m;
  m.n_visible = n_visible;
  m.q = q;
  m.potentials.assign(static_cast<std::size_t>(n_hidden), potential);
  m.fields.assign(static_cast<std::size_t>(n_visible) * q, 0.0);
  m.weights.assign(static_cast<std::size_t>(n_hidden) * n_visible * q, 0.0);
  return m;
}

void RbmModel::validate_sequence(const Sequence& v) const {
  if (static_cast<int>(v.size()) != n_visible)
    throw std::invalid_argument("sequence length does not match model");
  for (std::uint8_t a : v)
    if (a >= q) throw std::invalid_argument("sequence symbol out of range");
}

bool RbmModel::finite() const {
  for (double x : fields)
    if (!std::isfinite(x)) return false;
  for (double x : weights)
    if (!std::isfinite(x)) return false;
  for (const auto& p : potentials)
    if (!std::isfinite(p.gamma_plus) || !std::isfinite(p.gamma_minus) ||
        !std::isfinite(p.theta_plus) || !std::isfinite(p.theta_minus) ||
        p.gamma_plus <= 0.0 || p.gamma_minus <= 0.0)
      return false;
  return true;
}

void hidden_input(const RbmModel& m, const Sequence& v, std::span<double> out) {
  const int n = m.n_visible, q = m.q, M = m.n_hidden();
  for (int mu = 0; mu < M; ++mu) {
    const double* w = m.weights.data() + static_cast<std::size_t>(mu) * n * q;
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += w[i * q + v[static_cast<std::size_t>(i)]];
    out[static_cast<std::size_t>(mu)] = s;
  }
}

std::vector<double> hidden_input(const RbmModel& m, const Sequence& v) {
  m.validate_sequence(v);
  std::vector<double> out(static_cast<std::size_t>(m.n_hidden()));
  hidden_input(m, v, out);
  return out;
}

std::vector<double> sample_hidden(const RbmModel& m, const Sequence& v, Rng& rng) {
  m.validate_sequence(v);
  std::vector<double> h(static_cast<std::size_t>(m.n_hidden()));
  std::vector<double> input(static_cast<std::size_t>(m.n_hidden()));
  hidden_input(m, v, input);
  for (int mu = 0; mu < m.n_hidden(); ++mu)
    h[static_cast<std::size_t>(mu)] = sample_conditional(
        m.potentials[static_cast<std::size_t>(mu)], input[static_cast<std::size_t>(mu)], rng);
  return h;
}

namespace {

void visible_logits(const RbmModel& m, std::span<const double> h,
                    std::vector<double>& logits) {
  const int n = m.n_visible, q = m.q, M = m.n_hidden();
  logits.assign(m.fields.begin(), m.fields.end());
  for (int mu = 0; mu < M; ++mu) {
    const double hmu = h[static_cast<std::size_t>(mu)];
    if (hmu == 0.0) continue;
    const double* w = m.weights.data() + static_cast<std::size_t>(mu) * n * q;
    double* out = logits.data();
    for (int k = 0; k < n * q; ++k) out[k] += hmu * w[k];
  }
}

}  // namespace

Sequence sample_visible(const RbmModel& m, std::span<const double> h, Rng& rng) {
  if (static_cast<int>(h.size()) != m.n_hidden())
    throw std::invalid_argument("hidden state size does not match model");
  std::vector<double> logits;
  visible_logits(m, h, logits);
  Sequence v(static_cast<std::size_t>(m.n_visible));
  for (int i = 0; i < m.n_visible; ++i)
    v[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(rng.categorical_from_logits(
        {logits.data() + static_cast<std::size_t>(i) * m.q, static_cast<std::size_t>(m.q)}));
  return v;
}

void gibbs_step(const RbmModel& m, Sequence& v, std::vector<double>& h, Rng& rng,
                std::span<const HiddenClamp> clamps) {
  h = sample_hidden(m, v, rng);
  for (const auto& c : clamps) h[static_cast<std::size_t>(c.unit)] = c.value;
  v = sample_visible(m, h, rng);
}

std::vector<Sequence> gibbs_chain(const RbmModel& m, const Sequence& v0, int n_steps,
                                  Rng& rng) {
  if (n_steps < 0) throw std::invalid_argument("gibbs_chain: negative step count");
  m.validate_sequence(v0);
  std::vector<Sequence> trajectory;
  trajectory.reserve(static_cast<std::size_t>(n_steps) + 1);
  trajectory.push_back(v0);
  Sequence v = v0;
  std::vector<double> h;
  for (int s = 0; s < n_steps; ++s) {
    gibbs_step(m, v, h, rng);
    trajectory.push_back(v);
  }
  return trajectory;
}

double effective_energy(const RbmModel& m, const Sequence& v) {
  m.validate_sequence(v);
  double e = 0.0;
  for (int i = 0; i < m.n_visible; ++i) e -= m.field(i, v[static_cast<std::size_t>(i)]);
  std::vector<double> input(static_cast<std::size_t>(m.n_hidden()));
  hidden_input(m, v, input);
  for (int mu = 0; mu < m.n_hidden(); ++mu)
    e -= gamma_value(m.potentials[static_cast<std::size_t>(mu)],
                     input[static_cast<std::size_t>(mu)]);
  return e;
}

double PairwiseModel::energy(const Sequence& v) const {
  double e = 0.0;
  for (int i = 0; i < n_visible; ++i) e -= fields[static_cast<std::size_t>(i) * q + v[static_cast<std::size_t>(i)]];
  for (int i = 0; i < n_visible; ++i)
    for (int j = 0; j < n_visible; ++j)
      e -= 0.5 * coupling(i, j, v[static_cast<std::size_t>(i)], v[static_cast<std::size_t>(j)]);
  return e;
}

PairwiseModel to_pairwise(const RbmModel& m) {
  for (const auto& p : m.potentials)
    if (p.kind != HiddenPotential::Kind::kQuadratic)
      throw std::invalid_argument("to_pairwise requires all-quadratic potentials");
  PairwiseModel pw;
  pw.n_visible = m.n_visible;
  pw.q = m.q;
  const int n = m.n_visible, q = m.q;
  pw.fields.assign(m.fields.begin(), m.fields.end());
  for (int mu = 0; mu < m.n_hidden(); ++mu) {
    const auto& pot = m.potentials[static_cast<std::size_t>(mu)];
    const double ratio = pot.theta_plus / pot.gamma_plus;
    for (int i = 0; i < n; ++i)
      for (int v = 0; v < q; ++v)
        pw.fields[static_cast<std::size_t>(i) * q + v] -= ratio * m.weight(mu, i, v);
  }
  pw.couplings.assign(static_cast<std::size_t>(n) * n * q * q, 0.0);
  for (int mu = 0; mu < m.n_hidden(); ++mu) {
    const double inv_gamma = 1.0 / m.potentials[static_cast<std::size_t>(mu)].gamma_plus;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int v = 0; v < q; ++v)
          for (int vp = 0; vp < q; ++vp)
            pw.couplings[((static_cast<std::size_t>(i) * n + j) * q + v) * q + vp] +=
                inv_gamma * m.weight(mu, i, v) * m.weight(mu, j, vp);
  }
  return pw;
}

RbmModel random_ensemble_model(double alpha, double p, double weight_scale,
                               double theta, double field, int n_visible, Rng& rng) {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("ensemble: p must be in (0,1]");
  if (n_visible < 1) throw std::invalid_argument("ensemble: N must be positive");
  const int M = static_cast<int>(std::ceil(alpha * n_visible));
  if (M < 1) throw std::invalid_argument("ensemble: alpha*N must be at least 1");
  RbmModel m = RbmModel::create(n_visible, 2, M, HiddenPotential::relu(1.0, theta));
  // states: 0 encodes spin -1, 1 encodes spin +1
  for (int i = 0; i < n_visible; ++i) {
    m.field(i, 0) = -field;
    m.field(i, 1) = field;
  }
  const double w = weight_scale / std::sqrt(static_cast<double>(n_visible));
  for (int mu = 0; mu < M; ++mu)
    for (int i = 0; i < n_visible; ++i) {
      const double u = rng.uniform();
      double value = 0.0;
      if (u < p / 2.0)
        value = w;
      else if (u < p)
        value = -w;
      m.weight(mu, i, 0) = -value;
      m.weight(mu, i, 1) = value;
    }
  return m;
}

void apply_zero_sum_gauge(RbmModel& m) {
  const int n = m.n_visible, q = m.q;
  for (int mu = 0; mu < m.n_hidden(); ++mu) {
    double input_shift = 0.0;
    for (int i = 0; i < n; ++i) {
      double mean = 0.0;
      for (int v = 0; v < q; ++v) mean += m.weight(mu, i, v);
      mean /= q;
      for (int v = 0; v < q; ++v) m.weight(mu, i, v) -= mean;
      input_shift += mean;
    }
    // w -> w - mean shifts every input by -input_shift; compensating the
    // thresholds keeps the joint distribution unchanged
    auto& pot = m.potentials[static_cast<std::size_t>(mu)];
    pot.theta_plus -= input_shift;
    if (pot.kind == HiddenPotential::Kind::kQuadratic ||
        pot.kind == HiddenPotential::Kind::kDRelu)
      pot.theta_minus -= input_shift;
  }
  for (int i = 0; i < n; ++i) {
    double mean = 0.0;
    for (int v = 0; v < q; ++v) mean += m.field(i, v);
    mean /= q;
    for (int v = 0; v < q; ++v) m.field(i, v) -= mean;
  }
}

void save_model(const std::filesystem::path& path, const RbmModel& m) {
  json j;
  j["format"] = "lprbm-model-v1";
  j["n_visible"] = m.n_visible;
  j["q"] = m.q;
  j["n_hidden"] = m.n_hidden();
  j["gauge"] = m.gauge;
  json pots = json::array();
  for (const auto& p : m.potentials) {
    json pj;
    pj["kind"] = p.kind_name();
    switch (p.kind) {
      case HiddenPotential::Kind::kBernoulli:
        pj["u1"] = p.u1();
        break;
      case HiddenPotential::Kind::kQuadratic:
      case HiddenPotential::Kind::kRelu:
        pj["gamma"] = p.gamma_plus;
        pj["theta"] = p.theta_plus;
        break;
      case HiddenPotential::Kind::kDRelu:
        pj["gamma_plus"] = p.gamma_plus;
        pj["gamma_minus"] = p.gamma_minus;
        pj["theta_plus"] = p.theta_plus;
        pj["theta_minus"] = p.theta_minus;
        break;
    }
    pots.push_back(std::move(pj));
  }
  j["potentials"] = std::move(pots);
  j["fields"] = m.fields;
  j["weights"] = m.weights;
  if (!m.provenance_json.empty()) j["provenance"] = json::parse(m.provenance_json);

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write model file: " + path.string());
  out << j.dump(1) << "\n";
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

RbmModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read model file: " + path.string());
  json j = json::parse(in);
  if (j.value("format", "") != "lprbm-model-v1")
    throw std::runtime_error("not a model file: " + path.string());
  RbmModel m;
  m.n_visible = j.at("n_visible").get<int>();
  m.q = j.at("q").get<int>();
  m.gauge = j.value("gauge", "zero-sum");
  for (const auto& pj : j.at("potentials")) {
    const auto kind = HiddenPotential::kind_from_name(pj.at("kind").get<std::string>());
    switch (kind) {
      case HiddenPotential::Kind::kBernoulli:
        m.potentials.push_back(HiddenPotential::bernoulli(pj.at("u1").get<double>()));
        break;
      case HiddenPotential::Kind::kQuadratic:
        m.potentials.push_back(HiddenPotential::quadratic(
            pj.at("gamma").get<double>(), pj.at("theta").get<double>()));
        break;
      case HiddenPotential::Kind::kRelu:
        m.potentials.push_back(HiddenPotential::relu(pj.at("gamma").get<double>(),
                                                     pj.at("theta").get<double>()));
        break;
      case HiddenPotential::Kind::kDRelu:
        m.potentials.push_back(HiddenPotential::drelu(
            pj.at("gamma_plus").get<double>(), pj.at("gamma_minus").get<double>(),
            pj.at("theta_plus").get<double>(), pj.at("theta_minus").get<double>()));
        break;
    }
  }
  m.fields = j.at("fields").get<std::vector<double>>();
  m.weights = j.at("weights").get<std::vector<double>>();
  if (j.contains("provenance")) m.provenance_json = j["provenance"].dump();
  const auto nq = static_cast<std::size_t>(m.n_visible) * m.q;
  if (m.fields.size() != nq || m.weights.size() != nq * m.potentials.size())
    throw std::runtime_error("model file has inconsistent dimensions");
  return m;
}

}  // namespace lprbm
