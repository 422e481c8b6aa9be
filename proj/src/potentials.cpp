#include "lprbm/potentials.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "lprbm/mathutil.hpp"

namespace lprbm {

namespace {

void require_positive(double g, const char* what) {
  if (!(g > 0.0) || !std::isfinite(g))
    throw std::invalid_argument(std::string(what) + " must be positive and finite");
}

void require_finite_input(double input) {
  if (!std::isfinite(input))
    throw std::domain_error("hidden-unit input must be finite");
}

// Shared pieces of the dReLU computation.  The partition function splits into
// two half-axis Gaussian integrals,
//   Z+ = (1/sqrt(g+)) * integral_0^inf exp(-u^2/2 + t+ u) du,
//   t+ = (I - theta+)/sqrt(g+),
// and symmetrically Z- with t- = (theta- - I)/sqrt(g-).
struct DReluParts {
  double t_plus, t_minus;
  double log_z_plus, log_z_minus;
  double p_plus, p_minus;    // mixture weights Z+-/(Z+ + Z-)
  double mean_plus, mean_minus;  // conditional means of h on each side
  double var_plus, var_minus;
};

DReluParts drelu_parts(const HiddenPotential& pot, double input) {
  DReluParts d;
  const double sgp = std::sqrt(pot.gamma_plus);
  const double sgm = std::sqrt(pot.gamma_minus);
  d.t_plus = (input - pot.theta_plus) / sgp;
  d.t_minus = (pot.theta_minus - input) / sgm;
  d.log_z_plus = -std::log(sgp) + log_truncated_gauss_z(d.t_plus);
  d.log_z_minus = -std::log(sgm) + log_truncated_gauss_z(d.t_minus);
  d.p_plus = sigmoid(d.log_z_plus - d.log_z_minus);
  d.p_minus = 1.0 - d.p_plus;
  d.mean_plus = truncated_mean(d.t_plus) / sgp;
  d.mean_minus = -truncated_mean(d.t_minus) / sgm;
  d.var_plus = truncated_var(d.t_plus) / pot.gamma_plus;
  d.var_minus = truncated_var(d.t_minus) / pot.gamma_minus;
  return d;
}

}  // namespace

HiddenPotential HiddenPotential::bernoulli(double u1) {
  HiddenPotential p;
  p.kind = Kind::kBernoulli;
  p.theta_plus = u1;
  return p;
}

HiddenPotential HiddenPotential::quadratic(double gamma, double theta) {
  require_positive(gamma, "gamma");
  HiddenPotential p;
  p.kind = Kind::kQuadratic;
  p.gamma_plus = p.gamma_minus = gamma;
  p.theta_plus = p.theta_minus = theta;
  return p;
}

HiddenPotential HiddenPotential::relu(double gamma, double theta) {
  require_positive(gamma, "gamma");
  HiddenPotential p;
  p.kind = Kind::kRelu;
  p.gamma_plus = p.gamma_minus = gamma;
  p.theta_plus = p.theta_minus = theta;
  return p;
}

HiddenPotential HiddenPotential::drelu(double gamma_plus, double gamma_minus,
                                       double theta_plus, double theta_minus) {
  require_positive(gamma_plus, "gamma+");
  require_positive(gamma_minus, "gamma-");
  HiddenPotential p;
  p.kind = Kind::kDRelu;
  p.gamma_plus = gamma_plus;
  p.gamma_minus = gamma_minus;
  p.theta_plus = theta_plus;
  p.theta_minus = theta_minus;
  return p;
}

double HiddenPotential::energy(double h) const {
  switch (kind) {
    case Kind::kBernoulli:
      if (h == 0.0) return 0.0;
      if (h == 1.0) return u1();
      return std::numeric_limits<double>::infinity();
    case Kind::kQuadratic:
      return 0.5 * gamma_plus * h * h + theta_plus * h;
    case Kind::kRelu:
      if (h < 0.0) return std::numeric_limits<double>::infinity();
      return 0.5 * gamma_plus * h * h + theta_plus * h;
    case Kind::kDRelu: {
      const double hp = h > 0.0 ? h : 0.0;
      const double hm = h < 0.0 ? h : 0.0;
      return 0.5 * gamma_plus * hp * hp + 0.5 * gamma_minus * hm * hm +
             theta_plus * hp + theta_minus * hm;
    }
  }
  return 0.0;
}

std::string HiddenPotential::kind_name() const {
  switch (kind) {
    case Kind::kBernoulli: return "bernoulli";
    case Kind::kQuadratic: return "quadratic";
    case Kind::kRelu: return "relu";
    case Kind::kDRelu: return "drelu";
  }
  return "?";
}

HiddenPotential::Kind HiddenPotential::kind_from_name(const std::string& name) {
  if (name == "bernoulli") return Kind::kBernoulli;
  if (name == "quadratic") return Kind::kQuadratic;
  if (name == "relu") return Kind::kRelu;
  if (name == "drelu") return Kind::kDRelu;
  throw std::invalid_argument("unknown potential kind: " + name);
}

int HiddenPotential::num_params() const {
  switch (kind) {
    case Kind::kBernoulli: return 1;
    case Kind::kQuadratic:
    case Kind::kRelu: return 2;
    case Kind::kDRelu: return 4;
  }
  return 0;
}

double gamma_value(const HiddenPotential& pot, double input) {
  require_finite_input(input);
  switch (pot.kind) {
    case HiddenPotential::Kind::kBernoulli:
      return log1pexp(input - pot.u1());
    case HiddenPotential::Kind::kQuadratic: {
      const double d = input - pot.theta_plus;
      return 0.5 * std::log(2.0 * M_PI / pot.gamma_plus) +
             d * d / (2.0 * pot.gamma_plus);
    }
    case HiddenPotential::Kind::kRelu: {
      const double t = (input - pot.theta_plus) / std::sqrt(pot.gamma_plus);
      return -0.5 * std::log(pot.gamma_plus) + log_truncated_gauss_z(t);
    }
    case HiddenPotential::Kind::kDRelu: {
      const DReluParts d = drelu_parts(pot, input);
      const double mx = std::max(d.log_z_plus, d.log_z_minus);
      return mx + std::log(std::exp(d.log_z_plus - mx) + std::exp(d.log_z_minus - mx));
    }
  }
  return 0.0;
}

double gamma_d1(const HiddenPotential& pot, double input) {
  require_finite_input(input);
  switch (pot.kind) {
    case HiddenPotential::Kind::kBernoulli:
      return sigmoid(input - pot.u1());
    case HiddenPotential::Kind::kQuadratic:
      return (input - pot.theta_plus) / pot.gamma_plus;
    case HiddenPotential::Kind::kRelu: {
      const double sg = std::sqrt(pot.gamma_plus);
      return truncated_mean((input - pot.theta_plus) / sg) / sg;
    }
    case HiddenPotential::Kind::kDRelu: {
      const DReluParts d = drelu_parts(pot, input);
      return d.p_plus * d.mean_plus + d.p_minus * d.mean_minus;
    }
  }
  return 0.0;
}

double gamma_d2(const HiddenPotential& pot, double input) {
  require_finite_input(input);
  switch (pot.kind) {
    case HiddenPotential::Kind::kBernoulli: {
      const double m = sigmoid(input - pot.u1());
      return m * (1.0 - m);
    }
    case HiddenPotential::Kind::kQuadratic:
      return 1.0 / pot.gamma_plus;
    case HiddenPotential::Kind::kRelu: {
      const double t = (input - pot.theta_plus) / std::sqrt(pot.gamma_plus);
      return truncated_var(t) / pot.gamma_plus;
    }
    case HiddenPotential::Kind::kDRelu: {
      const DReluParts d = drelu_parts(pot, input);
      const double mean = d.p_plus * d.mean_plus + d.p_minus * d.mean_minus;
      const double second =
          d.p_plus * (d.var_plus + d.mean_plus * d.mean_plus) +
          d.p_minus * (d.var_minus + d.mean_minus * d.mean_minus);
      return second - mean * mean;
    }
  }
  return 0.0;
}

double gamma(const HiddenPotential& pot, double input, int order) {
  switch (order) {
    case 0: return gamma_value(pot, input);
    case 1: return gamma_d1(pot, input);
    case 2: return gamma_d2(pot, input);
    default: throw std::invalid_argument("gamma: order must be 0, 1 or 2");
  }
}

double transfer_mode(const HiddenPotential& pot, double input) {
  switch (pot.kind) {
    case HiddenPotential::Kind::kBernoulli:
      return input > pot.u1() ? 1.0 : 0.0;
    case HiddenPotential::Kind::kQuadratic:
      return (input - pot.theta_plus) / pot.gamma_plus;
    case HiddenPotential::Kind::kRelu:
      return std::max((input - pot.theta_plus) / pot.gamma_plus, 0.0);
    case HiddenPotential::Kind::kDRelu: {
      const double hp = std::max((input - pot.theta_plus) / pot.gamma_plus, 0.0);
      const double hm = std::min((input - pot.theta_minus) / pot.gamma_minus, 0.0);
      // branch values of -U(h) + hI at the two candidate maxima
      const double vp = hp > 0.0 ? 0.5 * (input - pot.theta_plus) * hp : 0.0;
      const double vm = hm < 0.0 ? 0.5 * (input - pot.theta_minus) * hm : 0.0;
      return vp >= vm ? hp : hm;
    }
  }
  return 0.0;
}

double sample_conditional(const HiddenPotential& pot, double input, Rng& rng) {
  require_finite_input(input);
  switch (pot.kind) {
    case HiddenPotential::Kind::kBernoulli:
      return rng.uniform() < sigmoid(input - pot.u1()) ? 1.0 : 0.0;
    case HiddenPotential::Kind::kQuadratic:
      return (input - pot.theta_plus) / pot.gamma_plus +
             rng.normal() / std::sqrt(pot.gamma_plus);
    case HiddenPotential::Kind::kRelu: {
      const double sg = std::sqrt(pot.gamma_plus);
      return truncated_normal_positive(rng, (input - pot.theta_plus) / sg) / sg;
    }
    case HiddenPotential::Kind::kDRelu: {
      const DReluParts d = drelu_parts(pot, input);
      if (rng.uniform() < d.p_plus)
        return truncated_normal_positive(rng, d.t_plus) / std::sqrt(pot.gamma_plus);
      return -truncated_normal_positive(rng, d.t_minus) / std::sqrt(pot.gamma_minus);
    }
  }
  return 0.0;
}

std::array<double, 4> gamma_param_grad(const HiddenPotential& pot, double input) {
  require_finite_input(input);
  std::array<double, 4> g{};
  switch (pot.kind) {
    case HiddenPotential::Kind::kBernoulli:
      // dGamma/du1 = -<h>
      g[0] = -sigmoid(input - pot.u1());
      break;
    case HiddenPotential::Kind::kQuadratic: {
      const double mean = (input - pot.theta_plus) / pot.gamma_plus;
      const double second = 1.0 / pot.gamma_plus + mean * mean;
      g[0] = -0.5 * second;  // dGamma/dgamma = -<h^2>/2
      g[1] = -mean;          // dGamma/dtheta = -<h>
      break;
    }
    case HiddenPotential::Kind::kRelu: {
      const double sg = std::sqrt(pot.gamma_plus);
      const double t = (input - pot.theta_plus) / sg;
      const double mean = truncated_mean(t) / sg;
      const double second = truncated_var(t) / pot.gamma_plus + mean * mean;
      g[0] = -0.5 * second;
      g[1] = -mean;
      break;
    }
    case HiddenPotential::Kind::kDRelu: {
      const DReluParts d = drelu_parts(pot, input);
      const double second_plus = d.var_plus + d.mean_plus * d.mean_plus;
      const double second_minus = d.var_minus + d.mean_minus * d.mean_minus;
      g[0] = -0.5 * d.p_plus * second_plus;    // dGamma/dgamma+ = -<(h+)^2>/2
      g[1] = -0.5 * d.p_minus * second_minus;  // dGamma/dgamma-
      g[2] = -d.p_plus * d.mean_plus;          // dGamma/dtheta+ = -<h+>
      g[3] = -d.p_minus * d.mean_minus;        // dGamma/dtheta-
      break;
    }
  }
  return g;
}

}  // namespace lprbm
