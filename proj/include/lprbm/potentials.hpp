#pragma once

#include <array>
#include <string>

#include "lprbm/rng.hpp"

namespace lprbm {

// Hidden-unit potential U(h). The associated cumulant generating function
//   Gamma(I) = log integral dh exp(-U(h) + h I)
// gives the conditional mean Gamma'(I) = <h|I> and variance Gamma''(I).
struct HiddenPotential {
  enum class Kind { kBernoulli, kQuadratic, kRelu, kDRelu };

  Kind kind = Kind::kQuadratic;
  // dReLU parameters. Quadratic and ReLU read (gamma_plus, theta_plus) as
  // (gamma, theta); Bernoulli keeps u1 in theta_plus.
  double gamma_plus = 1.0;
  double gamma_minus = 1.0;
  double theta_plus = 0.0;
  double theta_minus = 0.0;

  static HiddenPotential bernoulli(double u1);
  static HiddenPotential quadratic(double gamma, double theta);
  static HiddenPotential relu(double gamma, double theta);
  static HiddenPotential drelu(double gamma_plus, double gamma_minus,
                               double theta_plus, double theta_minus);

  double u1() const { return theta_plus; }

  // U(h) itself; +inf outside the support (used by the quadrature oracle)
  double energy(double h) const;

  std::string kind_name() const;
  static Kind kind_from_name(const std::string& name);

  // number of trainable parameters: 1 (bernoulli), 2, 2, 4 (drelu)
  int num_params() const;
};

double gamma_value(const HiddenPotential& pot, double input);
double gamma_d1(const HiddenPotential& pot, double input);  // <h|I>
double gamma_d2(const HiddenPotential& pot, double input);  // Var(h|I)

// order 0, 1 or 2
double gamma(const HiddenPotential& pot, double input, int order);

// argmax_h P(h | I)
double transfer_mode(const HiddenPotential& pot, double input);

// one draw from P(h|I) ~ exp(-U(h) + h I)
double sample_conditional(const HiddenPotential& pot, double input, Rng& rng);

// dGamma/dxi for the potential's parameters, analytic.
// Parameter order: [u1] | [gamma, theta] | [gamma+, gamma-, theta+, theta-].
std::array<double, 4> gamma_param_grad(const HiddenPotential& pot, double input);

}  // namespace lprbm
