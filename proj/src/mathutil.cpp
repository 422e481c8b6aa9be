#include "lprbm/mathutil.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lprbm {

double erfcx_positive(double x) {
  if (x < 0.0) throw std::domain_error("erfcx_positive: negative argument");
  if (x < 25.0) {
    // erfc(x) stays normal down to ~1e-274 here, the product is accurate
    return std::exp(x * x) * std::erfc(x);
  }
  // asymptotic series: erfcx(x) ~ 1/(x sqrt(pi)) * sum_k (-1)^k (2k-1)!! / (2x^2)^k
  const double inv2x2 = 1.0 / (2.0 * x * x);
  double term = 1.0, sum = 1.0;
  for (int k = 1; k <= 6; ++k) {
    term *= -(2.0 * k - 1.0) * inv2x2;
    sum += term;
  }
  return sum / (x * 1.7724538509055160273);  // sqrt(pi)
}

double log_truncated_gauss_z(double t) {
  if (!std::isfinite(t)) throw std::domain_error("log_truncated_gauss_z: non-finite input");
  if (t >= 0.0) {
    // Phi(t) in [0.5, 1], direct evaluation is exact enough
    const double phi = 1.0 - 0.5 * std::erfc(t / std::sqrt(2.0));
    return 0.5 * t * t + kLogSqrt2Pi + std::log(phi);
  }
  // sqrt(2*pi) Phi(t) e^{t^2/2} = sqrt(pi/2) erfcx(-t/sqrt(2))
  return std::log(std::sqrt(M_PI / 2.0) * erfcx_positive(-t / std::sqrt(2.0)));
}

double inv_mills(double t) {
  // phi(t)/Phi(t)
  if (t >= -1.0) {
    const double phi = 0.5 * std::erfc(-t / std::sqrt(2.0));
    const double dens = std::exp(-0.5 * t * t - kLogSqrt2Pi);
    return dens / phi;
  }
  // phi(t)/Phi(t) = sqrt(2/pi) / erfcx(-t/sqrt(2))
  return std::sqrt(2.0 / M_PI) / erfcx_positive(-t / std::sqrt(2.0));
}

double logsumexp(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("logsumexp: empty input");
  double mx = xs[0];
  for (double x : xs) mx = std::max(mx, x);
  if (!std::isfinite(mx)) return mx;  // all -inf, or a +inf dominates
  double s = 0.0;
  for (double x : xs) s += std::exp(x - mx);
  return mx + std::log(s);
}

void fast_exp_neg_batch(const float* x, float* out, int n) {
  for (int i = 0; i < n; ++i) out[i] = fast_exp_neg(x[i]);
}

}  // namespace lprbm
