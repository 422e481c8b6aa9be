#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <span>

namespace lprbm {

inline constexpr double kLogSqrt2Pi = 0.91893853320467274178;  // log sqrt(2*pi)

// exp(x^2) * erfc(x) for x >= 0, stable up to very large x.
double erfcx_positive(double x);

// log( integral_0^inf exp(-u^2/2 + t*u) du )  =  t^2/2 + log( sqrt(2*pi) * Phi(t) ).
// Partition function of a half-axis Gaussian piece; stable for all t.
double log_truncated_gauss_z(double t);

// phi(t) / Phi(t): mean offset of a standard normal truncated to u > 0
// when the pre-truncation mean is t.  E[u | u>0] = t + inv_mills(t).
double inv_mills(double t);

// mean and variance of u ~ N(t,1) | u > 0
inline double truncated_mean(double t) { return t + inv_mills(t); }
inline double truncated_var(double t) {
  const double r = inv_mills(t);
  return 1.0 - t * r - r * r;
}

double logsumexp(std::span<const double> xs);

// log(1 + exp(x)) without overflow
inline double log1pexp(double x) {
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

inline double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// Approximate exp(-x) for x >= 0 in single precision (relative error ~1e-6),
// written branch-free so the compiler can vectorize the batch loop.
// Used only inside Monte-Carlo proposal kernels; exact scoring paths use exp().
inline float fast_exp_neg(float x) {
  // clamp: exp(-87) underflows float anyway
  x = x > 87.0f ? 87.0f : x;
  const float t = -x * 1.44269504088896341f;  // -x * log2(e)
  const float fn = t >= 0.0f ? static_cast<float>(static_cast<int>(t + 0.5f))
                             : static_cast<float>(static_cast<int>(t - 0.5f));
  const float f = t - fn;  // f in [-0.5, 0.5]
  // 2^f on [-0.5,0.5], minimax-ish polynomial
  float p = 1.3534550e-3f;
  p = p * f + 9.6178371e-3f;
  p = p * f + 5.5504070e-2f;
  p = p * f + 2.4022652e-1f;
  p = p * f + 6.9314718e-1f;
  p = p * f + 1.0f;
  // scale by 2^fn via exponent bits
  const std::int32_t e = static_cast<std::int32_t>(fn) + 127;
  const std::int32_t bits = e << 23;
  float scale;
  std::memcpy(&scale, &bits, sizeof scale);
  return p * scale;
}

void fast_exp_neg_batch(const float* x, float* out, int n);

}  // namespace lprbm
