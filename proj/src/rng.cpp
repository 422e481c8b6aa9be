#include "lprbm/rng.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace lprbm {

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  have_spare_ = true;
  return u * f;
}

double Rng::exponential() {
  double u;
  do {
    u = uniform();
  } while (u <= 0.0);
  return -std::log(u);
}

int Rng::categorical_from_logits(std::span<const double> logits) {
  const int n = static_cast<int>(logits.size());
  if (n == 0) throw std::invalid_argument("categorical: empty logits");
  double mx = logits[0];
  for (int k = 1; k < n; ++k) mx = std::max(mx, logits[k]);
  double total = 0.0;
  for (int k = 0; k < n; ++k) total += std::exp(logits[k] - mx);
  const double u = uniform() * total;
  double cum = 0.0;
  for (int k = 0; k < n; ++k) {
    cum += std::exp(logits[k] - mx);
    if (u < cum) return k;
  }
  return n - 1;  // roundoff fallthrough
}

double truncated_normal_positive(Rng& rng, double mu) {
  // constraint u > 0, i.e. standardized tail cut at a = -mu
  const double a = -mu;
  if (a <= 0.5) {
    // acceptance >= Phi(-0.5) ~ 0.31
    for (;;) {
      const double x = rng.normal();
      if (x > a) return mu + x;
    }
  }
  // Robert (1995): shifted exponential proposal on [a, inf)
  const double alpha = 0.5 * (a + std::sqrt(a * a + 4.0));
  for (;;) {
    const double x = a + rng.exponential() / alpha;
    const double d = x - alpha;
    if (rng.uniform() <= std::exp(-0.5 * d * d)) return mu + x;
  }
}

}  // namespace lprbm
