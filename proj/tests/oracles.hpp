#pragma once

// Test-side oracles, independent of the simulation paths they check:
// quadrature for Gaussian expectations, exhaustive enumeration for the
// intercept-resend error rate, and seeded generators for property tests.

#include <cmath>
#include <functional>
#include <random>

#include "sptq/qkd.hpp"
#include "sptq/state.hpp"

namespace oracles {

/// E[f(x)] for x ~ Normal(0, sigma^2), by Simpson quadrature over +-12 sigma.
inline double gaussian_expect(const std::function<double(double)>& f, double sigma) {
  if (sigma == 0.0) return f(0.0);
  const int n = 40000;  // even
  const double lo = -12.0 * sigma, hi = 12.0 * sigma;
  const double h = (hi - lo) / n;
  const double inv = 1.0 / (sigma * std::sqrt(2.0 * M_PI));
  auto g = [&](double x) { return f(x) * inv * std::exp(-0.5 * x * x / (sigma * sigma)); };
  double acc = g(lo) + g(hi);
  for (int i = 1; i < n; ++i) acc += g(lo + i * h) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

/// Half-width of the 4-sigma binomial band for a frequency estimate.
inline double binom_band(double p, double n) {
  return 4.0 * std::sqrt(std::max(p * (1.0 - p), 0.0) / n);
}

inline sptq::PhotonState random_state(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::array<sptq::Complex, 4> amp;
  for (auto& a : amp) a = sptq::Complex{g(rng), g(rng)};
  return sptq::normalized_state(amp);
}

struct EveOracle {
  double expected_qber = 0.0;    // per sifted bit
  double var_bit_errors = 0.0;   // of the per-round 2-bit error count
  double sift_prob = 0.0;
};

/// Exhaustive enumeration over (sender basis/symbol, Eve basis/outcome,
/// receiver outcome) with exact Born probabilities; receiver basis equals the
/// sender basis (the sifted branch), all detectors ideal.
inline EveOracle eve_enumeration_oracle() {
  using sptq::Basis;
  double sift = 0.0, ex = 0.0, ex2 = 0.0;
  for (int sb = 0; sb < 2; ++sb)
    for (int ss = 0; ss < 4; ++ss) {
      const auto sent = sptq::qkd_state(static_cast<Basis>(sb), ss);
      for (int eb = 0; eb < 2; ++eb)
        for (int eo = 0; eo < 4; ++eo) {
          const auto eve_proj = sptq::qkd_state(static_cast<Basis>(eb), eo);
          const double p_eve = sptq::fidelity(eve_proj, sent);
          if (p_eve < 1e-15) continue;
          for (int bo = 0; bo < 4; ++bo) {
            const double p_bob =
                sptq::fidelity(sptq::qkd_state(static_cast<Basis>(sb), bo), eve_proj);
            if (p_bob < 1e-15) continue;
            // sender 1/8, eve basis 1/2, receiver-matches-sender 1/2
            const double prob = (1.0 / 8.0) * 0.5 * p_eve * 0.5 * p_bob;
            const int x = std::popcount(static_cast<unsigned>(ss ^ bo));
            sift += prob;
            ex += prob * x;
            ex2 += prob * x * x;
          }
        }
    }
  EveOracle o;
  o.sift_prob = sift;
  const double mean_x = ex / sift;
  o.expected_qber = mean_x / 2.0;
  o.var_bit_errors = ex2 / sift - mean_x * mean_x;
  return o;
}

}  // namespace oracles
