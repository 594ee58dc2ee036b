#pragma once

// Per-replicate draws for the simulation oracles. Each draw materializes a
// full data set y_i = beta * x_i + eps_i (no sufficient-statistic shortcut)
// and reduces it to the quantity of interest.

#include <cmath>
#include <random>
#include <span>

#include "mmlab/rng.hpp"

namespace mmlab::kernels {

/// sum_i x_i y_i for one simulated data set.
inline double cross_product(Xoshiro256pp& rng, double beta, std::span<const double> xs) {
  std::normal_distribution<double> noise(0.0, 1.0);
  double s = 0.0;
  for (double x : xs) s += x * (beta * x + noise(rng));
  return s;
}

/// 1 if H1 is selected (statistic >= threshold), else 0.
inline double selection(Xoshiro256pp& rng, double beta, std::span<const double> xs,
                        double threshold) {
  return cross_product(rng, beta, xs) >= threshold ? 1.0 : 0.0;
}

/// Least-squares slope for one simulated data set.
inline double lse(Xoshiro256pp& rng, double beta, std::span<const double> xs, double sxx) {
  return cross_product(rng, beta, xs) / sxx;
}

/// (beta - beta_hat * 1{A_n})^2, without the s* factor.
inline double selection_loss(Xoshiro256pp& rng, double beta, std::span<const double> xs,
                             double sxx, double threshold) {
  const double s = cross_product(rng, beta, xs);
  const double estimate = s >= threshold ? s / sxx : 0.0;
  const double err = beta - estimate;
  return err * err;
}

/// log dP_{n,beta}/dP_{n,0} evaluated on data drawn under the null.
inline double null_log_likelihood_ratio(Xoshiro256pp& rng, double beta,
                                        std::span<const double> xs, double sxx) {
  const double s = cross_product(rng, 0.0, xs);
  return beta * s - 0.5 * beta * beta * sxx;
}

}  // namespace mmlab::kernels
