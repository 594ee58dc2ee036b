#pragma once

// Distances between the n-sample null law P_{n,0} and the alternative
// P_{n,beta}. Everything reduces to the univariate shift
// delta = beta * sqrt(sum x^2) of the sufficient statistic sum x_i y_i.

#include <string_view>

#include "mmlab/model.hpp"

namespace mmlab {

struct GaussianShiftPair {
  double beta = 0.0;  // slope under H1, >= 0
  double sxx = 1.0;   // sum x_i^2, > 0

  GaussianShiftPair() = default;
  GaussianShiftPair(double beta, double sxx);

  double shift() const;  // delta
};

enum class SeparationClass { Strong, Weak, Well };

std::string_view to_string(SeparationClass c);

/// A = exp(-beta^2 sxx / 8).
double hellinger_affinity(const GaussianShiftPair& pair);

/// H^2 = 2 - 2A.
double hellinger_distance_sq(const GaussianShiftPair& pair);

/// ||P - Q|| = 2 (2 Phi(delta / 2) - 1).
double l1_distance(const GaussianShiftPair& pair);

/// H^2 <= L1 <= min(2 - A^2, 2H), each with slack 1e-9.
bool check_inequality_chain(const GaussianShiftPair& pair);

/// pi(beta) - pi(0) for the test rejecting when the standardized statistic
/// exceeds `threshold`. Maximal (= L1 / 2) at threshold = delta / 2, the
/// likelihood-ratio midpoint.
double lemma1_gap(const GaussianShiftPair& pair, double threshold);

/// Symbolic classification of c_n = beta_n sqrt(sum x^2): Strong iff
/// c_n -> infinity, Weak iff c_n -> 0, Well otherwise. Throws
/// ErrorCode::Unclassifiable when the parameters do not define a positive
/// local alternative.
SeparationClass classify_separation(const AlternativeSequence& seq, const DesignSpec& design);

}  // namespace mmlab
