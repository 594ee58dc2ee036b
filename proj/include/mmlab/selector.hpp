#pragma once

// Threshold model selectors A_n = {sum x_i y_i >= d_n}.

#include <span>

#include "mmlab/gauss.hpp"
#include "mmlab/model.hpp"
#include "mmlab/replicates.hpp"

namespace mmlab {

/// Asymptotic behavior of d_n / sqrt(sum x^2) as n grows.
enum class Growth { Vanishing, Bounded, Unbounded };

struct SelectionOutcome {
  bool chose_h1 = false;
  double statistic = 0.0;  // sum x_i y_i
  double threshold = 0.0;  // d_n
};

/// d_n / sqrt(sum x^2); depends only on the calibration and n.
double standardized_threshold(const SelectorCalibration& cal, SampleSize n);

/// Symbolic growth of standardized_threshold(cal, n).
Growth standardized_threshold_growth(const SelectorCalibration& cal);

/// d_n. Requires n >= 2.
double threshold(const SelectorCalibration& cal, SampleSize n, const DesignSpec& design);

/// pi_n(beta) = 1 - Phi((d_n - beta * sxx) / sqrt(sxx)).
Probability power(double beta, SampleSize n, const SelectorCalibration& cal,
                  const DesignSpec& design);

/// Same, for an explicit threshold (which may be +infinity).
Probability power_at_threshold(double beta, double sxx, double d_n);

/// True iff d_n/sqrt(sxx) -> infinity and d_n/sxx -> 0, i.e. size -> 0 and
/// power at every fixed beta > 0 -> 1.
bool is_consistent(const SelectorCalibration& cal);

/// Realizes A_n on data. Ties select H1.
SelectionOutcome select(std::span<const double> ys, std::span<const double> xs, double d_n);

/// Empirical P_beta(A_n) from simulated data sets.
Probability simulate_selection_prob(double beta, SampleSize n, const SelectorCalibration& cal,
                                    const DesignSpec& design, const McOptions& mc);

Probability simulate_selection_prob_at_threshold(double beta, SampleSize n, double d_n,
                                                 const DesignSpec& design, const McOptions& mc);

}  // namespace mmlab
