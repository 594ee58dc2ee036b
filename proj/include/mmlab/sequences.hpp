#pragma once

// Named local-alternative sequences beta_n and their behavior under a
// threshold selector: power and scaled-bias series, confusion margins, and
// contiguity through the Gaussian log-likelihood ratio.

#include <optional>
#include <span>
#include <vector>

#include "mmlab/model.hpp"
#include "mmlab/replicates.hpp"

namespace mmlab {

struct SeriesPoint {
  SampleSize n = 0;
  double value = 0.0;
};

using Series = std::vector<SeriesPoint>;

/// Distribution of log dP_{n,beta_n}/dP_{n,0} under P_{n,0}: N(mean, variance)
/// with mean = -variance / 2.
struct LLRParams {
  double mean = 0.0;
  double variance = 0.0;
};

struct ConfusionMargin {
  bool holds = false;
  /// (1 - b) d_n / sqrt(sxx) for Yang/Boundary, b' d_n / sqrt(sxx) for
  /// Perfect: the largest M for which the margin holds at this n.
  double capacity = 0.0;
  /// Smallest n >= 2 from which the margin holds for every larger n;
  /// absent when it never holds. Integer-valued; may exceed 2^53, in which
  /// case it is the closed-form value without adjacency correction.
  std::optional<double> minimal_n;
};

double beta_at(const AlternativeSequence& seq, SampleSize n, const DesignSpec& design);

/// c_n = beta_n sqrt(sum x^2).
double separation_scale(const AlternativeSequence& seq, SampleSize n, const DesignSpec& design);

/// Selector power pi_n(beta_n) over a grid of n.
Series power_along(const AlternativeSequence& seq, const SelectorCalibration& cal,
                   const DesignSpec& design, std::span<const SampleSize> n_grid);

/// n beta_n^2 P_{beta_n}(A_n^c) over a grid of n.
Series scaled_bias_along(const AlternativeSequence& seq, const SelectorCalibration& cal,
                         const DesignSpec& design, std::span<const SampleSize> n_grid);

/// Yang/Boundary: beta_n sxx + M sqrt(sxx) < d_n. Perfect:
/// beta_n sxx - M sqrt(sxx) > d_n. Other families throw
/// ErrorCode::NotApplicable. `cal` must be the calibration the sequence is
/// built on.
ConfusionMargin confusion_margin(const AlternativeSequence& seq, const SelectorCalibration& cal,
                                 const DesignSpec& design, SampleSize n, double margin);

bool confusion_margin_holds(const AlternativeSequence& seq, const SelectorCalibration& cal,
                            const DesignSpec& design, SampleSize n, double margin);

LLRParams llr_params(const AlternativeSequence& seq, SampleSize n, const DesignSpec& design);

/// Same for a single slope value (beta = 0 gives the degenerate (0, 0)).
LLRParams llr_params_at(double beta, SampleSize n, const DesignSpec& design);

/// P_{n,beta_n} is contiguous w.r.t. P_{n,0} iff sup_n n beta_n^2 < infinity.
bool is_contiguous(const AlternativeSequence& seq, const DesignSpec& design);

/// Sample moments of the simulated log-likelihood ratio under the null.
SampleMoments mc_llr_check(const AlternativeSequence& seq, SampleSize n,
                           const DesignSpec& design, const McOptions& mc);

SampleMoments mc_llr_check_at(double beta, SampleSize n, const DesignSpec& design,
                              const McOptions& mc);

}  // namespace mmlab
