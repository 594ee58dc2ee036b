#pragma once

// Predictive risk of the post-model-selection estimator beta_hat * 1{A_n}:
//
//   R_m(beta, A_n) = s* [ E{(beta - beta_hat)^2 1(A_n)} + beta^2 P(A_n^c) ]
//
// With v = 1/sxx and t = (d_n - beta sxx)/sqrt(sxx) the standardized
// threshold, beta_hat - beta = Z sqrt(v) and A_n = {Z >= t}, so the first
// term is v * E[Z^2 1{Z >= t}] and the acceptance probability is Phi(t).

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mmlab/model.hpp"
#include "mmlab/replicates.hpp"

namespace mmlab {

enum class RiskMethod { Exact, MonteCarlo };

struct RiskReport {
  SampleSize n = 0;
  double beta = 0.0;
  double term_estimation = 0.0;  // E{(beta - beta_hat)^2 1(A_n)}
  double term_bias = 0.0;        // beta^2 P(A_n^c)
  double risk = 0.0;             // s* (term_estimation + term_bias)
  double scaled_risk = 0.0;      // n * risk
  double accept_prob = 0.0;      // P(A_n^c)
  RiskMethod method = RiskMethod::Exact;
  std::optional<double> mc_std_error;  // of `risk`
};

/// Least-squares slope sum x y / sum x^2. Rejects an all-zero design.
double lse(std::span<const double> ys, std::span<const double> xs);

RiskReport exact_risk(double beta, SampleSize n, const SelectorCalibration& cal,
                      const DesignSpec& design);

/// Exact risk for an explicit threshold (+infinity allowed: never select H1).
RiskReport exact_risk_at_threshold(double beta, SampleSize n, double d_n,
                                   const DesignSpec& design);

/// Simulation oracle; mc.replicates >= 2.
RiskReport mc_risk(double beta, SampleSize n, const SelectorCalibration& cal,
                   const DesignSpec& design, const McOptions& mc);

RiskReport mc_risk_at_threshold(double beta, SampleSize n, double d_n, const DesignSpec& design,
                                const McOptions& mc);

/// Sample moments of beta_hat over simulated data sets (unselected).
SampleMoments mc_lse_moments(double beta, SampleSize n, const DesignSpec& design,
                             const McOptions& mc);

/// The beta grid for a supremum scan. Either an explicit point list or a
/// structured grid: {0}, a geometric grid on [beta_max 10^-decades, beta_max],
/// and the points b d_n/sxx for b in {1/4, 1/2, 3/4, 1, 3/2, 2}.
struct BetaGrid {
  enum class Kind { Explicit, Structured };

  Kind kind = Kind::Structured;
  std::vector<double> points;  // Explicit only
  double beta_max = 0.0;       // Structured; <= 0 picks (d_n + 8 sqrt(sxx)) / sxx
  int geometric_points = 200;
  double decades = 4.0;

  static BetaGrid explicit_points(std::vector<double> points);
  static BetaGrid structured(double beta_max = 0.0, int geometric_points = 200,
                             double decades = 4.0);

  std::string describe() const;
};

/// Structural multipliers b of d_n / sxx always included in structured grids.
inline constexpr double kStructuralMultipliers[] = {0.25, 0.5, 0.75, 1.0, 1.5, 2.0};

/// Sorted, de-duplicated beta values the scan will evaluate.
std::vector<double> materialize(const BetaGrid& grid, SampleSize n,
                                const SelectorCalibration& cal, const DesignSpec& design);

struct SupScanResult {
  SampleSize n = 0;
  double sup_scaled_risk = 0.0;
  double argmax_beta = 0.0;
  std::size_t grid_size = 0;
  std::string grid_spec;
};

/// max over the grid of n * exact_risk. Grid points are evaluated
/// independently (OpenMP) and reduced in index order.
SupScanResult scaled_risk_sup(SampleSize n, const SelectorCalibration& cal,
                              const DesignSpec& design, const BetaGrid& grid,
                              Execution execution = Execution::Parallel);

}  // namespace mmlab
