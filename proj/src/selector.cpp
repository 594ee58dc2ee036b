#include "mmlab/selector.hpp"

#include <cmath>
#include <limits>

#include "mmlab/detail/overloaded.hpp"
#include "mmlab/error.hpp"
#include "mmlab/kernels.hpp"

namespace mmlab {

using detail::overloaded;

double standardized_threshold(const SelectorCalibration& cal, SampleSize n) {
  require(n >= 2, "threshold requires n >= 2");
  cal.validate();
  const double nd = static_cast<double>(n);
  return std::visit(
      overloaded{
          [&](const ConsistentLog& c) { return std::sqrt(c.tau * std::log(nd)); },
          [&](const FixedLevel& c) { return -std_normal_quantile(Probability(c.alpha)).value(); },
          [&](const CustomPower& c) { return std::pow(nd, c.gamma); },
      },
      cal.family);
}

Growth standardized_threshold_growth(const SelectorCalibration& cal) {
  cal.validate();
  return std::visit(overloaded{
                        [](const ConsistentLog&) { return Growth::Unbounded; },
                        [](const CustomPower&) { return Growth::Unbounded; },
                        [](const FixedLevel& c) {
                          return c.alpha == 0.5 ? Growth::Vanishing : Growth::Bounded;
                        },
                    },
                    cal.family);
}

double threshold(const SelectorCalibration& cal, SampleSize n, const DesignSpec& design) {
  return std::sqrt(sum_sq(design, n)) * standardized_threshold(cal, n);
}

Probability power_at_threshold(double beta, double sxx, double d_n) {
  require(std::isfinite(beta) && beta >= 0.0, "beta must be finite and >= 0");
  require(sxx > 0.0, "sum of squared regressors must be > 0");
  require(!std::isnan(d_n), "threshold must not be NaN");
  const double root = std::sqrt(sxx);
  const double standardized = (d_n - beta * sxx) / root;
  return std_normal_sf(ZScore(standardized));
}

Probability power(double beta, SampleSize n, const SelectorCalibration& cal,
                  const DesignSpec& design) {
  return power_at_threshold(beta, sum_sq(design, n), threshold(cal, n, design));
}

bool is_consistent(const SelectorCalibration& cal) {
  // Every family here has d_n / sxx -> 0 (the standardized threshold grows
  // slower than sqrt(n)), so consistency reduces to unbounded growth.
  return standardized_threshold_growth(cal) == Growth::Unbounded;
}

SelectionOutcome select(std::span<const double> ys, std::span<const double> xs, double d_n) {
  require(ys.size() == xs.size(), "select: ys and xs must have equal length");
  require(!ys.empty(), "select: need at least one observation");
  SelectionOutcome out;
  for (std::size_t i = 0; i < ys.size(); ++i) out.statistic += xs[i] * ys[i];
  out.threshold = d_n;
  out.chose_h1 = out.statistic >= d_n;
  return out;
}

Probability simulate_selection_prob_at_threshold(double beta, SampleSize n, double d_n,
                                                 const DesignSpec& design, const McOptions& mc) {
  require(mc.replicates >= 1, "replicates must be >= 1");
  require(std::isfinite(beta) && beta >= 0.0, "beta must be finite and >= 0");
  require(!std::isnan(d_n), "threshold must not be NaN");
  const auto xs = regressors(design, n);
  const auto hits = run_replicates(
      mc, [&](Xoshiro256pp& rng) { return kernels::selection(rng, beta, xs, d_n); });
  return Probability(moments(hits).mean);
}

Probability simulate_selection_prob(double beta, SampleSize n, const SelectorCalibration& cal,
                                    const DesignSpec& design, const McOptions& mc) {
  return simulate_selection_prob_at_threshold(beta, n, threshold(cal, n, design), design, mc);
}

}  // namespace mmlab
