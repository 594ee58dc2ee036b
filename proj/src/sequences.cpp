#include "mmlab/sequences.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mmlab/detail/overloaded.hpp"
#include "mmlab/distance.hpp"
#include "mmlab/error.hpp"
#include "mmlab/gauss.hpp"
#include "mmlab/kernels.hpp"
#include "mmlab/selector.hpp"

namespace mmlab {

using detail::overloaded;

namespace {

// beta_n = multiplier * d_n / sxx for the threshold-linked families.
double threshold_multiplier(const AlternativeSequence& seq) {
  return std::visit(overloaded{
                        [](const Yang& s) { return s.b; },
                        [](const Boundary&) { return 1.0; },
                        [](const Perfect& s) { return 1.0 + s.bprime; },
                        [](const auto&) { return std::numeric_limits<double>::quiet_NaN(); },
                    },
                    seq.family);
}

// Largest margin M the sequence leaves between its mean statistic and d_n,
// per unit of sqrt(sxx): 1 - b (Yang), 0 (Boundary), b' (Perfect).
double margin_factor(const AlternativeSequence& seq) {
  return std::visit(
      overloaded{
          [](const Yang& s) { return 1.0 - s.b; },
          [](const Boundary&) { return 0.0; },
          [](const Perfect& s) { return s.bprime; },
          [](const auto&) -> double {
            throw Error(ErrorCode::NotApplicable,
                        "confusion margin is defined only for Yang, Boundary and Perfect sequences");
          },
      },
      seq.family);
}

constexpr double kExactIntegerLimit = 9007199254740992.0;  // 2^53

}  // namespace

double beta_at(const AlternativeSequence& seq, SampleSize n, const DesignSpec& design) {
  require(n >= 2, "beta_at requires n >= 2");
  seq.validate();
  design.validate();
  const double nd = static_cast<double>(n);
  if (seq.threshold_linked()) {
    const double d_n = threshold(*seq.calibration, n, design);
    require(d_n > 0.0, "threshold-linked sequence needs d_n > 0 (fixed level requires alpha < 1/2)");
    return threshold_multiplier(seq) * d_n / sum_sq(design, n);
  }
  return std::visit(overloaded{
                        [&](const Contiguous& s) { return s.r / std::sqrt(nd); },
                        [&](const GenericRootN& s) {
                          const double c = s.form == GenericRootN::Form::Power
                                               ? s.coef * std::pow(nd, s.exponent)
                                               : s.coef;
                          return c / std::sqrt(nd);
                        },
                        [](const auto&) -> double { fail("unhandled sequence family"); },
                    },
                    seq.family);
}

double separation_scale(const AlternativeSequence& seq, SampleSize n, const DesignSpec& design) {
  return beta_at(seq, n, design) * std::sqrt(sum_sq(design, n));
}

Series power_along(const AlternativeSequence& seq, const SelectorCalibration& cal,
                   const DesignSpec& design, std::span<const SampleSize> n_grid) {
  require(!n_grid.empty(), "n grid must not be empty");
  Series out;
  out.reserve(n_grid.size());
  for (SampleSize n : n_grid) {
    out.push_back({n, power(beta_at(seq, n, design), n, cal, design).value()});
  }
  return out;
}

Series scaled_bias_along(const AlternativeSequence& seq, const SelectorCalibration& cal,
                         const DesignSpec& design, std::span<const SampleSize> n_grid) {
  require(!n_grid.empty(), "n grid must not be empty");
  Series out;
  out.reserve(n_grid.size());
  for (SampleSize n : n_grid) {
    const double beta = beta_at(seq, n, design);
    const double sxx = sum_sq(design, n);
    const double t = (threshold(cal, n, design) - beta * sxx) / std::sqrt(sxx);
    out.push_back({n, static_cast<double>(n) * beta * beta * detail::cdf(t)});
  }
  return out;
}

ConfusionMargin confusion_margin(const AlternativeSequence& seq, const SelectorCalibration& cal,
                                 const DesignSpec& design, SampleSize n, double margin) {
  require(std::isfinite(margin) && margin > 0.0, "margin M must be finite and > 0");
  const double factor = margin_factor(seq);
  seq.validate();
  require(*seq.calibration == cal,
          "confusion margin needs the calibration the sequence is built on");

  // Direct form of the inequality at a given n.
  const auto holds_at = [&](SampleSize m) {
    const double sxx = sum_sq(design, m);
    const double root = std::sqrt(sxx);
    const double d_n = threshold(cal, m, design);
    const double stat_mean = beta_at(seq, m, design) * sxx;
    if (std::holds_alternative<Perfect>(seq.family)) return stat_mean - margin * root > d_n;
    return stat_mean + margin * root < d_n;
  };

  ConfusionMargin out;
  out.capacity = factor * standardized_threshold(cal, n);
  out.holds = holds_at(n);

  // Closed-form inversion of factor * d_n / sqrt(sxx) > M.
  if (factor <= 0.0) return out;
  const double ratio = margin / factor;
  double n_star = std::visit(
      overloaded{
          [&](const ConsistentLog& c) {
            const double bound = std::exp(ratio * ratio / c.tau);
            return std::isfinite(bound) ? std::floor(bound) + 1.0
                                        : std::numeric_limits<double>::infinity();
          },
          [&](const CustomPower& c) {
            const double bound = std::pow(ratio, 1.0 / c.gamma);
            return std::isfinite(bound) ? std::floor(bound) + 1.0
                                        : std::numeric_limits<double>::infinity();
          },
          [&](const FixedLevel&) {
            return margin < factor * standardized_threshold(cal, 2)
                       ? 2.0
                       : std::numeric_limits<double>::infinity();
          },
      },
      cal.family);
  if (std::isinf(n_star)) return out;
  n_star = std::max(n_star, 2.0);

  if (n_star < kExactIntegerLimit / 2) {
    // Align the rounded closed form with the direct inequality.
    auto m = static_cast<SampleSize>(n_star);
    while (m > 2 && holds_at(m - 1)) --m;
    while (!holds_at(m)) ++m;
    n_star = static_cast<double>(m);
  }
  out.minimal_n = n_star;
  return out;
}

bool confusion_margin_holds(const AlternativeSequence& seq, const SelectorCalibration& cal,
                            const DesignSpec& design, SampleSize n, double margin) {
  return confusion_margin(seq, cal, design, n, margin).holds;
}

LLRParams llr_params(const AlternativeSequence& seq, SampleSize n, const DesignSpec& design) {
  return llr_params_at(beta_at(seq, n, design), n, design);
}

LLRParams llr_params_at(double beta, SampleSize n, const DesignSpec& design) {
  require(n >= 2, "llr_params requires n >= 2");
  require(std::isfinite(beta) && beta >= 0.0, "beta must be finite and >= 0");
  const double c = beta * std::sqrt(sum_sq(design, n));
  LLRParams p;
  p.variance = c * c;
  p.mean = -0.5 * p.variance;
  return p;
}

bool is_contiguous(const AlternativeSequence& seq, const DesignSpec& design) {
  // sum x^2 = kappa n, so n beta_n^2 is bounded iff c_n is.
  return classify_separation(seq, design) != SeparationClass::Strong;
}

SampleMoments mc_llr_check(const AlternativeSequence& seq, SampleSize n,
                           const DesignSpec& design, const McOptions& mc) {
  return mc_llr_check_at(beta_at(seq, n, design), n, design, mc);
}

SampleMoments mc_llr_check_at(double beta, SampleSize n, const DesignSpec& design,
                              const McOptions& mc) {
  require(mc.replicates >= 2, "mc_llr_check requires at least 2 replicates");
  require(std::isfinite(beta) && beta >= 0.0, "beta must be finite and >= 0");
  const auto xs = regressors(design, n);
  const double sxx = sum_sq(design, n);
  const auto llr = run_replicates(mc, [&](Xoshiro256pp& rng) {
    return kernels::null_log_likelihood_ratio(rng, beta, xs, sxx);
  });
  return moments(llr);
}

}  // namespace mmlab
