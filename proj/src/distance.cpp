#include "mmlab/distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mmlab/detail/overloaded.hpp"
#include "mmlab/error.hpp"
#include "mmlab/gauss.hpp"
#include "mmlab/selector.hpp"

namespace mmlab {

using detail::overloaded;

namespace {

constexpr double kChainSlack = 1e-9;

// beta^2 sxx / 8 without forming a possibly overflowing product first.
double affinity_exponent(const GaussianShiftPair& p) {
  const double delta = p.shift();
  return 0.125 * delta * delta;
}

}  // namespace

GaussianShiftPair::GaussianShiftPair(double beta, double sxx) : beta(beta), sxx(sxx) {
  require(std::isfinite(beta) && beta >= 0.0, "beta must be finite and >= 0");
  require(std::isfinite(sxx) && sxx > 0.0, "sxx must be finite and > 0");
}

double GaussianShiftPair::shift() const { return beta * std::sqrt(sxx); }

std::string_view to_string(SeparationClass c) {
  switch (c) {
    case SeparationClass::Strong: return "STRONG";
    case SeparationClass::Weak: return "WEAK";
    case SeparationClass::Well: return "WELL";
  }
  return "?";
}

double hellinger_affinity(const GaussianShiftPair& pair) {
  return std::exp(-affinity_exponent(pair));
}

double hellinger_distance_sq(const GaussianShiftPair& pair) {
  return -2.0 * std::expm1(-affinity_exponent(pair));
}

double l1_distance(const GaussianShiftPair& pair) {
  // 2 (2 Phi(d/2) - 1) = 2 erf(d / (2 sqrt 2)); erf keeps accuracy near 0.
  return 2.0 * std::erf(pair.shift() / (2.0 * std::sqrt(2.0)));
}

bool check_inequality_chain(const GaussianShiftPair& pair) {
  const double a = hellinger_affinity(pair);
  const double h2 = hellinger_distance_sq(pair);
  const double l1 = l1_distance(pair);
  const double upper = std::min(2.0 - a * a, 2.0 * std::sqrt(h2));
  return h2 <= l1 + kChainSlack && l1 <= upper + kChainSlack;
}

double lemma1_gap(const GaussianShiftPair& pair, double threshold) {
  require(!std::isnan(threshold), "threshold must not be NaN");
  if (std::isinf(threshold)) return 0.0;
  const double delta = pair.shift();
  // Phi(t) - Phi(t - delta); use upper tails right of the midpoint so the
  // difference never comes from two numbers close to 1.
  if (threshold > 0.5 * delta) {
    return detail::sf(threshold - delta) - detail::sf(threshold);
  }
  return detail::cdf(threshold) - detail::cdf(threshold - delta);
}

SeparationClass classify_separation(const AlternativeSequence& seq, const DesignSpec& design) {
  seq.validate();
  design.validate();
  // c_n = beta_n sqrt(kappa n); kappa is a positive constant and never
  // changes the limit class.
  if (seq.threshold_linked()) {
    // c_n = multiplier * d_n / sqrt(sxx) with multiplier in {b, 1, 1 + b'} > 0.
    const auto& cal = *seq.calibration;
    if (const auto* fixed = std::get_if<FixedLevel>(&cal.family); fixed && fixed->alpha >= 0.5) {
      throw Error(ErrorCode::Unclassifiable,
                  "fixed-level calibration with alpha >= 1/2 gives d_n <= 0; beta_n is not a "
                  "positive local alternative");
    }
    switch (standardized_threshold_growth(cal)) {
      case Growth::Unbounded: return SeparationClass::Strong;
      case Growth::Bounded: return SeparationClass::Well;
      case Growth::Vanishing: return SeparationClass::Weak;
    }
  }
  return std::visit(
      overloaded{
          [](const Contiguous&) { return SeparationClass::Well; },
          [](const GenericRootN& g) {
            if (g.form == GenericRootN::Form::Constant) return SeparationClass::Well;
            return g.exponent > 0.0 ? SeparationClass::Strong : SeparationClass::Weak;
          },
          [](const auto&) -> SeparationClass {
            throw Error(ErrorCode::Unclassifiable, "unhandled sequence family");
          },
      },
      seq.family);
}

}  // namespace mmlab
