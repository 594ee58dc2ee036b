#include "mmlab/gauss.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mmlab/error.hpp"

namespace mmlab {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

// Solves sf(z) = q for q in (0, 0.5], i.e. z >= 0. Newton steps on the upper
// tail, safeguarded by the bracket [0, 40] (sf(40) underflows to 0).
double upper_tail_root(double q) {
  double lo = 0.0;
  double hi = 40.0;
  double z = std::sqrt(-2.0 * std::log(q));
  if (!(z > lo && z < hi)) z = 0.5 * (lo + hi);

  for (int iter = 0; iter < 200; ++iter) {
    const double f = detail::sf(z) - q;  // decreasing in z
    if (f == 0.0) return z;
    if (f > 0.0) lo = z; else hi = z;

    const double dens = kInvSqrt2Pi * std::exp(-0.5 * z * z);
    double next = dens > 0.0 ? z + f / dens : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);

    if (std::abs(next - z) <= 1e-12 * std::max(1.0, std::abs(z)) ||
        hi - lo <= 1e-12 * std::max(1.0, std::abs(z))) {
      return next;
    }
    z = next;
  }
  return z;
}

}  // namespace

Probability::Probability(double value) : value_(value) {
  require(value >= 0.0 && value <= 1.0, "probability must lie in [0, 1]");
}

ZScore::ZScore(double value) : value_(value) {
  require(!std::isnan(value), "z-score must not be NaN");
}

namespace detail {

double cdf(double z) noexcept { return 0.5 * std::erfc(-z * kInvSqrt2); }

double sf(double z) noexcept { return 0.5 * std::erfc(z * kInvSqrt2); }

}  // namespace detail

double std_normal_pdf(ZScore z) {
  require(std::isfinite(z.value()), "std_normal_pdf requires a finite argument");
  const double v = z.value();
  return kInvSqrt2Pi * std::exp(-0.5 * v * v);
}

Probability std_normal_cdf(ZScore z) { return Probability(detail::cdf(z.value())); }

Probability std_normal_sf(ZScore z) { return Probability(detail::sf(z.value())); }

ZScore std_normal_quantile(Probability p) {
  const double v = p.value();
  require(v > 0.0 && v < 1.0, "quantile requires p in (0, 1)");
  if (v == 0.5) return ZScore(0.0);
  // 1 - v is exact for v >= 0.5, so both branches solve a tail equation
  // with an exactly represented target.
  if (v < 0.5) return ZScore(-upper_tail_root(v));
  return ZScore(upper_tail_root(1.0 - v));
}

double upper_truncated_second_moment(ZScore t) {
  const double v = t.value();
  if (v == -std::numeric_limits<double>::infinity()) return 1.0;
  if (v == std::numeric_limits<double>::infinity()) return 0.0;
  const double m = v * kInvSqrt2Pi * std::exp(-0.5 * v * v) + detail::sf(v);
  // Rounding can push the far-left value a hair above 1.
  return std::clamp(m, 0.0, 1.0);
}

}  // namespace mmlab
