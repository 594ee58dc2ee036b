#pragma once

// Standard-normal analytics shared by every other module.
//
// All functions are pure. Infinite arguments are accepted wherever a limit
// value exists (the sweeps hit thresholds far out in the tails); NaN is
// always rejected.

namespace mmlab {

/// A probability in [0, 1].
class Probability {
 public:
  explicit Probability(double value);
  double value() const noexcept { return value_; }

 private:
  double value_;
};

/// A point on the standard-normal axis. May be +/-infinity, never NaN.
class ZScore {
 public:
  explicit ZScore(double value);
  double value() const noexcept { return value_; }

 private:
  double value_;
};

/// phi(z). Requires finite z.
double std_normal_pdf(ZScore z);

/// Phi(z), accurate to ~1 ulp in both tails.
Probability std_normal_cdf(ZScore z);

/// 1 - Phi(z) computed without cancellation.
Probability std_normal_sf(ZScore z);

/// Inverse of Phi on the open interval (0, 1).
ZScore std_normal_quantile(Probability p);

/// E[Z^2 1{Z >= t}] = t phi(t) + 1 - Phi(t).
double upper_truncated_second_moment(ZScore t);

// Unchecked double-valued forms used on hot paths. Callers guarantee no NaN.
namespace detail {
double cdf(double z) noexcept;
double sf(double z) noexcept;
}  // namespace detail

}  // namespace mmlab
