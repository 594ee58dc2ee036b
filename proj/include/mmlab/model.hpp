#pragma once

// Value types shared across the selector, distance, risk and sequence
// modules: the regression design, the threshold calibration families, and
// the named local-alternative sequences.
//
// The data model is y_i = beta * x_i + eps_i with eps_i ~ N(0, 1); the null
// model is beta = 0.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace mmlab {

using SampleSize = std::int64_t;

// ---------------------------------------------------------------------------
// Design
// ---------------------------------------------------------------------------

enum class DesignKind {
  ConstantOne,  // x_i = 1, so sum x_i^2 = n
  ScaledGrid,   // x_i = sqrt(kappa) * g_i with g_i proportional to i and sum g_i^2 = n
};

struct DesignSpec {
  DesignKind kind = DesignKind::ConstantOne;
  double kappa = 1.0;              // limit of sum x_i^2 / n
  double prediction_factor = 1.0;  // s* = (1/m) sum (x*_i)^2

  static DesignSpec constant_one(double prediction_factor = 1.0);
  static DesignSpec scaled_grid(double kappa, double prediction_factor = 1.0);

  void validate() const;
};

/// sum_{i=1}^n x_i^2 in closed form (kappa * n).
double sum_sq(const DesignSpec& design, SampleSize n);

/// Materializes x_1..x_n. Only the Monte Carlo paths need this.
std::vector<double> regressors(const DesignSpec& design, SampleSize n);

// ---------------------------------------------------------------------------
// Threshold calibrations d_n
// ---------------------------------------------------------------------------

/// d_n = sqrt(sum x^2 * tau * log n). BIC-like; consistent.
struct ConsistentLog {
  double tau = 1.0;

  bool operator==(const ConsistentLog&) const = default;
};

/// d_n = z_{1-alpha} * sqrt(sum x^2). AIC-like; fixed size alpha.
struct FixedLevel {
  double alpha = 0.05;

  bool operator==(const FixedLevel&) const = default;
};

/// d_n = sqrt(sum x^2) * n^gamma, 0 < gamma < 1/2. Consistent.
struct CustomPower {
  double gamma = 0.25;

  bool operator==(const CustomPower&) const = default;
};

struct SelectorCalibration {
  std::variant<ConsistentLog, FixedLevel, CustomPower> family;

  bool operator==(const SelectorCalibration&) const = default;

  static SelectorCalibration consistent_log(double tau = 1.0);
  static SelectorCalibration fixed_level(double alpha = 0.05);
  static SelectorCalibration custom_power(double gamma = 0.25);

  void validate() const;
  std::string describe() const;
};

// ---------------------------------------------------------------------------
// Local-alternative sequences beta_n
// ---------------------------------------------------------------------------

/// beta_n = b * d_n / sum x^2, 0 < b < 1.
struct Yang {
  double b = 0.5;
};

/// beta_n = d_n / sum x^2; the standardized statistic sits exactly on d_n.
struct Boundary {};

/// beta_n = (1 + b') * d_n / sum x^2, b' > 0.
struct Perfect {
  double bprime = 1.0;
};

/// beta_n = r / sqrt(n), r > 0.
struct Contiguous {
  double r = 1.0;
};

/// beta_n = c_n / sqrt(n) with c_n = coef * n^exponent (exponent != 0) or
/// c_n = coef (constant form). Restricted to monomials so that the limit of
/// c_n is decidable from the parameters.
struct GenericRootN {
  enum class Form { Power, Constant };
  Form form = Form::Constant;
  double coef = 1.0;
  double exponent = 0.0;
};

struct AlternativeSequence {
  std::variant<Yang, Boundary, Perfect, Contiguous, GenericRootN> family;
  /// Required by the d_n-linked families (Yang, Boundary, Perfect).
  std::optional<SelectorCalibration> calibration;

  static AlternativeSequence yang(double b, SelectorCalibration cal);
  static AlternativeSequence boundary(SelectorCalibration cal);
  static AlternativeSequence perfect(double bprime, SelectorCalibration cal);
  static AlternativeSequence contiguous(double r);
  static AlternativeSequence generic_power(double coef, double exponent);
  static AlternativeSequence generic_constant(double coef);

  bool threshold_linked() const;
  void validate() const;
  std::string describe() const;
};

}  // namespace mmlab
