#include "mmlab/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mmlab/detail/overloaded.hpp"
#include "mmlab/error.hpp"

namespace mmlab {

using detail::overloaded;

DesignSpec DesignSpec::constant_one(double prediction_factor) {
  DesignSpec d{DesignKind::ConstantOne, 1.0, prediction_factor};
  d.validate();
  return d;
}

DesignSpec DesignSpec::scaled_grid(double kappa, double prediction_factor) {
  DesignSpec d{DesignKind::ScaledGrid, kappa, prediction_factor};
  d.validate();
  return d;
}

void DesignSpec::validate() const {
  require(std::isfinite(kappa) && kappa > 0.0, "design kappa must be > 0");
  require(std::isfinite(prediction_factor) && prediction_factor > 0.0,
          "design prediction_factor must be > 0");
  require(kind != DesignKind::ConstantOne || kappa == 1.0,
          "constant-one design requires kappa = 1");
}

double sum_sq(const DesignSpec& design, SampleSize n) {
  require(n >= 1, "sample size must be >= 1");
  return design.kappa * static_cast<double>(n);
}

std::vector<double> regressors(const DesignSpec& design, SampleSize n) {
  require(n >= 1, "sample size must be >= 1");
  design.validate();
  std::vector<double> xs(static_cast<std::size_t>(n));
  if (design.kind == DesignKind::ConstantOne) {
    std::fill(xs.begin(), xs.end(), 1.0);
    return xs;
  }
  // g_i = c * i with c^2 * sum i^2 = n, sum i^2 = n(n+1)(2n+1)/6.
  const double nd = static_cast<double>(n);
  const double scale =
      std::sqrt(design.kappa * 6.0 / ((nd + 1.0) * (2.0 * nd + 1.0)));
  for (SampleSize i = 0; i < n; ++i) {
    xs[static_cast<std::size_t>(i)] = scale * static_cast<double>(i + 1);
  }
  return xs;
}

SelectorCalibration SelectorCalibration::consistent_log(double tau) {
  SelectorCalibration c{ConsistentLog{tau}};
  c.validate();
  return c;
}

SelectorCalibration SelectorCalibration::fixed_level(double alpha) {
  SelectorCalibration c{FixedLevel{alpha}};
  c.validate();
  return c;
}

SelectorCalibration SelectorCalibration::custom_power(double gamma) {
  SelectorCalibration c{CustomPower{gamma}};
  c.validate();
  return c;
}

void SelectorCalibration::validate() const {
  std::visit(overloaded{
                 [](const ConsistentLog& c) {
                   require(std::isfinite(c.tau) && c.tau > 0.0, "tau must be > 0");
                 },
                 [](const FixedLevel& c) {
                   require(c.alpha > 0.0 && c.alpha < 1.0, "alpha must lie in (0, 1)");
                 },
                 [](const CustomPower& c) {
                   require(c.gamma > 0.0 && c.gamma < 0.5, "gamma must lie in (0, 1/2)");
                 },
             },
             family);
}

std::string SelectorCalibration::describe() const {
  std::ostringstream os;
  std::visit(overloaded{
                 [&](const ConsistentLog& c) { os << "consistent_log(tau=" << c.tau << ")"; },
                 [&](const FixedLevel& c) { os << "fixed_level(alpha=" << c.alpha << ")"; },
                 [&](const CustomPower& c) { os << "custom_power(gamma=" << c.gamma << ")"; },
             },
             family);
  return os.str();
}

AlternativeSequence AlternativeSequence::yang(double b, SelectorCalibration cal) {
  AlternativeSequence s{Yang{b}, cal};
  s.validate();
  return s;
}

AlternativeSequence AlternativeSequence::boundary(SelectorCalibration cal) {
  AlternativeSequence s{Boundary{}, cal};
  s.validate();
  return s;
}

AlternativeSequence AlternativeSequence::perfect(double bprime, SelectorCalibration cal) {
  AlternativeSequence s{Perfect{bprime}, cal};
  s.validate();
  return s;
}

AlternativeSequence AlternativeSequence::contiguous(double r) {
  AlternativeSequence s{Contiguous{r}, std::nullopt};
  s.validate();
  return s;
}

AlternativeSequence AlternativeSequence::generic_power(double coef, double exponent) {
  AlternativeSequence s{GenericRootN{GenericRootN::Form::Power, coef, exponent}, std::nullopt};
  s.validate();
  return s;
}

AlternativeSequence AlternativeSequence::generic_constant(double coef) {
  AlternativeSequence s{GenericRootN{GenericRootN::Form::Constant, coef, 0.0}, std::nullopt};
  s.validate();
  return s;
}

bool AlternativeSequence::threshold_linked() const {
  return std::holds_alternative<Yang>(family) || std::holds_alternative<Boundary>(family) ||
         std::holds_alternative<Perfect>(family);
}

void AlternativeSequence::validate() const {
  std::visit(overloaded{
                 [](const Yang& s) { require(s.b > 0.0 && s.b < 1.0, "Yang b must lie in (0, 1)"); },
                 [](const Boundary&) {},
                 [](const Perfect& s) {
                   require(std::isfinite(s.bprime) && s.bprime > 0.0, "b' must be > 0");
                 },
                 [](const Contiguous& s) {
                   require(std::isfinite(s.r) && s.r > 0.0, "r must be > 0");
                 },
                 [](const GenericRootN& s) {
                   require(std::isfinite(s.coef) && s.coef > 0.0, "c_n coefficient must be > 0");
                   if (s.form == GenericRootN::Form::Power) {
                     require(std::isfinite(s.exponent) && s.exponent != 0.0,
                             "c_n power exponent must be finite and nonzero");
                   }
                 },
             },
             family);
  if (threshold_linked()) {
    require(calibration.has_value(), "threshold-linked sequence needs a calibration");
    calibration->validate();
  }
}

std::string AlternativeSequence::describe() const {
  std::ostringstream os;
  std::visit(overloaded{
                 [&](const Yang& s) { os << "yang(b=" << s.b << ")"; },
                 [&](const Boundary&) { os << "boundary"; },
                 [&](const Perfect& s) { os << "perfect(bprime=" << s.bprime << ")"; },
                 [&](const Contiguous& s) { os << "contiguous(r=" << s.r << ")"; },
                 [&](const GenericRootN& s) {
                   if (s.form == GenericRootN::Form::Power) {
                     os << "generic(c_n=" << s.coef << "*n^" << s.exponent << ")";
                   } else {
                     os << "generic(c_n=" << s.coef << ")";
                   }
                 },
             },
             family);
  if (calibration) os << " under " << calibration->describe();
  return os.str();
}

}  // namespace mmlab
