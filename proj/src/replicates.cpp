#include "mmlab/replicates.hpp"

#include <cmath>

namespace mmlab {

double SampleMoments::std_error() const {
  if (count < 1) return 0.0;
  return std::sqrt(variance / static_cast<double>(count));
}

SampleMoments moments(std::span<const double> values) {
  SampleMoments m;
  m.count = static_cast<std::int64_t>(values.size());
  if (values.empty()) return m;
  double sum = 0.0;
  for (double v : values) sum += v;
  m.mean = sum / static_cast<double>(values.size());
  if (values.size() < 2) return m;
  double ss = 0.0;
  for (double v : values) {
    const double d = v - m.mean;
    ss += d * d;
  }
  m.variance = ss / static_cast<double>(values.size() - 1);
  return m;
}

}  // namespace mmlab
