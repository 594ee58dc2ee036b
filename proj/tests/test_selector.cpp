#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "doctest.h"
#include "mmlab/error.hpp"
#include "mmlab/selector.hpp"
#include "oracle.hpp"

using namespace mmlab;

namespace {
const auto kOnes = DesignSpec::constant_one();
const auto kBic = SelectorCalibration::consistent_log();
const auto kAic = SelectorCalibration::fixed_level();

McOptions mc(std::int64_t replicates, std::uint64_t seed = 99) {
  McOptions o;
  o.replicates = replicates;
  o.seed = seed;
  return o;
}
}  // namespace

TEST_SUITE("selector") {
  TEST_CASE("thresholds") {
    const oracle::big ln100 = log(oracle::big(100));
    CHECK(threshold(kBic, 100, kOnes) ==
          doctest::Approx(static_cast<double>(sqrt(100 * ln100))).epsilon(1e-14));
    CHECK(threshold(kAic, 100, kOnes) == doctest::Approx(16.448536270).epsilon(1e-10));
    double prev = 0.0;
    for (SampleSize n : {10, 100, 1000, 10000, 100000, 1000000}) {
      const double z = threshold(kBic, n, kOnes) / std::sqrt(sum_sq(kOnes, n));
      CHECK(z > prev);
      prev = z;
    }
    CHECK_THROWS_AS(threshold(kBic, 1, kOnes), Error);
    CHECK(threshold(SelectorCalibration::custom_power(0.25), 10000, kOnes) == doctest::Approx(1000.0));
    const auto scaled = DesignSpec::scaled_grid(4.0);
    CHECK(threshold(kBic, 100, scaled) == doctest::Approx(2.0 * threshold(kBic, 100, kOnes)));
  }

  TEST_CASE("calibration validation") {
    CHECK_THROWS_AS(SelectorCalibration::fixed_level(0.0).validate(), Error);
    CHECK_THROWS_AS(SelectorCalibration::fixed_level(1.0).validate(), Error);
    CHECK_THROWS_AS(SelectorCalibration::custom_power(0.5).validate(), Error);
    CHECK_THROWS_AS(SelectorCalibration::consistent_log(0.0).validate(), Error);
  }

  TEST_CASE("power values") {
    for (SampleSize n : {100, 10000, 1000000}) {
      CHECK(std::abs(power(0.0, n, kAic, kOnes).value() - 0.05) <= 1e-10);
      const double boundary = threshold(kBic, n, kOnes) / sum_sq(kOnes, n);
      CHECK(power(boundary, n, kBic, kOnes).value() == 0.5);
    }
    CHECK(power(0.0, 100, kBic, kOnes).value() > power(0.0, 10000, kBic, kOnes).value());
    CHECK(power(0.0, 10000, kBic, kOnes).value() > power(0.0, 1000000, kBic, kOnes).value());
  }

  TEST_CASE("power is strictly increasing in beta") {
    for (const auto& cal : {kBic, kAic, SelectorCalibration::custom_power()}) {
      double prev = -1.0;
      for (double beta = 0.0; beta <= 0.3; beta += 0.003) {
        const double p = power(beta, 400, cal, kOnes).value();
        CHECK(p > prev);
        prev = p;
      }
    }
  }

  TEST_CASE("consistency under H1 at fixed beta") {
    CHECK(is_consistent(SelectorCalibration::consistent_log(2.0)));
    CHECK(is_consistent(SelectorCalibration::custom_power(0.25)));
    CHECK_FALSE(is_consistent(kAic));
    for (const auto& cal : {kBic, SelectorCalibration::custom_power()}) {
      CHECK(power(0.1, 100000000, cal, kOnes).value() > 0.999);
    }
  }

  TEST_CASE("select") {
    const std::vector<double> ones{1.0, 1.0};
    const auto out = select(ones, ones, 1.5);
    CHECK(out.statistic == 2.0);
    CHECK(out.chose_h1);
    CHECK(select(ones, ones, 2.0).chose_h1);  // ties select H1
    const std::vector<double> zeros{0.0, 0.0};
    CHECK_FALSE(select(zeros, ones, 0.1).chose_h1);
    CHECK_THROWS_AS(select(std::vector<double>{1.0}, ones, 1.0), Error);
  }

  TEST_CASE("simulated selection probability") {
    const double se05 = std::sqrt(0.05 * 0.95 / 1e5);
    CHECK(std::abs(simulate_selection_prob(0.0, 50, kAic, kOnes, mc(100000)).value() - 0.05) <= 3 * se05);
    const double boundary = threshold(kBic, 50, kOnes) / 50.0;
    CHECK(std::abs(simulate_selection_prob(boundary, 50, kBic, kOnes, mc(100000)).value() - 0.5) <=
          3 * std::sqrt(0.25 / 1e5));
    CHECK(simulate_selection_prob_at_threshold(0.0, 50, std::numeric_limits<double>::infinity(), kOnes,
                                               mc(1000))
              .value() == 0.0);
    CHECK(simulate_selection_prob(0.1, 40, kBic, kOnes, mc(5000, 1)).value() ==
          simulate_selection_prob(0.1, 40, kBic, kOnes, mc(5000, 1)).value());
    CHECK_THROWS_AS(simulate_selection_prob(0.1, 40, kBic, kOnes, mc(0)), Error);
  }

  TEST_CASE("simulation agrees with power at 10 random points") {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> beta(0.0, 0.4);
    std::uniform_int_distribution<int> n(10, 60);
    for (int i = 0; i < 10; ++i) {
      const double b = beta(gen);
      const SampleSize size = n(gen);
      const double p = power(b, size, kBic, kOnes).value();
      const double sim = simulate_selection_prob(b, size, kBic, kOnes, mc(100000, 40 + i)).value();
      const double se = std::sqrt(std::max(p * (1 - p), 1e-12) / 1e5);
      CHECK(std::abs(sim - p) <= 3 * se);
    }
  }
}
