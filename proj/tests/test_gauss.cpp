#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "mmlab/error.hpp"
#include "mmlab/gauss.hpp"
#include "oracle.hpp"

using namespace mmlab;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
double cdf(double z) { return std_normal_cdf(ZScore(z)).value(); }
double m2(double t) { return upper_truncated_second_moment(ZScore(t)); }
}  // namespace

TEST_SUITE("gauss") {
  TEST_CASE("pdf values") {
    CHECK(std_normal_pdf(ZScore(0.0)) == doctest::Approx(0.3989422804014327).epsilon(1e-15));
    CHECK(std_normal_pdf(ZScore(1.0)) == doctest::Approx(oracle::pdf(1.0)).epsilon(1e-14));
    CHECK(std_normal_pdf(ZScore(1.0)) == doctest::Approx(0.2419707245).epsilon(1e-10));
    CHECK(std_normal_pdf(ZScore(-2.3)) == std_normal_pdf(ZScore(2.3)));
    CHECK_THROWS_AS(std_normal_pdf(ZScore(kInf)), Error);
  }

  TEST_CASE("ZScore and Probability reject bad values") {
    CHECK_THROWS_AS(ZScore(std::nan("")), Error);
    CHECK_NOTHROW(ZScore(-kInf));
    CHECK_THROWS_AS(Probability(-0.1), Error);
    CHECK_THROWS_AS(Probability(1.1), Error);
    CHECK_THROWS_AS(Probability(std::nan("")), Error);
  }

  TEST_CASE("cdf values and sentinels") {
    CHECK(cdf(0.0) == 0.5);
    CHECK(std::abs(cdf(1.0) - oracle::cdf(1.0)) < 1e-12);
    CHECK(cdf(1.0) == doctest::Approx(0.8413447461).epsilon(1e-10));
    CHECK(cdf(-kInf) == 0.0);
    CHECK(cdf(kInf) == 1.0);
    CHECK(std_normal_sf(ZScore(-kInf)).value() == 1.0);
  }

  TEST_CASE("cdf symmetry and agreement with 50-digit erfc") {
    for (double z = -37.0; z <= 37.0; z += 0.173) {
      CHECK(std::abs(cdf(z) + cdf(-z) - 1.0) <= 1e-12);
      const double ref = oracle::cdf(z);
      CHECK(std::abs(cdf(z) - ref) <= 1e-15 + 1e-13 * ref);
    }
  }

  TEST_CASE("quantile inverts the cdf") {
    CHECK(std_normal_quantile(Probability(0.5)).value() == 0.0);
    CHECK(std_normal_quantile(Probability(0.8413447461)).value() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std_normal_quantile(Probability(0.95)).value() == doctest::Approx(1.6448536270).epsilon(1e-10));
    for (double p = 0.001; p < 0.999; p += 0.0007) {
      CHECK(std::abs(cdf(std_normal_quantile(Probability(p)).value()) - p) <= 1e-10);
    }
    for (double p : {1e-300, 1e-20, 1e-8, 1 - 1e-12}) {
      const double z = std_normal_quantile(Probability(p)).value();
      CHECK(std::abs(oracle::cdf(z) - p) <= 1e-10 * std::max(p, 1e-3));
    }
    CHECK_THROWS_AS(std_normal_quantile(Probability(0.0)), Error);
    CHECK_THROWS_AS(std_normal_quantile(Probability(1.0)), Error);
  }

  TEST_CASE("upper truncated second moment") {
    CHECK(m2(-kInf) == 1.0);
    CHECK(m2(kInf) == 0.0);
    CHECK(m2(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(std::abs(m2(1.0) - oracle::upper_second_moment(1.0)) < 1e-12);
    CHECK(m2(1.0) == doctest::Approx(0.4006259784506).epsilon(1e-12));
    double prev = 1.0;
    for (double t = -10.0; t <= 10.0; t += 0.01) {
      const double v = m2(t);
      CHECK(v <= prev);
      CHECK(v >= 0.0);
      CHECK(std::abs(v + (1.0 - v) - 1.0) <= 1e-10);
      prev = v;
    }
    CHECK_THROWS_AS(ZScore(std::nan("")), Error);
  }

  TEST_CASE("25 random points against quadrature oracles") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> u(-6.0, 6.0);
    for (int i = 0; i < 25; ++i) {
      const double z = u(gen);
      CHECK(std::abs(std_normal_pdf(ZScore(z)) - oracle::phi(z)) <= 1e-9);
      CHECK(std::abs(cdf(z) - oracle::cdf_quadrature(z)) <= 1e-9);
      CHECK(std::abs(m2(z) - oracle::upper_second_moment(z)) <= 1e-9);
      const double p = oracle::cdf(z);
      if (p > 1e-6 && p < 1 - 1e-6) {
        CHECK(std::abs(std_normal_quantile(Probability(p)).value() - z) <= 1e-8);
      }
    }
  }
}
