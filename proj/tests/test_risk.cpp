#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "mmlab/error.hpp"
#include "mmlab/risk.hpp"
#include "mmlab/selector.hpp"
#include "oracle.hpp"

using namespace mmlab;

namespace {
const auto kOnes = DesignSpec::constant_one();
const auto kBic = SelectorCalibration::consistent_log();
const auto kAic = SelectorCalibration::fixed_level();
constexpr double kInf = std::numeric_limits<double>::infinity();

McOptions mc(std::int64_t replicates, std::uint64_t seed = 17) {
  McOptions o;
  o.replicates = replicates;
  o.seed = seed;
  return o;
}

// E{(beta - S/sxx)^2 1(S >= d)} with S ~ N(beta sxx, sxx), integrated in S.
double estimation_term_quadrature(double beta, double sxx, double d) {
  const double mean = beta * sxx;
  const double sd = std::sqrt(sxx);
  const auto f = [&](double s) {
    const double err = beta - s / sxx;
    return err * err * oracle::phi((s - mean) / sd) / sd;
  };
  const double lo = std::max(d, mean - 40.0 * sd);
  return lo >= mean + 40.0 * sd ? 0.0 : oracle::integrate(f, lo, mean + 40.0 * sd);
}
}  // namespace

TEST_SUITE("risk") {
  TEST_CASE("least squares") {
    const std::vector<double> ones{1.0, 1.0};
    CHECK(lse(ones, ones) == 1.0);
    CHECK(lse(std::vector<double>{2.0, 4.0}, std::vector<double>{1.0, 2.0}) == 2.0);
    CHECK_THROWS_AS(lse(ones, std::vector<double>{0.0, 0.0}), Error);
    const auto m = mc_lse_moments(0.0, 100, kOnes, mc(100000));
    CHECK(std::abs(m.mean) <= 3.0 / std::sqrt(100.0 * 1e5));
  }

  TEST_CASE("exact risk special cases") {
    const auto never = exact_risk_at_threshold(0.0, 100, kInf, kOnes);
    CHECK(never.risk == 0.0);
    CHECK(never.term_bias == 0.0);
    const double sxx = sum_sq(kOnes, 100);
    const double d = threshold(kBic, 100, kOnes);
    const auto mid = exact_risk(d / sxx, 100, kBic, kOnes);
    CHECK(mid.accept_prob == 0.5);
    CHECK(mid.term_estimation == doctest::Approx(0.5 / sxx).epsilon(1e-14));
  }

  TEST_CASE("closed form matches quadrature in the statistic") {
    for (const auto& cal : {kBic, kAic, SelectorCalibration::custom_power()}) {
      for (SampleSize n : {10, 100, 10000}) {
        const double sxx = sum_sq(kOnes, n);
        const double d = threshold(cal, n, kOnes);
        for (double b : {0.0, 0.25, 0.5, 1.0, 1.5, 3.0}) {
          const double beta = b * d / sxx;
          const auto r = exact_risk(beta, n, cal, kOnes);
          CHECK(std::abs(r.term_estimation - estimation_term_quadrature(beta, sxx, d)) <= 1e-12);
          CHECK(r.term_bias == doctest::Approx(beta * beta * oracle::cdf((d - beta * sxx) / std::sqrt(sxx)))
                                   .epsilon(1e-12));
        }
      }
    }
  }

  TEST_CASE("report invariants") {
    const auto design = DesignSpec::constant_one(2.5);
    for (double beta = 0.0; beta <= 2.0; beta += 0.05) {
      const auto r = exact_risk(beta, 200, kBic, design);
      CHECK(r.term_estimation >= 0.0);
      CHECK(r.term_bias >= 0.0);
      CHECK(std::abs(r.risk - 2.5 * (r.term_estimation + r.term_bias)) <= 1e-12);
      CHECK(r.scaled_risk == 200.0 * r.risk);
      CHECK(std::abs(r.accept_prob + power(beta, 200, kBic, design).value() - 1.0) <= 1e-12);
      CHECK(200.0 * r.term_estimation <= 200.0 / sum_sq(design, 200));
    }
  }

  TEST_CASE("exact risk is Lipschitz on a fine grid") {
    // d(risk)/d(beta) is bounded by 2 beta + sqrt(sxx) (beta^2 + 1/sxx) sup phi, so steps of h
    // move the risk by at most h times that bound.
    const SampleSize n = 400;
    const double sxx = sum_sq(kOnes, n);
    const double h = 1e-4;
    double prev = exact_risk(0.0, n, kBic, kOnes).risk;
    for (double beta = h; beta <= 1.0; beta += h) {
      const double r = exact_risk(beta, n, kBic, kOnes).risk;
      const double bound = h * (2.0 * beta + std::sqrt(sxx) * (beta * beta + 1.0 / sxx) * 0.4);
      CHECK(std::abs(r - prev) <= bound);
      prev = r;
    }
  }

  TEST_CASE("monte carlo risk") {
    const auto exact = exact_risk(0.3, 100, kAic, kOnes);
    const auto sim = mc_risk(0.3, 100, kAic, kOnes, mc(200000));
    REQUIRE(sim.mc_std_error);
    CHECK(std::abs(sim.risk - exact.risk) <= 3.0 * *sim.mc_std_error);
    CHECK(std::abs(sim.risk - (sim.term_estimation + sim.term_bias)) <= 1e-12);
    CHECK(mc_risk_at_threshold(0.0, 30, kInf, kOnes, mc(100)).risk == 0.0);
    const auto again = mc_risk(0.3, 100, kAic, kOnes, mc(200000));
    CHECK(again.risk == sim.risk);
    CHECK(*again.mc_std_error == *sim.mc_std_error);
    CHECK_THROWS_AS(mc_risk(0.3, 100, kAic, kOnes, mc(1)), Error);
  }

  TEST_CASE("scaled bias grows at the Yang point") {
    double prev = 0.0;
    for (SampleSize n = 100; n <= 100000000; n *= 10) {
      const double beta = 0.5 * threshold(kBic, n, kOnes) / sum_sq(kOnes, n);
      const auto r = exact_risk(beta, n, kBic, kOnes);
      const double scaled_bias = static_cast<double>(n) * r.term_bias;
      CHECK(scaled_bias > prev);
      prev = scaled_bias;
    }
  }

  TEST_CASE("beta grid") {
    CHECK_THROWS_AS(materialize(BetaGrid::explicit_points({}), 100, kBic, kOnes), Error);
    const auto pts = materialize(BetaGrid::structured(), 100, kBic, kOnes);
    CHECK(pts.front() == 0.0);
    for (std::size_t i = 1; i < pts.size(); ++i) CHECK(pts[i] > pts[i - 1]);
    const double unit = threshold(kBic, 100, kOnes) / 100.0;
    for (double b : kStructuralMultipliers) {
      const bool present = std::any_of(pts.begin(), pts.end(),
                                       [&](double x) { return std::abs(x - b * unit) <= 1e-15 * unit; });
      CHECK(present);
    }
  }

  TEST_CASE("supremum scan") {
    const auto zero = scaled_risk_sup(100, kBic, kOnes, BetaGrid::explicit_points({0.0}));
    CHECK(zero.argmax_beta == 0.0);
    CHECK(zero.sup_scaled_risk == doctest::Approx(100.0 * exact_risk(0.0, 100, kBic, kOnes).term_estimation));
    const auto par = scaled_risk_sup(10000, kBic, kOnes, BetaGrid::structured(), Execution::Parallel);
    const auto ser = scaled_risk_sup(10000, kBic, kOnes, BetaGrid::structured(), Execution::Serial);
    CHECK(par.sup_scaled_risk == ser.sup_scaled_risk);
    CHECK(par.argmax_beta == ser.argmax_beta);

    std::vector<double> aic;
    std::vector<double> bic;
    for (SampleSize n : {100, 1000, 10000}) {
      aic.push_back(scaled_risk_sup(n, kAic, kOnes, BetaGrid::structured()).sup_scaled_risk);
      bic.push_back(scaled_risk_sup(n, kBic, kOnes, BetaGrid::structured()).sup_scaled_risk);
    }
    CHECK(*std::max_element(aic.begin(), aic.end()) / *std::min_element(aic.begin(), aic.end()) < 3.0);
    CHECK(bic[1] > bic[0]);
    CHECK(bic[2] > bic[1]);
  }
}
