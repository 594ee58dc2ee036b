#include "mmlab/risk.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mmlab/error.hpp"
#include "mmlab/gauss.hpp"
#include "mmlab/kernels.hpp"
#include "mmlab/selector.hpp"

namespace mmlab {

namespace {

struct LossDraw {
  double loss = 0.0;
  double selected = 0.0;  // 1 if A_n occurred
};

void check_beta(double beta) {
  require(std::isfinite(beta) && beta >= 0.0, "beta must be finite and >= 0");
}

}  // namespace

double lse(std::span<const double> ys, std::span<const double> xs) {
  require(ys.size() == xs.size(), "lse: ys and xs must have equal length");
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += xs[i] * ys[i];
    sxx += xs[i] * xs[i];
  }
  require(sxx > 0.0, "lse: design must not be all zero");
  return sxy / sxx;
}

RiskReport exact_risk_at_threshold(double beta, SampleSize n, double d_n,
                                   const DesignSpec& design) {
  require(n >= 2, "risk requires n >= 2");
  check_beta(beta);
  require(!std::isnan(d_n), "threshold must not be NaN");
  design.validate();

  const double sxx = sum_sq(design, n);
  const double t = (d_n - beta * sxx) / std::sqrt(sxx);

  RiskReport r;
  r.n = n;
  r.beta = beta;
  r.method = RiskMethod::Exact;
  r.accept_prob = detail::cdf(t);
  r.term_bias = beta * beta * r.accept_prob;
  r.term_estimation = upper_truncated_second_moment(ZScore(t)) / sxx;
  r.risk = design.prediction_factor * (r.term_estimation + r.term_bias);
  r.scaled_risk = static_cast<double>(n) * r.risk;
  return r;
}

RiskReport exact_risk(double beta, SampleSize n, const SelectorCalibration& cal,
                      const DesignSpec& design) {
  return exact_risk_at_threshold(beta, n, threshold(cal, n, design), design);
}

RiskReport mc_risk_at_threshold(double beta, SampleSize n, double d_n, const DesignSpec& design,
                                const McOptions& mc) {
  require(mc.replicates >= 2, "mc_risk requires at least 2 replicates");
  require(n >= 2, "risk requires n >= 2");
  check_beta(beta);
  require(!std::isnan(d_n), "threshold must not be NaN");

  const auto xs = regressors(design, n);
  const double sxx = sum_sq(design, n);
  const auto draws = run_replicates(mc, [&](Xoshiro256pp& rng) {
    const double s = kernels::cross_product(rng, beta, xs);
    const bool chosen = s >= d_n;
    const double err = beta - (chosen ? s / sxx : 0.0);
    return LossDraw{err * err, chosen ? 1.0 : 0.0};
  });

  std::vector<double> loss(draws.size());
  double sum_selected_loss = 0.0;
  double sum_accepted = 0.0;
  for (std::size_t k = 0; k < draws.size(); ++k) {
    loss[k] = design.prediction_factor * draws[k].loss;
    sum_selected_loss += draws[k].loss * draws[k].selected;
    sum_accepted += 1.0 - draws[k].selected;
  }
  const auto m = moments(loss);
  const double count = static_cast<double>(draws.size());

  RiskReport r;
  r.n = n;
  r.beta = beta;
  r.method = RiskMethod::MonteCarlo;
  r.accept_prob = sum_accepted / count;
  r.term_estimation = sum_selected_loss / count;
  r.term_bias = beta * beta * r.accept_prob;
  r.risk = m.mean;
  r.scaled_risk = static_cast<double>(n) * r.risk;
  r.mc_std_error = m.std_error();
  return r;
}

RiskReport mc_risk(double beta, SampleSize n, const SelectorCalibration& cal,
                   const DesignSpec& design, const McOptions& mc) {
  return mc_risk_at_threshold(beta, n, threshold(cal, n, design), design, mc);
}

SampleMoments mc_lse_moments(double beta, SampleSize n, const DesignSpec& design,
                             const McOptions& mc) {
  require(mc.replicates >= 2, "need at least 2 replicates");
  check_beta(beta);
  const auto xs = regressors(design, n);
  const double sxx = sum_sq(design, n);
  const auto est =
      run_replicates(mc, [&](Xoshiro256pp& rng) { return kernels::lse(rng, beta, xs, sxx); });
  return moments(est);
}

BetaGrid BetaGrid::explicit_points(std::vector<double> points) {
  BetaGrid g;
  g.kind = Kind::Explicit;
  g.points = std::move(points);
  return g;
}

BetaGrid BetaGrid::structured(double beta_max, int geometric_points, double decades) {
  BetaGrid g;
  g.kind = Kind::Structured;
  g.beta_max = beta_max;
  g.geometric_points = geometric_points;
  g.decades = decades;
  return g;
}

std::string BetaGrid::describe() const {
  std::ostringstream os;
  if (kind == Kind::Explicit) {
    os << "explicit(" << points.size() << " points)";
  } else {
    os << "structured(beta_max=" << (beta_max > 0.0 ? std::to_string(beta_max) : "auto")
       << ", geometric=" << geometric_points << ", decades=" << decades
       << ", structural b*d_n/sxx for b in {0.25,0.5,0.75,1,1.5,2}, plus 0)";
  }
  return os.str();
}

std::vector<double> materialize(const BetaGrid& grid, SampleSize n,
                                const SelectorCalibration& cal, const DesignSpec& design) {
  std::vector<double> pts;
  if (grid.kind == BetaGrid::Kind::Explicit) {
    require(!grid.points.empty(), "beta grid must not be empty");
    for (double b : grid.points) check_beta(b);
    pts = grid.points;
  } else {
    require(grid.geometric_points >= 2, "structured grid needs >= 2 geometric points");
    require(grid.decades > 0.0, "structured grid needs decades > 0");
    const double sxx = sum_sq(design, n);
    const double d_n = threshold(cal, n, design);
    const double beta_max =
        grid.beta_max > 0.0 ? grid.beta_max : (std::max(d_n, 0.0) + 8.0 * std::sqrt(sxx)) / sxx;
    const double beta_min = beta_max * std::pow(10.0, -grid.decades);
    const double step = std::log(beta_max / beta_min) / (grid.geometric_points - 1);
    pts.push_back(0.0);
    for (int i = 0; i < grid.geometric_points; ++i) {
      pts.push_back(beta_min * std::exp(step * i));
    }
    pts.back() = beta_max;
    if (d_n > 0.0) {
      for (double b : kStructuralMultipliers) pts.push_back(b * d_n / sxx);
    }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

SupScanResult scaled_risk_sup(SampleSize n, const SelectorCalibration& cal,
                              const DesignSpec& design, const BetaGrid& grid,
                              Execution execution) {
  const auto betas = materialize(grid, n, cal, design);
  const double d_n = threshold(cal, n, design);
  std::vector<double> scaled(betas.size());
  const auto count = static_cast<std::int64_t>(betas.size());

  if (execution == Execution::Parallel) {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < count; ++i) {
      const auto k = static_cast<std::size_t>(i);
      scaled[k] = exact_risk_at_threshold(betas[k], n, d_n, design).scaled_risk;
    }
  } else {
    for (std::size_t k = 0; k < betas.size(); ++k) {
      scaled[k] = exact_risk_at_threshold(betas[k], n, d_n, design).scaled_risk;
    }
  }

  SupScanResult out;
  out.n = n;
  out.grid_size = betas.size();
  out.grid_spec = grid.describe();
  const auto best = std::max_element(scaled.begin(), scaled.end());
  out.sup_scaled_risk = *best;
  out.argmax_beta = betas[static_cast<std::size_t>(best - scaled.begin())];
  return out;
}

}  // namespace mmlab
