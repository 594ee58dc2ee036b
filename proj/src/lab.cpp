#include "mmlab/lab.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mmlab/distance.hpp"
#include "mmlab/error.hpp"
#include "mmlab/selector.hpp"
#include "mmlab/sequences.hpp"

namespace mmlab {

namespace {

constexpr double kComplementTolerance = 1e-12;
constexpr double kBoundaryTolerance = 1e-12;
constexpr double kAttainmentTolerance = 1e-9;
constexpr double kContiguousRelTolerance = 0.05;
constexpr double kPerfectPowerFloor = 0.999;

bool is_sequence_scenario(Scenario s) {
  return s != Scenario::AicBounded && s != Scenario::BicDiverges;
}

bool strictly_increasing(std::span<const double> v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] > v[i - 1])) return false;
  }
  return true;
}

bool strictly_decreasing(std::span<const double> v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1])) return false;
  }
  return true;
}

std::string grid_description(std::span<const SampleSize> grid) {
  std::ostringstream os;
  for (std::size_t i = 0; i < grid.size(); ++i) os << (i ? " " : "") << grid[i];
  return os.str();
}

std::uint64_t row_seed(std::uint64_t seed, std::size_t row) {
  return seed + 1000003ULL * static_cast<std::uint64_t>(row);
}

void fill_sequence_row(SweepRow& row, const ScenarioConfig& config,
                       const AlternativeSequence& seq) {
  const auto cal = config.calibration();
  const auto design = config.design();
  const SampleSize n = row.n;
  const double beta = beta_at(seq, n, design);
  const double d_n = threshold(cal, n, design);
  const auto report = exact_risk_at_threshold(beta, n, d_n, design);
  row.beta_n = beta;
  row.d_n = d_n;
  row.power = power_at_threshold(beta, sum_sq(design, n), d_n).value();
  row.accept_prob = report.accept_prob;
  row.scaled_bias = static_cast<double>(n) * beta * beta * report.accept_prob;
  row.scaled_risk = report.scaled_risk;
}

void fill_sup_row(SweepRow& row, const ScenarioConfig& config) {
  const auto cal = config.calibration();
  const auto design = config.design();
  const SampleSize n = row.n;
  const auto scan = scaled_risk_sup(n, cal, design, BetaGrid::structured());
  const double d_n = threshold(cal, n, design);
  const auto report = exact_risk_at_threshold(scan.argmax_beta, n, d_n, design);
  row.sup_scaled_risk = scan.sup_scaled_risk;
  if (!is_sequence_scenario(config.scenario)) {
    row.beta_n = scan.argmax_beta;
    row.d_n = d_n;
    row.power = power_at_threshold(scan.argmax_beta, sum_sq(design, n), d_n).value();
    row.accept_prob = report.accept_prob;
    row.scaled_bias =
        static_cast<double>(n) * scan.argmax_beta * scan.argmax_beta * report.accept_prob;
    row.scaled_risk = report.scaled_risk;
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Limit verdicts
// ---------------------------------------------------------------------------

LimitThresholds LimitThresholds::grid_relaxed() { return {0.02, 3.0, 3.0}; }

std::string_view to_string(LimitTag t) {
  switch (t) {
    case LimitTag::TendsToZero: return "TENDS_TO_ZERO";
    case LimitTag::Bounded: return "BOUNDED";
    case LimitTag::Diverges: return "DIVERGES";
    case LimitTag::Inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

LimitVerdict classify_limit(std::span<const double> series, const LimitThresholds& thresholds) {
  require(series.size() >= 3, "classify_limit needs at least 3 values");
  for (double v : series) require(!std::isnan(v), "classify_limit: series contains NaN");

  LimitVerdict v;
  v.first = series.front();
  v.last = series.back();
  const auto [lo, hi] = std::minmax_element(series.begin(), series.end());
  v.min = *lo;
  v.max = *hi;
  const auto tail = series.subspan(series.size() / 2);
  v.tail_increasing = strictly_increasing(tail);
  v.tail_decreasing = strictly_decreasing(tail);
  v.growth_ratio = v.first != 0.0 ? v.last / v.first : std::numeric_limits<double>::infinity();
  v.range_ratio = v.min > 0.0 ? v.max / v.min : std::numeric_limits<double>::infinity();

  if (v.tail_decreasing && std::abs(v.last) < thresholds.zero) {
    v.tag = LimitTag::TendsToZero;
  } else if (v.tail_increasing && v.first > 0.0 && v.last > thresholds.diverge * v.first) {
    v.tag = LimitTag::Diverges;
  } else if (v.min > 0.0 && v.range_ratio < thresholds.bounded_ratio) {
    v.tag = LimitTag::Bounded;
  } else {
    v.tag = LimitTag::Inconclusive;
  }
  return v;
}

// ---------------------------------------------------------------------------
// Sweep tables
// ---------------------------------------------------------------------------

std::vector<std::string> SweepTable::column_names() const {
  std::vector<std::string> names(std::begin(kCoreColumns), std::end(kCoreColumns));
  names.insert(names.end(), extra_columns.begin(), extra_columns.end());
  return names;
}

std::vector<std::optional<double>> SweepTable::column(std::string_view name) const {
  std::vector<std::optional<double>> out;
  out.reserve(rows.size());
  const auto extra = std::find(extra_columns.begin(), extra_columns.end(), name);
  for (const auto& row : rows) {
    if (name == "n") out.emplace_back(static_cast<double>(row.n));
    else if (name == "beta_n") out.push_back(row.beta_n);
    else if (name == "d_n") out.push_back(row.d_n);
    else if (name == "power") out.push_back(row.power);
    else if (name == "accept_prob") out.push_back(row.accept_prob);
    else if (name == "scaled_bias") out.push_back(row.scaled_bias);
    else if (name == "scaled_risk") out.push_back(row.scaled_risk);
    else if (name == "sup_scaled_risk") out.push_back(row.sup_scaled_risk);
    else if (extra != extra_columns.end()) {
      const auto idx = static_cast<std::size_t>(extra - extra_columns.begin());
      out.push_back(idx < row.extra.size() ? row.extra[idx] : std::nullopt);
    } else {
      fail("unknown column '" + std::string(name) + "'");
    }
  }
  return out;
}

std::vector<double> SweepTable::values(std::string_view name) const {
  std::vector<double> out;
  for (const auto& cell : column(name)) {
    require(cell.has_value(), "column '" + std::string(name) + "' has empty cells");
    out.push_back(*cell);
  }
  return out;
}

SweepTable run_scenario(const ScenarioConfig& config) {
  config.validate();
  const auto cal = config.calibration();
  const auto design = config.design();
  const bool sequence_rows = is_sequence_scenario(config.scenario);
  const bool sup = config.scan_sup || !sequence_rows;

  SweepTable table;
  table.metadata = {
      {"scenario", std::string(to_string(config.scenario))},
      {"calibration", cal.describe()},
      {"design", design.kind == DesignKind::ConstantOne ? "constant_one" : "scaled_grid"},
      {"kappa", format_number(design.kappa)},
      {"s_star", format_number(design.prediction_factor)},
      {"n_grid", grid_description(config.n_grid)},
      {"thresholds", "zero=" + format_number(config.thresholds.zero) +
                         " diverge=" + format_number(config.thresholds.diverge) +
                         " bounded_ratio=" + format_number(config.thresholds.bounded_ratio)},
  };
  std::optional<AlternativeSequence> seq;
  if (sequence_rows) {
    seq = config.sequence();
    table.metadata.emplace_back("sequence", seq->describe());
    table.metadata.emplace_back("separation", std::string(to_string(classify_separation(*seq, design))));
    table.metadata.emplace_back("contiguous", is_contiguous(*seq, design) ? "true" : "false");
  }
  if (sup) table.metadata.emplace_back("beta_grid", BetaGrid::structured().describe());
  if (config.mc) {
    table.metadata.emplace_back("mc", "replicates=" + std::to_string(config.mc->replicates) +
                                          " seed=" + std::to_string(config.mc->seed) +
                                          " max_n=" + std::to_string(kMaxMonteCarloN));
  }

  if (config.scenario == Scenario::DistanceCheck) {
    table.extra_columns = {"c_n", "hellinger_affinity", "hellinger_sq", "l1_distance",
                           "chain_holds"};
  } else if (config.scenario == Scenario::Lemma1Attain) {
    table.extra_columns = {"delta", "midpoint_gap", "half_l1", "attainment_error",
                           "selector_gap"};
  }
  if (config.mc) {
    table.extra_columns.insert(table.extra_columns.end(),
                               {"mc_power", "mc_scaled_risk", "mc_scaled_risk_se"});
  }

  for (std::size_t i = 0; i < config.n_grid.size(); ++i) {
    SweepRow row;
    row.n = config.n_grid[i];
    if (sequence_rows) fill_sequence_row(row, config, *seq);
    if (sup) fill_sup_row(row, config);

    const double sxx = sum_sq(design, row.n);
    if (config.scenario == Scenario::DistanceCheck) {
      const GaussianShiftPair pair(*row.beta_n, sxx);
      row.extra = {pair.shift(), hellinger_affinity(pair), hellinger_distance_sq(pair),
                   l1_distance(pair), check_inequality_chain(pair) ? 1.0 : 0.0};
    } else if (config.scenario == Scenario::Lemma1Attain) {
      const GaussianShiftPair pair(*row.beta_n, sxx);
      const double delta = pair.shift();
      const double mid = lemma1_gap(pair, 0.5 * delta);
      const double half = 0.5 * l1_distance(pair);
      row.extra = {delta, mid, half, std::abs(mid - half),
                   lemma1_gap(pair, *row.d_n / std::sqrt(sxx))};
    }

    if (config.mc) {
      if (row.n <= kMaxMonteCarloN) {
        McOptions mc;
        mc.replicates = config.mc->replicates;
        mc.seed = row_seed(config.mc->seed, i);
        const double beta = *row.beta_n;
        const auto p = simulate_selection_prob_at_threshold(beta, row.n, *row.d_n, design, mc);
        const auto r = mc_risk_at_threshold(beta, row.n, *row.d_n, design, mc);
        row.extra.insert(row.extra.end(),
                         {p.value(), r.scaled_risk,
                          static_cast<double>(row.n) * r.mc_std_error.value_or(0.0)});
      } else {
        row.extra.insert(row.extra.end(), 3, std::nullopt);
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::vector<ScenarioCheck> check_scenario(const ScenarioConfig& config, const SweepTable& table) {
  std::vector<ScenarioCheck> checks;
  const auto add = [&](std::string name, bool ok, std::string detail) {
    checks.push_back({std::move(name), ok, std::move(detail)});
  };
  const auto verdict_check = [&](std::string_view column, LimitTag expected) {
    const auto vals = table.values(column);
    const auto v = classify_limit(vals, config.thresholds);
    add(std::string(column) + " verdict " + std::string(to_string(expected)), v.tag == expected,
        "got " + std::string(to_string(v.tag)) + " (first=" + format_number(v.first) +
            ", last=" + format_number(v.last) + ")");
  };

  {
    const auto power = table.column("power");
    const auto accept = table.column("accept_prob");
    double worst = 0.0;
    for (std::size_t i = 0; i < power.size(); ++i) {
      if (power[i] && accept[i]) worst = std::max(worst, std::abs(*power[i] + *accept[i] - 1.0));
    }
    add("accept_prob + power = 1", worst <= kComplementTolerance,
        "max deviation " + format_number(worst));
  }

  switch (config.scenario) {
    case Scenario::Yang: {
      add("scaled_bias strictly increasing", strictly_increasing(table.values("scaled_bias")), "");
      verdict_check("scaled_bias", LimitTag::Diverges);
      verdict_check("power", LimitTag::TendsToZero);
      break;
    }
    case Scenario::Boundary: {
      double worst = 0.0;
      for (double p : table.values("power")) worst = std::max(worst, std::abs(p - 0.5));
      add("power = 1/2 at every n", worst <= kBoundaryTolerance,
          "max |power - 1/2| = " + format_number(worst));
      break;
    }
    case Scenario::Perfect: {
      const double last = table.values("power").back();
      add("final power > 0.999", last > kPerfectPowerFloor, "power = " + format_number(last));
      verdict_check("scaled_bias", LimitTag::TendsToZero);
      break;
    }
    case Scenario::Contiguous: {
      const double target = config.r * config.r;
      const double last = table.values("scaled_bias").back();
      add("final scaled_bias within 5% of r^2",
          std::abs(last - target) <= kContiguousRelTolerance * target,
          "scaled_bias = " + format_number(last) + ", target = " + format_number(target));
      verdict_check("scaled_bias", LimitTag::Bounded);
      break;
    }
    case Scenario::AicBounded:
      verdict_check("sup_scaled_risk", LimitTag::Bounded);
      break;
    case Scenario::BicDiverges:
      add("sup_scaled_risk strictly increasing",
          strictly_increasing(table.values("sup_scaled_risk")), "");
      verdict_check("sup_scaled_risk", LimitTag::Diverges);
      break;
    case Scenario::DistanceCheck: {
      const auto ok = table.values("chain_holds");
      add("inequality chain holds at every n",
          std::all_of(ok.begin(), ok.end(), [](double v) { return v == 1.0; }), "");
      break;
    }
    case Scenario::Lemma1Attain: {
      const auto err = table.values("attainment_error");
      const double worst = *std::max_element(err.begin(), err.end());
      add("midpoint test attains L1/2", worst <= kAttainmentTolerance,
          "max error " + format_number(worst));
      break;
    }
  }
  return checks;
}

}  // namespace mmlab
