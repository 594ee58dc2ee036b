#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <string>

#include "mmlab/error.hpp"
#include "mmlab/lab.hpp"

namespace mmlab {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view key, std::string_view text) {
  const std::string s(trim(text));
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  fail("setting '" + std::string(key) + "': '" + s + "' is not a number");
}

std::int64_t parse_int(std::string_view key, std::string_view text) {
  const double v = parse_double(key, text);
  require(std::isfinite(v) && v == std::floor(v) && std::abs(v) < 9.0e15,
          "setting '" + std::string(key) + "' must be an integer");
  return static_cast<std::int64_t>(v);
}

bool parse_bool(std::string_view key, std::string_view text) {
  const auto s = lower(trim(text));
  if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
  if (s == "0" || s == "false" || s == "no" || s == "off") return false;
  fail("setting '" + std::string(key) + "' must be a boolean");
}

McSettings& mc_of(ScenarioConfig& c) {
  if (!c.mc) c.mc = McSettings{};
  return *c.mc;
}

}  // namespace

std::string_view to_string(Scenario s) {
  switch (s) {
    case Scenario::Yang: return "YANG";
    case Scenario::Boundary: return "BOUNDARY";
    case Scenario::Perfect: return "PERFECT";
    case Scenario::Contiguous: return "CONTIGUOUS";
    case Scenario::AicBounded: return "AIC_BOUNDED";
    case Scenario::BicDiverges: return "BIC_DIVERGES";
    case Scenario::DistanceCheck: return "DISTANCE_CHECK";
    case Scenario::Lemma1Attain: return "LEMMA1_ATTAIN";
  }
  return "?";
}

Scenario parse_scenario(std::string_view name) {
  const auto key = lower(trim(name));
  for (auto s : {Scenario::Yang, Scenario::Boundary, Scenario::Perfect, Scenario::Contiguous,
                 Scenario::AicBounded, Scenario::BicDiverges, Scenario::DistanceCheck,
                 Scenario::Lemma1Attain}) {
    if (lower(to_string(s)) == key) return s;
  }
  fail("unknown scenario '" + std::string(name) +
       "' (expected yang, boundary, perfect, contiguous, aic_bounded, bic_diverges, "
       "distance_check, lemma1_attain)");
}

ScenarioConfig ScenarioConfig::preset(Scenario s) {
  ScenarioConfig c;
  c.scenario = s;
  c.n_grid = parse_grid("1e2:1e8:1");
  switch (s) {
    case Scenario::Yang:
    case Scenario::DistanceCheck:
      c.sequence_kind = SequenceKind::Yang;
      break;
    case Scenario::Boundary:
      c.sequence_kind = SequenceKind::Boundary;
      break;
    case Scenario::Perfect:
      c.sequence_kind = SequenceKind::Perfect;
      break;
    case Scenario::Contiguous:
    case Scenario::Lemma1Attain:
      c.sequence_kind = SequenceKind::Contiguous;
      break;
    case Scenario::AicBounded:
      c.calibration_kind = CalibrationKind::FixedLevel;
      c.scan_sup = true;
      break;
    case Scenario::BicDiverges:
      c.scan_sup = true;
      break;
  }
  return c;
}

SelectorCalibration ScenarioConfig::calibration() const {
  switch (calibration_kind) {
    case CalibrationKind::ConsistentLog: return SelectorCalibration::consistent_log(tau);
    case CalibrationKind::FixedLevel: return SelectorCalibration::fixed_level(alpha);
    case CalibrationKind::CustomPower: return SelectorCalibration::custom_power(gamma);
  }
  fail("unknown calibration");
}

AlternativeSequence ScenarioConfig::sequence() const {
  switch (sequence_kind) {
    case SequenceKind::Yang: return AlternativeSequence::yang(b, calibration());
    case SequenceKind::Boundary: return AlternativeSequence::boundary(calibration());
    case SequenceKind::Perfect: return AlternativeSequence::perfect(bprime, calibration());
    case SequenceKind::Contiguous: return AlternativeSequence::contiguous(r);
    case SequenceKind::Generic:
      return generic_exponent ? AlternativeSequence::generic_power(generic_coef, *generic_exponent)
                              : AlternativeSequence::generic_constant(generic_coef);
  }
  fail("unknown sequence family");
}

DesignSpec ScenarioConfig::design() const {
  return design_kind == DesignKind::ConstantOne ? DesignSpec::constant_one(s_star)
                                                : DesignSpec::scaled_grid(kappa, s_star);
}

void ScenarioConfig::validate() const {
  calibration();
  design();
  if (scenario != Scenario::AicBounded && scenario != Scenario::BicDiverges) sequence();
  require(n_grid.size() >= 3,
          "n grid needs at least 3 points; widen it, e.g. --grid 1e2:1e8:1 (7 points)");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    require(n_grid[i] >= 2, "n grid values must be >= 2");
    require(n_grid[i] <= kMaxAnalyticN, "n grid values are capped at 1e8");
    if (i > 0) require(n_grid[i] > n_grid[i - 1], "n grid must be strictly increasing");
  }
  if (mc) {
    require(mc->replicates >= 2 && mc->replicates <= kMaxReplicates,
            "replicates must lie in [2, 1e6]");
  }
  require(thresholds.zero > 0.0 && thresholds.diverge > 1.0 && thresholds.bounded_ratio > 1.0,
          "limit thresholds must satisfy zero > 0, diverge > 1, bounded_ratio > 1");
}

void apply_setting(ScenarioConfig& c, std::string_view raw_key, std::string_view value) {
  const auto key = lower(trim(raw_key));
  const auto v = trim(value);
  if (key == "scenario") {
    c = ScenarioConfig::preset(parse_scenario(v));
  } else if (key == "calibration") {
    const auto s = lower(v);
    if (s == "bic" || s == "consistent_log") c.calibration_kind = CalibrationKind::ConsistentLog;
    else if (s == "aic" || s == "fixed_level") c.calibration_kind = CalibrationKind::FixedLevel;
    else if (s == "power" || s == "custom_power") c.calibration_kind = CalibrationKind::CustomPower;
    else fail("calibration must be one of bic, aic, power");
  } else if (key == "tau") {
    c.tau = parse_double(key, v);
  } else if (key == "alpha") {
    c.alpha = parse_double(key, v);
  } else if (key == "gamma") {
    c.gamma = parse_double(key, v);
  } else if (key == "sequence") {
    const auto s = lower(v);
    if (s == "yang") c.sequence_kind = SequenceKind::Yang;
    else if (s == "boundary") c.sequence_kind = SequenceKind::Boundary;
    else if (s == "perfect") c.sequence_kind = SequenceKind::Perfect;
    else if (s == "contiguous") c.sequence_kind = SequenceKind::Contiguous;
    else if (s == "generic") c.sequence_kind = SequenceKind::Generic;
    else fail("sequence must be one of yang, boundary, perfect, contiguous, generic");
  } else if (key == "b") {
    c.b = parse_double(key, v);
  } else if (key == "bprime") {
    c.bprime = parse_double(key, v);
  } else if (key == "r") {
    c.r = parse_double(key, v);
  } else if (key == "c") {
    c.generic_coef = parse_double(key, v);
  } else if (key == "p") {
    c.generic_exponent = parse_double(key, v);
  } else if (key == "design") {
    const auto s = lower(v);
    if (s == "constant" || s == "constant_one") c.design_kind = DesignKind::ConstantOne;
    else if (s == "scaled" || s == "scaled_grid") c.design_kind = DesignKind::ScaledGrid;
    else fail("design must be constant or scaled");
  } else if (key == "kappa") {
    c.kappa = parse_double(key, v);
  } else if (key == "s_star") {
    c.s_star = parse_double(key, v);
  } else if (key == "grid") {
    c.n_grid = parse_grid(v);
  } else if (key == "replicates") {
    mc_of(c).replicates = parse_int(key, v);
  } else if (key == "seed") {
    const auto s = parse_int(key, v);
    require(s >= 0, "seed must be >= 0");
    mc_of(c).seed = static_cast<std::uint64_t>(s);
  } else if (key == "scan_sup") {
    c.scan_sup = parse_bool(key, v);
  } else if (key == "zeta0") {
    c.thresholds.zero = parse_double(key, v);
  } else if (key == "zeta_inf") {
    c.thresholds.diverge = parse_double(key, v);
  } else if (key == "rho") {
    c.thresholds.bounded_ratio = parse_double(key, v);
  } else {
    fail("unknown setting '" + std::string(raw_key) + "'");
  }
}

std::vector<std::pair<std::string, std::string>> parse_settings(std::string_view text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    auto line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    require(eq != std::string_view::npos,
            "config line " + std::to_string(line_no) + ": expected key = value");
    out.emplace_back(std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1))));
  }
  return out;
}

ScenarioConfig config_from_settings(
    std::span<const std::pair<std::string, std::string>> settings) {
  ScenarioConfig c = ScenarioConfig::preset(Scenario::Yang);
  for (const auto& [k, v] : settings) {
    if (lower(k) == "scenario") apply_setting(c, k, v);
  }
  for (const auto& [k, v] : settings) {
    if (lower(k) != "scenario") apply_setting(c, k, v);
  }
  return c;
}

std::vector<SampleSize> parse_grid(std::string_view spec) {
  std::vector<std::string_view> parts;
  while (true) {
    const auto colon = spec.find(':');
    parts.push_back(spec.substr(0, colon));
    if (colon == std::string_view::npos) break;
    spec = spec.substr(colon + 1);
  }
  require(parts.size() == 3, "grid must be min:max:points-per-decade");
  const double lo = parse_double("grid min", parts[0]);
  const double hi = parse_double("grid max", parts[1]);
  const double per_decade = parse_double("grid points-per-decade", parts[2]);
  require(lo >= 2.0 && hi >= lo, "grid needs 2 <= min <= max");
  require(hi <= static_cast<double>(kMaxAnalyticN), "grid max is capped at 1e8");
  require(per_decade > 0.0 && per_decade <= 1000.0, "points-per-decade must lie in (0, 1000]");

  std::vector<SampleSize> grid;
  for (int k = 0;; ++k) {
    const double v = lo * std::pow(10.0, k / per_decade);
    if (v > hi * (1.0 + 1e-12)) break;
    const auto n = static_cast<SampleSize>(std::llround(v));
    if (grid.empty() || n > grid.back()) grid.push_back(n);
  }
  return grid;
}

}  // namespace mmlab
