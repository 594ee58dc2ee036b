#pragma once

// Experiment runner: scenario presets, n-grid sweeps, finite-grid limit
// verdicts, and CSV / plot-data emission.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mmlab/model.hpp"
#include "mmlab/risk.hpp"

namespace mmlab {

enum class Scenario {
  Yang,
  Boundary,
  Perfect,
  Contiguous,
  AicBounded,
  BicDiverges,
  DistanceCheck,
  Lemma1Attain,
};

std::string_view to_string(Scenario s);
Scenario parse_scenario(std::string_view name);  // case-insensitive; throws on unknown

enum class CalibrationKind { ConsistentLog, FixedLevel, CustomPower };
enum class SequenceKind { Yang, Boundary, Perfect, Contiguous, Generic };

// ---------------------------------------------------------------------------
// Limit verdicts
// ---------------------------------------------------------------------------

/// Cutoffs that turn "-> 0 / bounded / -> infinity" into finite-grid
/// verdicts. The defaults are the strict values; `grid_relaxed()` is what
/// the presets use on their 7-point {1e2..1e8} grids, where log-speed
/// behavior cannot clear a factor of 100.
struct LimitThresholds {
  double zero = 1e-3;          // TENDS_TO_ZERO: last |value| below this
  double diverge = 1e2;        // DIVERGES: last > diverge * first
  double bounded_ratio = 3.0;  // BOUNDED: max / min below this

  static LimitThresholds grid_relaxed();
};

enum class LimitTag { TendsToZero, Bounded, Diverges, Inconclusive };

std::string_view to_string(LimitTag t);

struct LimitVerdict {
  LimitTag tag = LimitTag::Inconclusive;
  double first = 0.0;
  double last = 0.0;
  double min = 0.0;
  double max = 0.0;
  bool tail_increasing = false;  // strictly, over the trailing half
  bool tail_decreasing = false;
  double growth_ratio = 0.0;  // last / first
  double range_ratio = 0.0;   // max / min (infinity if min <= 0)
};

/// Requires at least 3 values. Checks, in order: TENDS_TO_ZERO (tail
/// strictly decreasing, |last| < zero), DIVERGES (tail strictly increasing,
/// last > diverge * first), BOUNDED (all positive, max/min < bounded_ratio),
/// else INCONCLUSIVE.
LimitVerdict classify_limit(std::span<const double> series,
                            const LimitThresholds& thresholds = {});

// ---------------------------------------------------------------------------
// Scenario configuration
// ---------------------------------------------------------------------------

struct McSettings {
  std::int64_t replicates = 10000;
  std::uint64_t seed = 20090101;
};

inline constexpr SampleSize kMaxAnalyticN = 100000000;  // 1e8
inline constexpr SampleSize kMaxMonteCarloN = 10000;
inline constexpr std::int64_t kMaxReplicates = 1000000;

struct ScenarioConfig {
  Scenario scenario = Scenario::Yang;

  CalibrationKind calibration_kind = CalibrationKind::ConsistentLog;
  double tau = 1.0;
  double alpha = 0.05;
  double gamma = 0.25;

  SequenceKind sequence_kind = SequenceKind::Yang;
  double b = 0.5;
  double bprime = 1.0;
  double r = 2.0;
  double generic_coef = 1.0;
  std::optional<double> generic_exponent;  // absent: constant c_n

  DesignKind design_kind = DesignKind::ConstantOne;
  double kappa = 1.0;
  double s_star = 1.0;

  std::vector<SampleSize> n_grid;
  std::optional<McSettings> mc;
  bool scan_sup = false;
  LimitThresholds thresholds = LimitThresholds::grid_relaxed();

  static ScenarioConfig preset(Scenario s);

  SelectorCalibration calibration() const;
  AlternativeSequence sequence() const;
  DesignSpec design() const;

  void validate() const;
};

/// Applies one `key = value` setting. Throws Error(InvalidArgument) on an
/// unknown key or malformed value. Setting `scenario` resets to that preset.
void apply_setting(ScenarioConfig& config, std::string_view key, std::string_view value);

/// Parses a flat key-value file body: one `key = value` per line, `#`
/// comments, blank lines ignored.
std::vector<std::pair<std::string, std::string>> parse_settings(std::string_view text);

/// Builds a config from ordered settings; a `scenario` entry, wherever it
/// appears, is applied first.
ScenarioConfig config_from_settings(std::span<const std::pair<std::string, std::string>> settings);

/// "min:max:points-per-decade", e.g. "1e2:1e8:1".
std::vector<SampleSize> parse_grid(std::string_view spec);

// ---------------------------------------------------------------------------
// Sweep tables
// ---------------------------------------------------------------------------

/// Fixed CSV column order; extras follow.
inline constexpr std::string_view kCoreColumns[] = {
    "n", "beta_n", "d_n", "power", "accept_prob", "scaled_bias", "scaled_risk", "sup_scaled_risk"};

struct SweepRow {
  SampleSize n = 0;
  std::optional<double> beta_n;
  std::optional<double> d_n;
  std::optional<double> power;
  std::optional<double> accept_prob;
  std::optional<double> scaled_bias;
  std::optional<double> scaled_risk;
  std::optional<double> sup_scaled_risk;
  std::vector<std::optional<double>> extra;  // parallel to SweepTable::extra_columns
};

struct SweepTable {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> extra_columns;
  std::vector<SweepRow> rows;

  /// Names of every column, core first.
  std::vector<std::string> column_names() const;
  /// Cell values of a named column (empty optionals preserved).
  std::vector<std::optional<double>> column(std::string_view name) const;
  /// Same, requiring every cell to be present.
  std::vector<double> values(std::string_view name) const;
};

SweepTable run_scenario(const ScenarioConfig& config);

struct ScenarioCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// The claim each preset reproduces, evaluated on its table.
std::vector<ScenarioCheck> check_scenario(const ScenarioConfig& config, const SweepTable& table);

// ---------------------------------------------------------------------------
// Output
// ---------------------------------------------------------------------------

/// 12 significant digits; "inf"/"-inf" for the infinite sentinels.
std::string format_number(double v);

void write_csv(std::ostream& os, const SweepTable& table);
SweepTable read_csv(std::istream& is);

/// Throws Error(Io) with the path on failure.
void emit_csv(const SweepTable& table, const std::filesystem::path& destination);

/// One block per series: "# series: <name>", then "log10_n <name>" rows.
/// Blocks are separated by two blank lines. Empty `series` selects every
/// column other than n that has at least one value.
void write_plotdata(std::ostream& os, const SweepTable& table,
                    std::span<const std::string> series = {});

void emit_plotdata(const SweepTable& table, const std::filesystem::path& destination,
                   std::span<const std::string> series = {});

}  // namespace mmlab
