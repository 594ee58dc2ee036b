// mmlab: command-line front end for the selection-risk lab.
//
//   mmlab power     --n 100 --calibration aic
//   mmlab risk      --n 100 --beta 0.3 --calibration aic --replicates 100000
//   mmlab sweep     --scenario yang [--config file] [--out f.csv] [--format plotdata]
//   mmlab classify  --sequence yang --b 0.5 --calibration bic --n 1000000 --M 1
//   mmlab distances --n 100
//   mmlab lemma1    --delta 0.5 --delta 1 --delta 2 --delta 4
//
// Exit codes: 0 success, 2 invalid config, 3 I/O error, 4 --assert failed.

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mmlab/distance.hpp"
#include "mmlab/error.hpp"
#include "mmlab/lab.hpp"
#include "mmlab/risk.hpp"
#include "mmlab/selector.hpp"
#include "mmlab/sequences.hpp"

namespace {

using namespace mmlab;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitAssert = 4;

struct SettingFlag {
  std::string key;
  CLI::Option* option = nullptr;
};

/// Flags that map one-to-one onto config settings. Values stay as text and
/// go through the same parser as config files, so flags and files agree.
struct SettingFlags {
  std::map<std::string, std::string> values;
  std::vector<SettingFlag> flags;

  void add(CLI::App* app, const std::string& flag, const std::string& key,
           const std::string& help) {
    auto* opt = app->add_option(flag, values[key], help);
    flags.push_back({key, opt});
  }

  std::vector<std::pair<std::string, std::string>> given() const {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& f : flags) {
      if (f.option->count() > 0) out.emplace_back(f.key, values.at(f.key));
    }
    return out;
  }
};

void add_calibration_flags(CLI::App* app, SettingFlags& s) {
  s.add(app, "--calibration", "calibration", "Threshold family: bic (consistent log), aic (fixed level), power");
  s.add(app, "--tau", "tau", "bic: d_n = sqrt(sum x^2 * tau * log n)");
  s.add(app, "--alpha", "alpha", "aic: size of the fixed-level test");
  s.add(app, "--gamma", "gamma", "power: d_n = sqrt(sum x^2) * n^gamma, 0 < gamma < 1/2");
}

void add_design_flags(CLI::App* app, SettingFlags& s) {
  s.add(app, "--design", "design", "Regressors: constant (x_i = 1) or scaled");
  s.add(app, "--kappa", "kappa", "scaled design: sum x^2 = kappa * n");
  s.add(app, "--s-star", "s_star", "Prediction design factor s*");
}

void add_sequence_flags(CLI::App* app, SettingFlags& s) {
  s.add(app, "--sequence", "sequence", "yang, boundary, perfect, contiguous, generic");
  s.add(app, "--b", "b", "yang: beta_n = b d_n / sum x^2, 0 < b < 1");
  s.add(app, "--bprime", "bprime", "perfect: beta_n = (1 + b') d_n / sum x^2");
  s.add(app, "--r", "r", "contiguous: beta_n = r / sqrt(n)");
  s.add(app, "--c", "c", "generic: c_n coefficient (beta_n = c_n / sqrt(n))");
  s.add(app, "--p", "p", "generic: c_n = c * n^p (omit for constant c_n)");
}

void add_mc_flags(CLI::App* app, SettingFlags& s) {
  s.add(app, "--replicates", "replicates", "Monte Carlo replicates (enables simulation columns)");
  s.add(app, "--seed", "seed", "Monte Carlo seed");
}

ScenarioConfig config_from(const SettingFlags& s, Scenario base = Scenario::Yang) {
  auto settings = s.given();
  settings.insert(settings.begin(), {"scenario", std::string(to_string(base))});
  return config_from_settings(settings);
}

McOptions mc_options(const ScenarioConfig& c) {
  McOptions mc;
  mc.replicates = c.mc->replicates;
  mc.seed = c.mc->seed;
  return mc;
}

void write_output(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(out_path);
  if (!os) throw Error(ErrorCode::Io, "cannot open '" + out_path + "' for writing");
  os << text;
  os.flush();
  if (!os) throw Error(ErrorCode::Io, "write to '" + out_path + "' failed");
}

int report_checks(const std::vector<ScenarioCheck>& checks) {
  bool ok = true;
  for (const auto& c : checks) {
    std::cerr << (c.passed ? "[PASS] " : "[FAIL] ") << c.name;
    if (!c.detail.empty()) std::cerr << " -- " << c.detail;
    std::cerr << '\n';
    ok = ok && c.passed;
  }
  return ok ? kExitOk : kExitAssert;
}

// --- subcommands -----------------------------------------------------------

int run_power(const SettingFlags& s, long long n, const std::string& out, bool do_assert) {
  const auto config = config_from(s);
  const auto cal = config.calibration();
  const auto design = config.design();
  const auto betas = materialize(BetaGrid::structured(0.0, 60, 3.0), n, cal, design);

  std::ostringstream os;
  os << "# calibration: " << cal.describe() << "\n# n: " << n
     << "\n# d_n: " << format_number(threshold(cal, n, design)) << '\n';
  os << "beta,power,accept_prob" << (config.mc ? ",mc_power" : "") << '\n';
  std::vector<double> powers;
  for (double beta : betas) {
    const double p = power(beta, n, cal, design).value();
    powers.push_back(p);
    os << format_number(beta) << ',' << format_number(p) << ',' << format_number(1.0 - p);
    if (config.mc) {
      os << ',' << format_number(simulate_selection_prob(beta, n, cal, design, mc_options(config)).value());
    }
    os << '\n';
  }
  write_output(out, os.str());
  if (!do_assert) return kExitOk;

  std::vector<ScenarioCheck> checks;
  bool monotone = true;
  for (std::size_t i = 1; i < powers.size(); ++i) monotone = monotone && powers[i] >= powers[i - 1];
  checks.push_back({"power nondecreasing in beta", monotone, ""});
  if (const auto* fixed = std::get_if<FixedLevel>(&cal.family)) {
    const double size = powers.front();
    checks.push_back({"power(0) = alpha", std::abs(size - fixed->alpha) <= 1e-10,
                      "power(0) = " + format_number(size)});
  }
  return report_checks(checks);
}

int run_risk(const SettingFlags& s, long long n, double beta, bool do_assert) {
  const auto config = config_from(s);
  const auto cal = config.calibration();
  const auto design = config.design();
  const auto exact = exact_risk(beta, n, cal, design);

  const auto print = [](const char* label, const RiskReport& r) {
    std::cout << label << ": n=" << r.n << " beta=" << format_number(r.beta)
              << " term_estimation=" << format_number(r.term_estimation)
              << " term_bias=" << format_number(r.term_bias) << " risk=" << format_number(r.risk)
              << " scaled_risk=" << format_number(r.scaled_risk)
              << " accept_prob=" << format_number(r.accept_prob);
    if (r.mc_std_error) std::cout << " mc_std_error=" << format_number(*r.mc_std_error);
    std::cout << '\n';
  };
  std::cout << "calibration: " << cal.describe() << "  d_n=" << format_number(threshold(cal, n, design))
            << '\n';
  print("exact", exact);
  if (!config.mc) return kExitOk;

  const auto mc = mc_risk(beta, n, cal, design, mc_options(config));
  print("monte_carlo", mc);
  if (!do_assert) return kExitOk;
  const double z = std::abs(mc.risk - exact.risk) / *mc.mc_std_error;
  return report_checks({{"exact risk within 3 MC standard errors", z <= 3.0,
                         "|exact - mc| / se = " + format_number(z)}});
}

int run_sweep(const SettingFlags& s, const std::string& scenario, const std::string& config_path,
              const std::string& out, const std::string& format,
              const std::vector<std::string>& series, bool do_assert) {
  std::vector<std::pair<std::string, std::string>> settings;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw Error(ErrorCode::Io, "cannot read config '" + config_path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    settings = parse_settings(buf.str());
  }
  if (!scenario.empty()) settings.emplace_back("scenario", scenario);
  const auto flags = s.given();
  settings.insert(settings.end(), flags.begin(), flags.end());
  bool has_scenario = false;
  for (const auto& [k, v] : settings) has_scenario = has_scenario || k == "scenario";
  require(has_scenario, "sweep needs --scenario or a config file with a scenario entry");

  const auto config = config_from_settings(settings);
  const auto table = run_scenario(config);
  std::ostringstream os;
  if (format == "plotdata") write_plotdata(os, table, series);
  else write_csv(os, table);
  write_output(out, os.str());
  return do_assert ? report_checks(check_scenario(config, table)) : kExitOk;
}

int run_classify(const SettingFlags& s, long long n, double margin, bool do_assert) {
  const auto config = config_from(s);
  const auto seq = config.sequence();
  const auto design = config.design();
  std::cout << "sequence: " << seq.describe() << '\n';
  std::cout << "separation: " << to_string(classify_separation(seq, design)) << '\n';
  std::cout << "contiguous: " << (is_contiguous(seq, design) ? "true" : "false") << '\n';
  std::cout << "n: " << n << "  beta_n: " << format_number(beta_at(seq, n, design))
            << "  c_n: " << format_number(separation_scale(seq, n, design)) << '\n';
  const auto llr = llr_params(seq, n, design);
  std::cout << "llr under null: mean=" << format_number(llr.mean)
            << " variance=" << format_number(llr.variance) << '\n';
  if (seq.threshold_linked()) {
    const auto cm = confusion_margin(seq, *seq.calibration, design, n, margin);
    std::cout << "confusion margin M=" << format_number(margin) << ": holds=" << (cm.holds ? "true" : "false")
              << " capacity=" << format_number(cm.capacity) << " minimal_n="
              << (cm.minimal_n ? format_number(*cm.minimal_n) : std::string("never")) << '\n';
  }
  std::vector<ScenarioCheck> checks;
  checks.push_back({"llr mean = -variance/2", llr.mean == -0.5 * llr.variance, ""});
  if (config.mc) {
    const auto m = mc_llr_check(seq, n, design, mc_options(config));
    std::cout << "llr monte carlo: mean=" << format_number(m.mean)
              << " variance=" << format_number(m.variance) << " replicates=" << m.count << '\n';
    const double se = std::sqrt(llr.variance / static_cast<double>(m.count));
    const double z = se > 0.0 ? std::abs(m.mean - llr.mean) / se : std::abs(m.mean - llr.mean);
    checks.push_back({"simulated llr mean within 3 SE", z <= 3.0, "z = " + format_number(z)});
  }
  return do_assert ? report_checks(checks) : kExitOk;
}

int run_distances(const SettingFlags& s, long long n, double sxx_flag, double beta_flag,
                  const std::string& out, bool do_assert) {
  const auto config = config_from(s);
  const double sxx = sxx_flag > 0.0 ? sxx_flag : sum_sq(config.design(), n);
  std::vector<double> betas;
  if (beta_flag >= 0.0) {
    betas.push_back(beta_flag);
  } else {
    betas.push_back(0.0);
    for (int k = 0; k <= 24; ++k) betas.push_back(std::pow(10.0, -3.0 + k * 0.125) / std::sqrt(sxx) * 10.0);
  }
  std::ostringstream os;
  os << "# sxx: " << format_number(sxx) << '\n'
     << "beta,delta,hellinger_affinity,hellinger_sq,l1_distance,upper_bound,chain_holds\n";
  bool all = true;
  for (double beta : betas) {
    const GaussianShiftPair pair(beta, sxx);
    const double a = hellinger_affinity(pair);
    const double h2 = hellinger_distance_sq(pair);
    const bool ok = check_inequality_chain(pair);
    all = all && ok;
    os << format_number(beta) << ',' << format_number(pair.shift()) << ',' << format_number(a) << ','
       << format_number(h2) << ',' << format_number(l1_distance(pair)) << ','
       << format_number(std::min(2.0 - a * a, 2.0 * std::sqrt(h2))) << ',' << (ok ? 1 : 0) << '\n';
  }
  write_output(out, os.str());
  return do_assert ? report_checks({{"inequality chain holds on every row", all, ""}}) : kExitOk;
}

int run_lemma1(std::vector<double> deltas, const std::string& out, bool do_assert) {
  if (deltas.empty()) deltas = {0.5, 1.0, 2.0, 4.0};
  std::ostringstream os;
  os << "delta,half_l1,midpoint_gap,attainment_error,grid_sup_gap,grid_argmax\n";
  double worst = 0.0;
  for (double delta : deltas) {
    require(delta >= 0.0 && std::isfinite(delta), "delta must be finite and >= 0");
    const GaussianShiftPair pair(delta, 1.0);  // sxx = 1 makes beta the shift
    const double half = 0.5 * l1_distance(pair);
    const double mid = lemma1_gap(pair, 0.5 * delta);
    double best = -1.0;
    double arg = 0.0;
    for (int k = 0; k <= 4000; ++k) {
      const double t = -6.0 + (delta + 12.0) * k / 4000.0;
      const double g = lemma1_gap(pair, t);
      if (g > best) {
        best = g;
        arg = t;
      }
    }
    worst = std::max(worst, std::abs(mid - half));
    os << format_number(delta) << ',' << format_number(half) << ',' << format_number(mid) << ','
       << format_number(std::abs(mid - half)) << ',' << format_number(best) << ','
       << format_number(arg) << '\n';
  }
  write_output(out, os.str());
  return do_assert ? report_checks({{"midpoint test attains L1/2 within 1e-9", worst <= 1e-9,
                                     "max error " + format_number(worst)}})
                   : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "mmlab: power, risk and local-alternative experiments for threshold model selectors.\n"
      "Limit verdict cutoffs (sweep --assert): TENDS_TO_ZERO if the tail is strictly\n"
      "decreasing and the last value is below zeta0; DIVERGES if the tail is strictly\n"
      "increasing and last > zeta_inf * first; BOUNDED if max/min < rho. Strict defaults\n"
      "are zeta0=1e-3, zeta_inf=1e2, rho=3; presets use the grid-relaxed zeta0=0.02,\n"
      "zeta_inf=3, rho=3 (override with --zeta0/--zeta-inf/--rho)."};
  app.require_subcommand(1);

  bool do_assert = false;
  std::string out;
  app.add_flag("--assert", do_assert, "Check the subcommand's claim; exit 4 on failure");
  app.add_option("--out", out, "Write output to this path instead of stdout");

  long long n = 100;
  double beta = 0.0;
  double margin = 1.0;
  double sxx = 0.0;
  double single_beta = -1.0;
  std::string scenario;
  std::string config_path;
  std::string format = "csv";
  std::vector<std::string> series;
  std::vector<double> deltas;

  SettingFlags power_flags, risk_flags, sweep_flags, classify_flags, distance_flags;

  auto* power_cmd = app.add_subcommand("power", "Power curve of the selector at fixed n");
  power_cmd->add_option("--n", n, "Sample size")->check(CLI::Range(2LL, static_cast<long long>(kMaxAnalyticN)));
  add_calibration_flags(power_cmd, power_flags);
  add_design_flags(power_cmd, power_flags);
  add_mc_flags(power_cmd, power_flags);

  auto* risk_cmd = app.add_subcommand("risk", "Exact (and optionally simulated) predictive risk");
  risk_cmd->add_option("--n", n, "Sample size")->check(CLI::Range(2LL, static_cast<long long>(kMaxAnalyticN)));
  risk_cmd->add_option("--beta", beta, "Slope under H1")->check(CLI::NonNegativeNumber);
  add_calibration_flags(risk_cmd, risk_flags);
  add_design_flags(risk_cmd, risk_flags);
  add_mc_flags(risk_cmd, risk_flags);

  auto* sweep_cmd = app.add_subcommand("sweep", "Run a scenario preset or config file over an n grid");
  sweep_cmd->add_option("--scenario", scenario,
                        "yang, boundary, perfect, contiguous, aic_bounded, bic_diverges, "
                        "distance_check, lemma1_attain");
  sweep_cmd->add_option("--config", config_path, "Flat key = value config file (flags win)");
  sweep_cmd->add_option("--format", format, "csv or plotdata")->check(CLI::IsMember({"csv", "plotdata"}));
  sweep_cmd->add_option("--series", series, "Plot-data series to emit (default: all)");
  add_calibration_flags(sweep_cmd, sweep_flags);
  add_design_flags(sweep_cmd, sweep_flags);
  add_sequence_flags(sweep_cmd, sweep_flags);
  add_mc_flags(sweep_cmd, sweep_flags);
  sweep_flags.add(sweep_cmd, "--grid", "grid", "n grid min:max:points-per-decade");
  sweep_flags.add(sweep_cmd, "--scan-sup", "scan_sup", "Add the sup_beta scaled-risk column");
  sweep_flags.add(sweep_cmd, "--zeta0", "zeta0", "TENDS_TO_ZERO cutoff");
  sweep_flags.add(sweep_cmd, "--zeta-inf", "zeta_inf", "DIVERGES growth factor");
  sweep_flags.add(sweep_cmd, "--rho", "rho", "BOUNDED range ratio");

  auto* classify_cmd = app.add_subcommand("classify", "Separation, contiguity and margin verdicts for a sequence");
  classify_cmd->add_option("--n", n, "Sample size for the per-n diagnostics")
      ->check(CLI::Range(2LL, static_cast<long long>(kMaxAnalyticN)));
  classify_cmd->add_option("--M", margin, "Confusion margin M")->check(CLI::PositiveNumber);
  add_calibration_flags(classify_cmd, classify_flags);
  add_design_flags(classify_cmd, classify_flags);
  add_sequence_flags(classify_cmd, classify_flags);
  add_mc_flags(classify_cmd, classify_flags);

  auto* distances_cmd = app.add_subcommand("distances", "Hellinger / L1 table with the inequality-chain check");
  distances_cmd->add_option("--n", n, "Sample size (sum x^2 from the design)")->check(CLI::PositiveNumber);
  distances_cmd->add_option("--sxx", sxx, "Override sum x^2")->check(CLI::PositiveNumber);
  distances_cmd->add_option("--beta", single_beta, "Single slope instead of a grid")->check(CLI::NonNegativeNumber);
  add_design_flags(distances_cmd, distance_flags);

  auto* lemma1_cmd = app.add_subcommand("lemma1", "Attainment of the L1/2 power-gap bound");
  lemma1_cmd->add_option("--delta", deltas, "Shift delta = beta sqrt(sum x^2); repeatable");

  for (auto* sub : {power_cmd, risk_cmd, sweep_cmd, classify_cmd, distances_cmd, lemma1_cmd}) {
    sub->add_flag("--assert", do_assert, "Check the subcommand's claim; exit 4 on failure");
    sub->add_option("--out", out, "Write output to this path instead of stdout");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*power_cmd) return run_power(power_flags, n, out, do_assert);
    if (*risk_cmd) return run_risk(risk_flags, n, beta, do_assert);
    if (*sweep_cmd) return run_sweep(sweep_flags, scenario, config_path, out, format, series, do_assert);
    if (*classify_cmd) return run_classify(classify_flags, n, margin, do_assert);
    if (*distances_cmd) return run_distances(distance_flags, n, sxx, single_beta, out, do_assert);
    if (*lemma1_cmd) return run_lemma1(deltas, out, do_assert);
  } catch (const Error& e) {
    std::cerr << "mmlab: " << e.what() << '\n';
    return e.code() == ErrorCode::Io ? kExitIo : kExitConfig;
  }
  return kExitOk;
}
