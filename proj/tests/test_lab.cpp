#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "mmlab/error.hpp"
#include "mmlab/lab.hpp"

using namespace mmlab;

namespace {
std::string csv_of(const SweepTable& t) {
  std::ostringstream os;
  write_csv(os, t);
  return os.str();
}

bool same_to_12_digits(double a, double b) {
  return a == b || std::abs(a - b) <= 1e-11 * std::max(std::abs(a), std::abs(b));
}
}  // namespace

TEST_SUITE("lab") {
  TEST_CASE("classify_limit examples") {
    std::vector<double> geometric;
    for (int k = 0; k <= 20; ++k) geometric.push_back(std::ldexp(1.0, -k));
    CHECK(classify_limit(geometric).tag == LimitTag::TendsToZero);
    CHECK(classify_limit(std::vector<double>{4.2, 4.05, 4.01, 4.001}).tag == LimitTag::Bounded);
    CHECK(classify_limit(std::vector<double>{1.0, 10.0, 100.0, 1000.0}).tag == LimitTag::Diverges);
    CHECK(classify_limit(std::vector<double>{1.0, -1.0, 5.0}).tag == LimitTag::Inconclusive);
    CHECK_THROWS_AS(classify_limit(std::vector<double>{1.0, 2.0}), Error);
    const auto v = classify_limit(std::vector<double>{1.0, 2.0, 3.0});
    CHECK(v.growth_ratio == 3.0);
    CHECK(v.range_ratio == 3.0);
    CHECK(v.tail_increasing);
    CHECK(to_string(LimitTag::Diverges) == "DIVERGES");
  }

  TEST_CASE("preset verdicts") {
    const auto verdict = [](Scenario s, std::string_view column) {
      const auto c = ScenarioConfig::preset(s);
      return classify_limit(run_scenario(c).values(column), c.thresholds).tag;
    };
    CHECK(verdict(Scenario::Yang, "scaled_bias") == LimitTag::Diverges);
    CHECK(verdict(Scenario::Yang, "power") == LimitTag::TendsToZero);
    CHECK(verdict(Scenario::Perfect, "scaled_bias") == LimitTag::TendsToZero);
    CHECK(verdict(Scenario::Contiguous, "scaled_bias") == LimitTag::Bounded);
    CHECK(verdict(Scenario::AicBounded, "sup_scaled_risk") == LimitTag::Bounded);
    CHECK(verdict(Scenario::BicDiverges, "sup_scaled_risk") == LimitTag::Diverges);
  }

  TEST_CASE("every preset passes its own checks") {
    for (auto s : {Scenario::Yang, Scenario::Boundary, Scenario::Perfect, Scenario::Contiguous,
                   Scenario::AicBounded, Scenario::BicDiverges, Scenario::DistanceCheck,
                   Scenario::Lemma1Attain}) {
      const auto c = ScenarioConfig::preset(s);
      const auto t = run_scenario(c);
      CHECK(t.rows.size() == c.n_grid.size());
      for (const auto& check : check_scenario(c, t)) {
        INFO(to_string(s), ": ", check.name, " ", check.detail);
        CHECK(check.passed);
      }
    }
  }

  TEST_CASE("yang preset columns") {
    const auto t = run_scenario(ScenarioConfig::preset(Scenario::Yang));
    const auto bias = t.values("scaled_bias");
    const auto power = t.values("power");
    for (std::size_t i = 1; i < bias.size(); ++i) {
      CHECK(bias[i] > bias[i - 1]);
      CHECK(power[i] < power[i - 1]);
    }
    for (const auto& row : t.rows) CHECK(std::abs(*row.power + *row.accept_prob - 1.0) <= 1e-12);
    CHECK_FALSE(t.rows.front().sup_scaled_risk);
  }

  TEST_CASE("config parsing") {
    const auto c = config_from_settings(parse_settings(
        "# comment\nb = 0.25\nscenario = yang\ncalibration = power\ngamma = 0.2\ngrid = 1e2:1e4:2\n"));
    CHECK(c.b == 0.25);
    CHECK(c.calibration_kind == CalibrationKind::CustomPower);
    CHECK(c.n_grid == std::vector<SampleSize>{100, 316, 1000, 3162, 10000});
    CHECK_THROWS_AS(parse_settings("no equals sign"), Error);
    CHECK_THROWS_AS(config_from_settings(parse_settings("bogus = 1")), Error);
    CHECK_THROWS_AS(config_from_settings(parse_settings("alpha = x")), Error);
    CHECK_THROWS_AS(parse_scenario("nope"), Error);
    CHECK(parse_scenario("Bic_Diverges") == Scenario::BicDiverges);
  }

  TEST_CASE("config validation") {
    auto c = ScenarioConfig::preset(Scenario::Yang);
    c.n_grid = {100, 1000};
    CHECK_THROWS_AS(run_scenario(c), Error);
    c.n_grid = {100, 100, 1000};
    CHECK_THROWS_AS(run_scenario(c), Error);
    c.n_grid = {1, 10, 100};
    CHECK_THROWS_AS(run_scenario(c), Error);
    c = ScenarioConfig::preset(Scenario::Yang);
    c.b = 1.5;
    CHECK_THROWS_AS(run_scenario(c), Error);
    c = ScenarioConfig::preset(Scenario::Yang);
    c.mc = McSettings{1, 1};
    CHECK_THROWS_AS(run_scenario(c), Error);
    CHECK_THROWS_AS(parse_grid("1e2:1e9:1"), Error);
    CHECK_THROWS_AS(parse_grid("1e2:1e4"), Error);
  }

  TEST_CASE("csv format and round trip") {
    const auto t = run_scenario(ScenarioConfig::preset(Scenario::DistanceCheck));
    const auto text = csv_of(t);
    CHECK(text.find("# scenario: DISTANCE_CHECK") != std::string::npos);
    CHECK(text.find("n,beta_n,d_n,power,accept_prob,scaled_bias,scaled_risk,sup_scaled_risk,c_n") !=
          std::string::npos);
    std::istringstream is(text);
    const auto back = read_csv(is);
    CHECK(back.metadata == t.metadata);
    CHECK(back.extra_columns == t.extra_columns);
    REQUIRE(back.rows.size() == t.rows.size());
    for (const auto& name : t.column_names()) {
      const auto a = t.column(name);
      const auto b = back.column(name);
      for (std::size_t i = 0; i < a.size(); ++i) {
        REQUIRE(a[i].has_value() == b[i].has_value());
        if (a[i]) CHECK(same_to_12_digits(*a[i], *b[i]));
      }
    }
    CHECK(csv_of(back) == text);
  }

  TEST_CASE("empty optional columns stay empty") {
    SweepTable t;
    SweepRow row;
    row.n = 10;
    row.power = 0.5;
    t.rows.push_back(row);
    CHECK(csv_of(t) == "n,beta_n,d_n,power,accept_prob,scaled_bias,scaled_risk,sup_scaled_risk\n10,,,0.5,,,,\n");
    CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_number(0.1 + 0.2) == "0.3");
  }

  TEST_CASE("emit to files") {
    const auto dir = std::filesystem::temp_directory_path() / "mmlab_lab_test";
    std::filesystem::create_directories(dir);
    const auto t = run_scenario(ScenarioConfig::preset(Scenario::Yang));
    emit_csv(t, dir / "yang.csv");
    std::ifstream in(dir / "yang.csv");
    const auto back = read_csv(in);
    CHECK(back.rows.back().scaled_bias > back.rows.front().scaled_bias);
    try {
      emit_csv(t, dir / "missing" / "x.csv");
      FAIL("expected an I/O error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Io);
      CHECK(std::string(e.what()).find("missing") != std::string::npos);
    }
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("plot data") {
    const auto c = ScenarioConfig::preset(Scenario::Contiguous);
    const auto t = run_scenario(c);
    std::ostringstream os;
    const std::vector<std::string> series{"scaled_bias"};
    write_plotdata(os, t, series);
    std::istringstream is(os.str());
    std::string line;
    std::size_t i = 0;
    double last = 0.0;
    while (std::getline(is, line)) {
      if (line.empty() || line[0] == '#') continue;
      std::istringstream fields(line);
      double x = 0.0;
      double y = 0.0;
      std::string extra;
      fields >> x >> y;
      const bool more = static_cast<bool>(fields >> extra);
      CHECK_FALSE(more);
      CHECK(std::abs(x - std::log10(static_cast<double>(c.n_grid[i]))) <= 1e-12);
      last = y;
      ++i;
    }
    CHECK(i == c.n_grid.size());
    CHECK(std::abs(last - 4.0) <= 0.2);
  }

  TEST_CASE("monte carlo columns are deterministic") {
    auto c = ScenarioConfig::preset(Scenario::Contiguous);
    c.n_grid = parse_grid("1e1:1e3:1");
    c.mc = McSettings{2000, 5};
    const auto a = csv_of(run_scenario(c));
    const auto b = csv_of(run_scenario(c));
    CHECK(a == b);
    CHECK(a.find("mc_scaled_risk_se") != std::string::npos);
  }
}
