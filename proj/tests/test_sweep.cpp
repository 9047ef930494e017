#include <doctest.h>

#include <map>
#include <sstream>

#include "bondsim/errors.hpp"
#include "bondsim/simkernel.hpp"
#include "bondsim/sweep.hpp"

using namespace bondsim;

namespace {

SweepSpec spec_of(std::vector<int> channels, std::vector<Regime> regimes, std::vector<Scheme> schemes,
                  std::vector<std::uint64_t> seeds, std::int64_t packets) {
  SweepSpec s;
  s.channel_counts = std::move(channels);
  s.regimes = std::move(regimes);
  s.schemes = std::move(schemes);
  s.seeds = std::move(seeds);
  s.base.n_packets = packets;
  return s;
}

std::string csv_of(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  write_sweep_csv(out, rows);
  return out.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("one tuple gives a header and one row") {
  const auto rows = run_sweep(spec_of({15}, {Regime::kLow}, {Scheme::kRitcb}, {1}, 10000), 1);
  REQUIRE(rows.size() == 1);
  const auto lines = lines_of(csv_of(rows));
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] ==
        "channels,regime,scheme,seed,delivery_ratio,hir,switches,energy_j,lifetime_packets,delivered,interfered,"
        "dropped_no_bond,dropped_guard");
  CHECK(lines[1].starts_with("15,low,ritcb,1,"));
}

TEST_CASE("rows match stand-alone runs") {
  const auto rows = run_sweep(spec_of({3, 9}, {Regime::kHigh}, {Scheme::kPracb, Scheme::kKnows}, {2, 3}, 500), 2);
  REQUIRE(rows.size() == 8);
  for (const auto& row : rows) {
    SimConfig c;
    c.n_packets = 500;
    c.n_channels = row.channels;
    c.regime = row.regime;
    c.scheme = row.scheme;
    c.seed = row.seed;
    const auto expected = run(c).report;
    REQUIRE(row.report.delivered == expected.delivered);
    REQUIRE(row.report.interfered == expected.interfered);
    REQUIRE(row.report.switches == expected.switches);
  }
}

TEST_CASE("sweep output is byte-identical across reruns and thread counts") {
  const auto spec = spec_of({3, 8, 15}, {kAllRegimes.begin(), kAllRegimes.end()},
                            {kAllSchemes.begin(), kAllSchemes.end()}, {1, 2}, 200);
  const auto one = csv_of(run_sweep(spec, 1));
  CHECK(one == csv_of(run_sweep(spec, 1)));
  CHECK(one == csv_of(run_sweep(spec, 3)));
  CHECK(one == csv_of(run_sweep(spec, 16)));
}

TEST_CASE("full grid row count and ordering") {
  std::vector<int> channels;
  for (int n = 3; n <= 15; ++n) channels.push_back(n);
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t s = 1; s <= 10; ++s) seeds.push_back(s);
  const auto spec = spec_of(channels, {kAllRegimes.begin(), kAllRegimes.end()},
                            {kAllSchemes.begin(), kAllSchemes.end()}, seeds, 20);
  CHECK(spec.tuple_count() == 3120);
  const auto rows = run_sweep(spec, 4);
  REQUIRE(rows.size() == 3120);
  CHECK(lines_of(csv_of(rows)).size() == 3121);

  CHECK(to_string(rows.front().regime) == "high");
  CHECK(to_string(rows.front().scheme) == "agile");
  CHECK(to_string(rows.back().regime) == "low");
  CHECK(to_string(rows.back().scheme) == "swa");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& a = rows[i - 1];
    const auto& b = rows[i];
    const auto ka = std::tuple(std::string(to_string(a.regime)), std::string(to_string(a.scheme)), a.channels, a.seed);
    const auto kb = std::tuple(std::string(to_string(b.regime)), std::string(to_string(b.scheme)), b.channels, b.seed);
    REQUIRE(ka < kb);
  }
}

TEST_CASE("CSV round trip and plot data") {
  const auto rows = run_sweep(spec_of({5, 6}, {Regime::kLong, Regime::kLow}, {Scheme::kRitcb, Scheme::kRitcbIp},
                                      {1, 2, 3}, 300),
                              2);
  const auto text = csv_of(rows);
  std::istringstream in(text);
  const auto back = read_sweep_csv(in);
  REQUIRE(back.size() == rows.size());
  CHECK(csv_of(back) == text);

  for (auto metric : kPlotMetrics) {
    std::ostringstream a, b;
    write_plot_data(a, rows, metric);
    write_plot_data(b, back, metric);
    CHECK(a.str() == b.str());
    const auto lines = lines_of(a.str());
    REQUIRE(lines.size() == 1 + 8);
    CHECK(lines[0] == "regime,scheme,channels,seeds,mean");
  }

  // Independent mean of the delivery ratio for one group.
  double sum = 0;
  int count = 0;
  for (const auto& r : rows) {
    if (r.regime == Regime::kLong && r.scheme == Scheme::kRitcb && r.channels == 5) {
      sum += r.report.delivery_ratio;
      ++count;
    }
  }
  std::ostringstream dr;
  write_plot_data(dr, rows, "delivery_ratio");
  const auto first = lines_of(dr.str())[1];
  CHECK(first.starts_with("long,ritcb,5,3,"));
  CHECK(std::stod(first.substr(first.rfind(',') + 1)) == doctest::Approx(sum / count).epsilon(1e-12));
}

TEST_CASE("unbounded lifetime is written as inf") {
  SweepSpec spec = spec_of({3}, {Regime::kLow}, {Scheme::kRitcbIp}, {1}, 1);
  // Every idle channel is reported busy, so no bond ever forms.
  spec.base.sensing_error.p_false_alarm = 1.0;
  const auto rows = run_sweep(spec, 1);
  const auto text = csv_of(rows);
  CHECK(text.find(",inf,") != std::string::npos);
  std::istringstream in(text);
  CHECK_FALSE(read_sweep_csv(in).front().report.lifetime_packets);
}

TEST_CASE("invalid sweeps are rejected") {
  CHECK_THROWS_AS(run_sweep(spec_of({}, {Regime::kLow}, {Scheme::kSwa}, {1}, 10), 1), ConfigError);
  CHECK_THROWS_AS(run_sweep(spec_of({2}, {Regime::kLow}, {Scheme::kSwa}, {1}, 10), 1), ConfigError);
  CHECK_THROWS_AS(run_sweep(spec_of({3}, {Regime::kLow}, {Scheme::kSwa}, {1}, 0), 1), ConfigError);
  std::istringstream bad("not,a,sweep\n");
  CHECK_THROWS_AS(read_sweep_csv(bad), ConfigError);
}
