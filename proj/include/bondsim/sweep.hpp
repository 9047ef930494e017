#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "bondsim/config.hpp"
#include "bondsim/metrics.hpp"

namespace bondsim {

// Cartesian product of channel counts, regimes, schemes and seeds. Every
// other SimConfig field comes from `base`.
struct SweepSpec {
  std::vector<int> channel_counts;
  std::vector<Regime> regimes;
  std::vector<Scheme> schemes;
  std::vector<std::uint64_t> seeds;
  SimConfig base;

  void validate() const;
  std::size_t tuple_count() const;
};

struct SweepRow {
  int channels = 0;
  Regime regime = Regime::kLow;
  Scheme scheme = Scheme::kRitcb;
  std::uint64_t seed = 0;
  MetricsReport report;
};

inline constexpr std::string_view kSweepCsvHeader =
    "channels,regime,scheme,seed,delivery_ratio,hir,switches,energy_j,lifetime_packets,delivered,interfered,"
    "dropped_no_bond,dropped_guard";

// Runs every tuple on up to `jobs` threads. Rows come back sorted by
// (regime name, scheme name, channels, seed) regardless of completion order.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, int jobs);

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows);

// Parses a file produced by write_sweep_csv. Only the columns present in the
// CSV are filled in the reports.
std::vector<SweepRow> read_sweep_csv(std::istream& in);

// Columns that get a seed-averaged plot-data file.
inline constexpr std::array<std::string_view, 5> kPlotMetrics = {"delivery_ratio", "hir", "switches", "energy_j",
                                                                 "lifetime_packets"};

// Seed averages of one metric per (regime, scheme, channels):
// header `regime,scheme,channels,seeds,mean`.
void write_plot_data(std::ostream& out, std::span<const SweepRow> rows, std::string_view metric);

}  // namespace bondsim
