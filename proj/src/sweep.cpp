#include "bondsim/sweep.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <istream>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>
#include <tuple>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "bondsim/errors.hpp"
#include "bondsim/simkernel.hpp"

namespace bondsim {

void SweepSpec::validate() const {
  if (channel_counts.empty() || regimes.empty() || schemes.empty() || seeds.empty()) {
    throw ConfigError("sweep needs at least one channel count, regime, scheme and seed");
  }
  for (int n : channel_counts) {
    if (n < kMinChannels || n > kMaxChannels) {
      throw ConfigError(fmt::format("channels must be in [{},{}]", kMinChannels, kMaxChannels));
    }
  }
}

std::size_t SweepSpec::tuple_count() const {
  return channel_counts.size() * regimes.size() * schemes.size() * seeds.size();
}

namespace {

auto sort_key(const SweepRow& r) { return std::tuple(to_string(r.regime), to_string(r.scheme), r.channels, r.seed); }

}  // namespace

std::vector<SweepRow> run_sweep(const SweepSpec& spec, int jobs) {
  spec.validate();
  std::vector<SweepRow> rows;
  rows.reserve(spec.tuple_count());
  for (Regime regime : spec.regimes) {
    for (Scheme scheme : spec.schemes) {
      for (int channels : spec.channel_counts) {
        for (std::uint64_t seed : spec.seeds) rows.push_back(SweepRow{channels, regime, scheme, seed, {}});
      }
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return sort_key(a) < sort_key(b); });

  // Surface configuration errors before any worker starts.
  {
    SimConfig probe = spec.base;
    probe.n_channels = spec.channel_counts.front();
    probe.validate();
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      try {
        SimConfig cfg = spec.base;
        cfg.n_channels = rows[i].channels;
        cfg.regime = rows[i].regime;
        cfg.scheme = rows[i].scheme;
        cfg.seed = rows[i].seed;
        rows[i].report = run(cfg).report;
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  const auto n_threads = static_cast<std::size_t>(std::clamp<std::size_t>(
      static_cast<std::size_t>(std::max(jobs, 1)), 1, std::max<std::size_t>(rows.size(), 1)));
  std::vector<std::jthread> threads;
  for (std::size_t k = 1; k < n_threads; ++k) threads.emplace_back(worker);
  worker();
  threads.clear();
  if (failure) std::rethrow_exception(failure);
  return rows;
}

namespace {

std::string lifetime_field(const MetricsReport& m) {
  return m.lifetime_packets ? std::to_string(*m.lifetime_packets) : std::string("inf");
}

}  // namespace

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
  out << kSweepCsvHeader << '\n';
  for (const auto& r : rows) {
    const auto& m = r.report;
    fmt::print(out, "{},{},{},{},{},{},{},{},{},{},{},{},{}\n", r.channels, to_string(r.regime), to_string(r.scheme),
               r.seed, m.delivery_ratio, m.hir, m.switches, m.energy_consumed, lifetime_field(m), m.delivered,
               m.interfered, m.dropped_no_bond, m.dropped_guard);
  }
}

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) return parts;
    start = pos + 1;
  }
}

template <typename T>
T parse_field(std::string_view text, int line_no) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError(fmt::format("sweep CSV line {}: bad field '{}'", line_no, text));
  }
  return value;
}

}  // namespace

std::vector<SweepRow> read_sweep_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kSweepCsvHeader) throw ConfigError("sweep CSV header mismatch");
  std::vector<SweepRow> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 13) throw ConfigError(fmt::format("sweep CSV line {}: expected 13 fields", line_no));
    SweepRow r;
    r.channels = parse_field<int>(f[0], line_no);
    r.regime = parse_regime(f[1]);
    r.scheme = parse_scheme(f[2]);
    r.seed = parse_field<std::uint64_t>(f[3], line_no);
    auto& m = r.report;
    m.delivery_ratio = parse_field<double>(f[4], line_no);
    m.hir = parse_field<double>(f[5], line_no);
    m.switches = parse_field<std::int64_t>(f[6], line_no);
    m.energy_consumed = parse_field<double>(f[7], line_no);
    if (f[8] != "inf") m.lifetime_packets = parse_field<std::int64_t>(f[8], line_no);
    m.delivered = parse_field<std::int64_t>(f[9], line_no);
    m.interfered = parse_field<std::int64_t>(f[10], line_no);
    m.dropped_no_bond = parse_field<std::int64_t>(f[11], line_no);
    m.dropped_guard = parse_field<std::int64_t>(f[12], line_no);
    m.sent = m.delivered + m.interfered + m.dropped_no_bond + m.dropped_guard;
    rows.push_back(r);
  }
  return rows;
}

namespace {

double metric_value(const MetricsReport& m, std::string_view metric) {
  if (metric == "delivery_ratio") return m.delivery_ratio;
  if (metric == "hir") return m.hir;
  if (metric == "switches") return static_cast<double>(m.switches);
  if (metric == "energy_j") return m.energy_consumed;
  if (metric == "lifetime_packets") {
    return m.lifetime_packets ? static_cast<double>(*m.lifetime_packets) : std::numeric_limits<double>::infinity();
  }
  throw ContractViolation(fmt::format("unknown plot metric '{}'", metric));
}

}  // namespace

void write_plot_data(std::ostream& out, std::span<const SweepRow> rows, std::string_view metric) {
  struct Acc {
    double sum = 0.0;
    int seeds = 0;
  };
  // Keyed the same way the sweep CSV is sorted.
  std::map<std::tuple<std::string_view, std::string_view, int>, Acc> groups;
  for (const auto& r : rows) {
    auto& acc = groups[{to_string(r.regime), to_string(r.scheme), r.channels}];
    acc.sum += metric_value(r.report, metric);
    ++acc.seeds;
  }
  out << "regime,scheme,channels,seeds,mean\n";
  for (const auto& [key, acc] : groups) {
    const auto& [regime, scheme, channels] = key;
    fmt::print(out, "{},{},{},{},{}\n", regime, scheme, channels, acc.seeds, acc.sum / acc.seeds);
  }
}

}  // namespace bondsim
