#include "bondsim/prmodel.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "bondsim/errors.hpp"

namespace bondsim {

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::kLow: return "low";
    case Regime::kHigh: return "high";
    case Regime::kLong: return "long";
    case Regime::kIntermittent: return "intermittent";
  }
  return "?";
}

std::string_view to_string(Phase phase) { return phase == Phase::kOn ? "ON" : "OFF"; }

Regime parse_regime(std::string_view name) {
  for (Regime r : kAllRegimes) {
    if (to_string(r) == name) return r;
  }
  throw ConfigError(fmt::format("unknown regime '{}'; valid: low, high, long, intermittent", name));
}

ChannelParams ChannelParams::from_rates(double lambda_x, double lambda_y) {
  if (!(lambda_x > 0.0) || !(lambda_y > 0.0) || !std::isfinite(lambda_x) || !std::isfinite(lambda_y)) {
    throw ConfigError(fmt::format("channel rates must be positive and finite (lambda_x={}, lambda_y={})",
                                  lambda_x, lambda_y));
  }
  return ChannelParams(lambda_x, lambda_y);
}

std::vector<ChannelParams> RegimePreset::channels() const {
  std::vector<ChannelParams> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.params);
  return out;
}

namespace {

using Row = std::array<double, kPresetChannels>;

// Printed rows of a regime table, in the order the tables list them.
struct PrintedTable {
  Row mean_on;
  Row mean_off;
  Row lambda_x;
  Row lambda_y;
  Row utilization;
};

constexpr PrintedTable kLowTable{
    {0.83, 0.77, 0.42, 0.31, 0.53, 0.27, 0.36, 0.2, 0.26, 0.24, 0.13, 0.15, 0.18, 0.48, 0.3},
    {2.5, 1.11, 10.0, 1.67, 3.33, 10.0, 4.0, 9.09, 3.45, 2.08, 5.26, 3.7, 1.0, 1.61, 2.63},
    {1.20, 1.29, 2.38, 3.22, 1.88, 3.70, 2.77, 5, 3.84, 4.16, 7.69, 6.66, 5.55, 2.08, 3.33},
    {0.4, 0.90, 0.1, 0.59, 0.30, 0.1, 0.25, 0.11, 0.28, 0.48, 0.19, 0.27, 1, 0.62, 0.38},
    {0.24, 0.40, 0.04, 0.15, 0.13, 0.02, 0.08, 0.02, 0.07, 0.10, 0.02, 0.03, 0.15, 0.22, 0.10},
};

constexpr PrintedTable kHighTable{
    {3.33, 1.11, 10.0, 5.0, 2.5, 1.67, 2.86, 5.56, 5.88, 4.35, 1.85, 1.3, 1.0, 1.23, 2.38},
    {0.83, 0.77, 0.42, 0.31, 0.53, 0.27, 0.36, 0.2, 0.26, 0.24, 0.13, 0.15, 0.18, 0.48, 0.3},
    {0.30, 0.90, 0.1, 0.2, 0.4, 0.59, 0.34, 0.17, 0.17, 0.22, 0.54, 0.76, 1, 0.81, 0.42},
    {1.20, 1.29, 2.38, 3.22, 1.88, 3.70, 2.77, 5, 3.84, 4.16, 7.69, 6.66, 5.55, 2.08, 3.33},
    {0.80, 0.59, 0.95, 0.94, 0.82, 0.86, 0.88, 0.96, 0.95, 0.94, 0.93, 0.89, 0.84, 0.71, 0.88},
};

constexpr PrintedTable kLongTable{
    {3.33, 1.11, 10.0, 5.0, 2.5, 1.67, 2.86, 5.56, 5.88, 4.35, 1.85, 1.3, 1.0, 1.23, 2.38},
    {2.5, 1.11, 10.0, 1.67, 3.33, 10.0, 4.0, 9.09, 3.45, 2.08, 5.26, 3.7, 1.0, 1.61, 2.63},
    {0.30, 0.90, 0.1, 0.2, 0.4, 0.59, 0.34, 0.17, 0.17, 0.22, 0.54, 0.76, 1, 0.81, 0.42},
    {0.4, 0.90, 0.1, 0.59, 0.30, 0.1, 0.25, 0.11, 0.28, 0.48, 0.19, 0.27, 1, 0.62, 0.38},
    {0.57, 0.5, 0.5, 0.74, 0.42, 0.14, 0.41, 0.37, 0.63, 0.67, 0.26, 0.26, 0.5, 0.43, 0.47},
};

constexpr PrintedTable kIntermittentTable{
    {0.83, 0.77, 0.42, 0.31, 0.53, 0.27, 0.36, 0.2, 0.26, 0.24, 0.13, 0.15, 0.18, 0.48, 0.3},
    {0.27, 0.36, 0.2, 0.26, 0.24, 0.83, 0.77, 0.42, 0.31, 0.53, 0.4, 0.29, 0.15, 0.53, 0.2},
    {1.20, 1.29, 2.38, 3.22, 1.88, 3.70, 2.77, 5, 3.84, 4.16, 7.69, 6.66, 5.55, 2.08, 3.33},
    {3.70, 2.77, 5, 3.84, 4.16, 1.20, 1.29, 2.38, 3.22, 1.88, 2.5, 3.44, 6.66, 1.88, 5},
    {0.75, 0.68, 0.67, 0.54, 0.68, 0.24, 0.31, 0.32, 0.45, 0.31, 0.24, 0.34, 0.54, 0.47, 0.6},
};

RegimePreset build_preset(Regime regime, const PrintedTable& t) {
  auto make = [&](std::size_t i) {
    return TableEntry{ChannelParams::from_rates(t.lambda_x[i], t.lambda_y[i]), t.mean_on[i],
                      t.mean_off[i], t.utilization[i]};
  };
  return RegimePreset{regime,
                      {make(0), make(1), make(2), make(3), make(4), make(5), make(6), make(7),
                       make(8), make(9), make(10), make(11), make(12), make(13), make(14)}};
}

}  // namespace

const RegimePreset& regime_preset(Regime regime) {
  static const std::array<RegimePreset, 4> presets = {
      build_preset(Regime::kLow, kLowTable),
      build_preset(Regime::kHigh, kHighTable),
      build_preset(Regime::kLong, kLongTable),
      build_preset(Regime::kIntermittent, kIntermittentTable),
  };
  return presets[static_cast<std::size_t>(regime)];
}

const RegimePreset& regime_preset(std::string_view name) { return regime_preset(parse_regime(name)); }

std::vector<ChannelParams> truncate_regime(const RegimePreset& preset, int n) {
  if (n < kMinChannels || n > kMaxChannels) {
    throw ConfigError(fmt::format("channels must be in [{},{}] (got {})", kMinChannels, kMaxChannels, n));
  }
  std::vector<ChannelParams> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out.push_back(preset.entries[static_cast<std::size_t>(i)].params);
  return out;
}

std::vector<ChannelParams> read_channel_table(std::istream& in) {
  std::map<int, ChannelParams> by_id;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    int id = 0;
    double lx = 0.0;
    double ly = 0.0;
    if (!(fields >> id)) continue;  // blank line
    std::string extra;
    if (!(fields >> lx >> ly) || (fields >> extra)) {
      throw ConfigError(fmt::format("channel table line {}: expected `id lambda_x lambda_y`", line_no));
    }
    if (by_id.contains(id)) throw ConfigError(fmt::format("channel table line {}: duplicate id {}", line_no, id));
    by_id.emplace(id, ChannelParams::from_rates(lx, ly));
  }
  std::vector<ChannelParams> out;
  for (const auto& [id, params] : by_id) {
    if (id != static_cast<int>(out.size())) {
      throw ConfigError(fmt::format("channel table ids must cover 0..{} without gaps", by_id.size() - 1));
    }
    out.push_back(params);
  }
  if (out.empty()) throw ConfigError("channel table is empty");
  return out;
}

double sample_period(const ChannelParams& params, Phase phase, RandomStream& rng) {
  return rng.exponential(phase == Phase::kOn ? params.lambda_x() : params.lambda_y());
}

ChannelProcess::ChannelProcess(int channel_id, ChannelParams params, std::uint64_t master_seed)
    : channel_id_(channel_id),
      params_(params),
      rng_(master_seed, StreamKind::kChannel, static_cast<std::uint64_t>(channel_id)) {
  next_transition_ = sample_period(params_, Phase::kOff, rng_);
}

void ChannelProcess::advance() {
  phase_start_ = next_transition_;
  phase_ = (phase_ == Phase::kOn) ? Phase::kOff : Phase::kOn;
  next_transition_ = phase_start_ + sample_period(params_, phase_, rng_);
  // A period shorter than the ulp of the current time would not move the clock.
  if (!(next_transition_ > phase_start_)) next_transition_ = std::nextafter(phase_start_, HUGE_VAL);
  ++transitions_;
}

Phase ChannelProcess::state_at(double t) {
  if (t < phase_start_) {
    throw ContractViolation(fmt::format("channel {}: query at t={} precedes phase start {}", channel_id_, t,
                                        phase_start_));
  }
  while (t >= next_transition_) advance();
  return phase_;
}

double ChannelProcess::idle_elapsed_at(double t) {
  if (state_at(t) != Phase::kOff) {
    throw ContractViolation(fmt::format("channel {} is busy at t={}", channel_id_, t));
  }
  return t - phase_start_;
}

bool ChannelProcess::busy_during(double t0, double t1) {
  if (state_at(t0) == Phase::kOn) return true;
  return next_transition_ <= t1;
}

std::vector<ChannelProcess> make_processes(std::span<const ChannelParams> params, std::uint64_t master_seed) {
  std::vector<ChannelProcess> out;
  out.reserve(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) out.emplace_back(static_cast<int>(i), params[i], master_seed);
  return out;
}

OccupancyStats measure_occupancy(ChannelProcess& process, double horizon, int batches) {
  if (!(horizon > 0.0) || batches < 2) throw ContractViolation("measure_occupancy needs horizon > 0 and >= 2 batches");
  if (process.phase_start() != 0.0 || process.transitions() != 0) {
    throw ContractViolation("measure_occupancy expects a fresh process");
  }
  const double batch_len = horizon / batches;
  std::vector<double> on_time(static_cast<std::size_t>(batches), 0.0);

  // Spreads the ON interval [a, b) across the batches it overlaps.
  auto credit = [&](double a, double b) {
    auto k = static_cast<std::size_t>(std::min<double>(a / batch_len, batches - 1));
    while (a < b && k < on_time.size()) {
      const double edge = std::min(b, (static_cast<double>(k) + 1.0) * batch_len);
      on_time[k] += edge - a;
      a = edge;
      ++k;
    }
  };

  double on_sum = 0.0;
  std::uint64_t on_count = 0;
  while (process.phase_start() < horizon) {
    if (process.phase() == Phase::kOn) {
      const double end = process.next_transition();
      credit(process.phase_start(), std::min(end, horizon));
      if (end <= horizon) {
        on_sum += end - process.phase_start();
        ++on_count;
      }
    }
    process.advance();
  }

  double mean = 0.0;
  for (double x : on_time) mean += x / batch_len;
  mean /= batches;
  double var = 0.0;
  for (double x : on_time) var += (x / batch_len - mean) * (x / batch_len - mean);
  var /= (batches - 1);

  OccupancyStats stats;
  stats.on_fraction = mean;
  stats.on_fraction_stderr = std::sqrt(var / batches);
  stats.mean_on_duration = on_count > 0 ? on_sum / static_cast<double>(on_count) : 0.0;
  stats.on_periods = on_count;
  return stats;
}

}  // namespace bondsim
