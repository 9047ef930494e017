#pragma once

// Primary-radio (PR) activity model: each channel alternates between ON
// (occupied by a PR node) and OFF (idle) with exponentially distributed
// period lengths.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "bondsim/rng.hpp"

namespace bondsim {

enum class Phase { kOn, kOff };

enum class Regime { kLow, kHigh, kLong, kIntermittent };

inline constexpr std::array<Regime, 4> kAllRegimes = {
    Regime::kLow, Regime::kHigh, Regime::kLong, Regime::kIntermittent};

std::string_view to_string(Regime regime);
std::string_view to_string(Phase phase);

// Accepts lower-case names: low, high, long, intermittent.
Regime parse_regime(std::string_view name);

/// Rate parameters of one channel.
///
/// lambda_x is the rate of the ON-period length distribution and lambda_y the
/// rate of the OFF-period length distribution, so the mean ON period is
/// 1/lambda_x and the long-run busy fraction is lambda_y / (lambda_x + lambda_y).
class ChannelParams {
 public:
  // Throws ConfigError unless both rates are positive and finite.
  static ChannelParams from_rates(double lambda_x, double lambda_y);

  double lambda_x() const { return lambda_x_; }
  double lambda_y() const { return lambda_y_; }
  double mean_on() const { return 1.0 / lambda_x_; }
  double mean_off() const { return 1.0 / lambda_y_; }
  double utilization() const { return lambda_y_ / (lambda_x_ + lambda_y_); }
  double total_rate() const { return lambda_x_ + lambda_y_; }

  bool operator==(const ChannelParams&) const = default;

 private:
  ChannelParams(double lambda_x, double lambda_y) : lambda_x_(lambda_x), lambda_y_(lambda_y) {}

  double lambda_x_;
  double lambda_y_;
};

// One printed column of a regime table. The rates are authoritative; the
// printed period means and utilization are kept only for validation.
struct TableEntry {
  ChannelParams params;
  double printed_mean_on;
  double printed_mean_off;
  double printed_utilization;
};

inline constexpr int kPresetChannels = 15;
inline constexpr int kMinChannels = 3;
inline constexpr int kMaxChannels = 15;

struct RegimePreset {
  Regime regime;
  std::array<TableEntry, kPresetChannels> entries;

  std::vector<ChannelParams> channels() const;
};

const RegimePreset& regime_preset(Regime regime);
const RegimePreset& regime_preset(std::string_view name);

// First n channels of the preset, n in [3, 15].
std::vector<ChannelParams> truncate_regime(const RegimePreset& preset, int n);

// Reads an override table: one channel per line as `id lambda_x lambda_y`.
// Blank lines and `#` comments are ignored; ids must cover 0..k-1.
std::vector<ChannelParams> read_channel_table(std::istream& in);

double sample_period(const ChannelParams& params, Phase phase, RandomStream& rng);

/// Live renewal-process state of one channel.
///
/// Every channel starts OFF at t = 0 with a freshly drawn OFF period. Time
/// only moves forward: queries must not precede the current phase start.
/// The timeline depends only on (master seed, channel id, params), never on
/// the query pattern.
class ChannelProcess {
 public:
  ChannelProcess(int channel_id, ChannelParams params, std::uint64_t master_seed);

  int channel_id() const { return channel_id_; }
  const ChannelParams& params() const { return params_; }
  Phase phase() const { return phase_; }
  double phase_start() const { return phase_start_; }
  double next_transition() const { return next_transition_; }
  std::uint64_t transitions() const { return transitions_; }

  // Advances through as many transitions as needed and returns the phase
  // containing t (a transition instant belongs to the new phase).
  Phase state_at(double t);

  // Seconds since the most recent transition to OFF. Requires the channel to
  // be OFF at t.
  double idle_elapsed_at(double t);

  // True when the channel is ON at any instant of [t0, t1]. Advances only to t0.
  bool busy_during(double t0, double t1);

  // Moves to the next phase unconditionally.
  void advance();

 private:
  int channel_id_;
  ChannelParams params_;
  RandomStream rng_;
  Phase phase_ = Phase::kOff;
  double phase_start_ = 0.0;
  double next_transition_ = 0.0;
  std::uint64_t transitions_ = 0;
};

std::vector<ChannelProcess> make_processes(std::span<const ChannelParams> params,
                                           std::uint64_t master_seed);

// Long-run statistics of one channel over [0, horizon].
struct OccupancyStats {
  double on_fraction = 0.0;
  double on_fraction_stderr = 0.0;  // batch-means estimate
  double mean_on_duration = 0.0;    // over ON periods completed inside the horizon
  std::uint64_t on_periods = 0;
};

OccupancyStats measure_occupancy(ChannelProcess& process, double horizon, int batches);

}  // namespace bondsim
