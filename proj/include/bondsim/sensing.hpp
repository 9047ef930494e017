#pragma once

#include <optional>
#include <span>
#include <vector>

#include "bondsim/prmodel.hpp"
#include "bondsim/rng.hpp"

namespace bondsim {

// Probability that a busy channel is reported idle (miss) and that an idle
// channel is reported busy (false alarm). Defaults to perfect sensing.
struct SensingErrorModel {
  double p_miss = 0.0;
  double p_false_alarm = 0.0;

  void validate() const;
};

struct SensingSnapshot {
  double timestamp = 0.0;
  std::vector<bool> busy;
  // Present iff the channel is reported idle.
  std::vector<std::optional<double>> idle_elapsed;

  std::size_t width() const { return busy.size(); }
  // Channels reported idle, ascending.
  std::vector<int> idle_ids() const;
};

// Builds a snapshot from explicit per-channel elapsed idle times; a missing
// value marks the channel busy.
SensingSnapshot make_snapshot(double timestamp, std::span<const std::optional<double>> idle_elapsed);

/// Senses every channel at time t.
///
/// The reported busy flag is the true state flipped with the error model's
/// probabilities. Elapsed idle time comes from the true timeline; a busy
/// channel that is misreported as idle gets elapsed time 0.
SensingSnapshot sense(std::span<ChannelProcess> processes, double t, const SensingErrorModel& err,
                      RandomStream& rng);

// Transient occupancy probabilities of a channel that was idle at time 0.
double p_on(const ChannelParams& params, double t);
double p_off(const ChannelParams& params, double t);

// Remaining idle time estimate after t seconds of idleness: p_off(t) / lambda_x.
double rit(const ChannelParams& params, double t);

// The same estimate written as (lambda_x + lambda_y e^{-(lambda_x+lambda_y)t}) / (lambda_x (lambda_x+lambda_y)).
double rit_expanded(const ChannelParams& params, double t);

// The same estimate scaled by the mean ON period 1/lambda_x.
double rit_mean_scaled(const ChannelParams& params, double t);

}  // namespace bondsim
