#include "bondsim/sensing.hpp"

#include <cmath>

#include <fmt/format.h>

#include "bondsim/errors.hpp"

namespace bondsim {

void SensingErrorModel::validate() const {
  auto in_unit = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!in_unit(p_miss)) throw ConfigError(fmt::format("p-miss must be in [0,1] (got {})", p_miss));
  if (!in_unit(p_false_alarm)) {
    throw ConfigError(fmt::format("p-false-alarm must be in [0,1] (got {})", p_false_alarm));
  }
}

std::vector<int> SensingSnapshot::idle_ids() const {
  std::vector<int> ids;
  for (std::size_t i = 0; i < busy.size(); ++i) {
    if (!busy[i]) ids.push_back(static_cast<int>(i));
  }
  return ids;
}

SensingSnapshot make_snapshot(double timestamp, std::span<const std::optional<double>> idle_elapsed) {
  SensingSnapshot snap;
  snap.timestamp = timestamp;
  snap.busy.reserve(idle_elapsed.size());
  for (const auto& e : idle_elapsed) {
    if (e && *e < 0.0) throw ContractViolation("idle elapsed time must be non-negative");
    snap.busy.push_back(!e.has_value());
  }
  snap.idle_elapsed.assign(idle_elapsed.begin(), idle_elapsed.end());
  return snap;
}

SensingSnapshot sense(std::span<ChannelProcess> processes, double t, const SensingErrorModel& err,
                      RandomStream& rng) {
  SensingSnapshot snap;
  snap.timestamp = t;
  snap.busy.reserve(processes.size());
  snap.idle_elapsed.reserve(processes.size());
  for (auto& proc : processes) {
    const bool truly_busy = proc.state_at(t) == Phase::kOn;
    // One draw per channel per call, whatever the state.
    const double u = rng.uniform();
    const bool flipped = truly_busy ? (u < err.p_miss) : (u < err.p_false_alarm);
    const bool reported_busy = truly_busy != flipped;
    snap.busy.push_back(reported_busy);
    if (reported_busy) {
      snap.idle_elapsed.emplace_back(std::nullopt);
    } else {
      snap.idle_elapsed.emplace_back(truly_busy ? 0.0 : t - proc.phase_start());
    }
  }
  return snap;
}

namespace {

void require_time(double t) {
  if (!(t >= 0.0)) throw ContractViolation(fmt::format("time argument must be >= 0 (got {})", t));
}

}  // namespace

double p_on(const ChannelParams& params, double t) {
  require_time(t);
  const double u = params.utilization();
  return u - u * std::exp(-params.total_rate() * t);
}

double p_off(const ChannelParams& params, double t) {
  require_time(t);
  const double u = params.utilization();
  return (1.0 - u) + u * std::exp(-params.total_rate() * t);
}

double rit(const ChannelParams& params, double t) { return p_off(params, t) / params.lambda_x(); }

double rit_expanded(const ChannelParams& params, double t) {
  require_time(t);
  const double lx = params.lambda_x();
  const double ly = params.lambda_y();
  return (lx + ly * std::exp(-(lx + ly) * t)) / (lx * (lx + ly));
}

double rit_mean_scaled(const ChannelParams& params, double t) {
  require_time(t);
  const double lx = params.lambda_x();
  const double ly = params.lambda_y();
  return params.mean_on() * ((lx + ly * std::exp(-(lx + ly) * t)) / (lx + ly));
}

}  // namespace bondsim
