#include "bondsim/simkernel.hpp"

#include <cmath>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>
#include <fmt/ranges.h>

#include "bondsim/errors.hpp"

namespace bondsim {

std::string_view to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::kDelivered: return "delivered";
    case Outcome::kInterfered: return "interfered";
    case Outcome::kDroppedNoBond: return "dropped_no_bond";
    case Outcome::kDroppedGuard: return "dropped_guard";
  }
  return "?";
}

void SimConfig::validate() const {
  if (n_channels < kMinChannels || n_channels > kMaxChannels) {
    throw ConfigError(fmt::format("channels must be in [{},{}]", kMinChannels, kMaxChannels));
  }
  if (channel_table && static_cast<int>(channel_table->size()) < n_channels) {
    throw ConfigError(fmt::format("channel table has {} channels, fewer than the {} requested",
                                  channel_table->size(), n_channels));
  }
  if (n_packets <= 0) throw ConfigError("packets must be positive");
  if (packet_bytes <= 0) throw ConfigError("packet size must be positive");
  if (!(packet_airtime > 0.0) || !std::isfinite(packet_airtime)) throw ConfigError("airtime must be positive");
  if (!(inter_packet_gap >= 0.0) || !std::isfinite(inter_packet_gap)) throw ConfigError("gap must be >= 0");
  if (!(initial_energy > 0.0)) throw ConfigError("initial energy must be positive");
  if (!(tx_energy_per_bit > 0.0)) throw ConfigError("transmit energy per bit must be positive");
  if (bond_size != 2 && bond_size != 3) throw ConfigError("bond-size must be 2 or 3");
  sensing_error.validate();
}

std::vector<ChannelParams> SimConfig::channels() const {
  if (channel_table) {
    return {channel_table->begin(), channel_table->begin() + n_channels};
  }
  return truncate_regime(regime_preset(regime), n_channels);
}

double packet_airtime(const SimConfig& config, int bond_width) {
  if (!config.scale_airtime_by_width) return config.packet_airtime;
  return config.packet_airtime * 2.0 / bond_width;
}

double advance_clock(double previous, double airtime, const SimConfig& config) {
  return previous + airtime + config.inter_packet_gap;
}

Outcome resolve_transmission(Scheme scheme, const Bond& bond, std::span<ChannelProcess> truth, double t,
                             double airtime) {
  if (!interference_capable(scheme)) {
    return ritcb_ip_guard(bond, truth, t, airtime) == GuardDecision::kProceed ? Outcome::kDelivered
                                                                              : Outcome::kDroppedGuard;
  }
  return bond_clashes(bond, truth, t, airtime) ? Outcome::kInterfered : Outcome::kDelivered;
}

RunResult run(const SimConfig& config) {
  config.validate();
  const auto params = config.channels();
  auto processes = make_processes(params, config.seed);
  BondingScheme scheme(config.scheme, config.seed);
  RandomStream sensing_rng(config.seed, StreamKind::kSensing, 0);

  RunResult result;
  result.records.reserve(static_cast<std::size_t>(config.n_packets));

  double t = 0.0;
  double last_airtime = config.packet_airtime;
  std::optional<Bond> last_bond;
  for (std::int64_t i = 0; i < config.n_packets; ++i) {
    if (i > 0) t = advance_clock(t, last_airtime, config);

    const auto snapshot = sense(processes, t, config.sensing_error, sensing_rng);
    auto selection = scheme.select(snapshot, params, config.bond_size);

    PacketRecord& rec = result.records.emplace_back();
    rec.index = i;
    rec.time = t;
    if (!selection.bond) {
      rec.outcome = Outcome::kDroppedNoBond;
      last_airtime = config.packet_airtime;
      continue;
    }
    rec.bond = std::move(selection.bond);
    const double airtime = packet_airtime(config, rec.bond->width());
    rec.outcome = resolve_transmission(config.scheme, *rec.bond, processes, t, airtime);
    rec.switched = last_bond && !last_bond->same_channels(*rec.bond);
    last_bond = rec.bond;
    last_airtime = airtime;
  }

  result.report = aggregate(result.records, config);
  return result;
}

void write_event_log(std::ostream& out, std::span<const PacketRecord> records) {
  out << "index,time,bond,outcome,switched\n";
  for (const auto& rec : records) {
    const std::string bond = rec.bond ? fmt::format("{}", fmt::join(rec.bond->channel_ids(), "-")) : "-";
    fmt::print(out, "{},{:.6f},{},{},{}\n", rec.index, rec.time, bond, to_string(rec.outcome),
               rec.switched ? 1 : 0);
  }
}

}  // namespace bondsim
