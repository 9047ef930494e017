#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "bondsim/config.hpp"
#include "bondsim/metrics.hpp"
#include "bondsim/packet.hpp"

namespace bondsim {

struct RunResult {
  MetricsReport report;
  std::vector<PacketRecord> records;
};

/// Simulates one transmitter-receiver pair sending config.n_packets packets.
///
/// Per packet: sense all channels, let the scheme pick a bond, then check
/// the bond against the true channel timeline over the packet's airtime.
/// Fully determined by the config (including its seed).
RunResult run(const SimConfig& config);

// Interference-capable schemes transmit into a clash; RITCB-IP's guard drops
// the packet instead.
Outcome resolve_transmission(Scheme scheme, const Bond& bond, std::span<ChannelProcess> truth, double t,
                             double airtime);

// Next transmit attempt after one that started at `previous` and occupied
// `airtime` seconds.
double advance_clock(double previous, double airtime, const SimConfig& config);

// Airtime of a packet sent on a bond of the given width.
double packet_airtime(const SimConfig& config, int bond_width);

// One line per record: index,time,bond,outcome,switched
void write_event_log(std::ostream& out, std::span<const PacketRecord> records);

}  // namespace bondsim
