#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "bondsim/config.hpp"
#include "bondsim/packet.hpp"

namespace bondsim {

struct MetricsReport {
  std::int64_t sent = 0;
  std::int64_t delivered = 0;
  std::int64_t interfered = 0;
  std::int64_t dropped_no_bond = 0;
  std::int64_t dropped_guard = 0;
  double delivery_ratio = 0.0;
  double hir = 0.0;  // harmful interference ratio
  std::int64_t switches = 0;
  double energy_consumed = 0.0;  // joules
  // Packets the initial energy would pay for; empty when nothing was transmitted.
  std::optional<std::int64_t> lifetime_packets;
};

// Transmit energy of one packet: bytes * 8 * energy per bit.
double per_packet_tx_energy(int packet_bytes, double tx_energy_per_bit);

/// Folds per-packet records into the run's metrics.
///
/// Only Delivered and Interfered packets spend transmit energy. Switches
/// count bond changes between packets plus one forced switch for every
/// Interfered packet, since the node must vacate the band.
MetricsReport aggregate(std::span<const PacketRecord> records, const SimConfig& config);

}  // namespace bondsim
