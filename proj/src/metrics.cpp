#include "bondsim/metrics.hpp"

#include <cmath>

#include <fmt/format.h>

#include "bondsim/errors.hpp"

namespace bondsim {

double per_packet_tx_energy(int packet_bytes, double tx_energy_per_bit) {
  return static_cast<double>(packet_bytes) * 8.0 * tx_energy_per_bit;
}

MetricsReport aggregate(std::span<const PacketRecord> records, const SimConfig& config) {
  if (records.empty()) throw ContractViolation("cannot aggregate an empty record list");
  if (static_cast<std::int64_t>(records.size()) != config.n_packets) {
    throw ContractViolation(
        fmt::format("expected {} packet records, got {}", config.n_packets, records.size()));
  }

  MetricsReport m;
  m.sent = static_cast<std::int64_t>(records.size());
  for (const auto& rec : records) {
    switch (rec.outcome) {
      case Outcome::kDelivered: ++m.delivered; break;
      case Outcome::kInterfered: ++m.interfered; ++m.switches; break;
      case Outcome::kDroppedNoBond: ++m.dropped_no_bond; break;
      case Outcome::kDroppedGuard: ++m.dropped_guard; break;
    }
    if (rec.switched) ++m.switches;
  }

  const auto sent = static_cast<double>(m.sent);
  m.delivery_ratio = static_cast<double>(m.delivered) / sent;
  m.hir = static_cast<double>(m.interfered) / sent;

  const double per_packet = per_packet_tx_energy(config.packet_bytes, config.tx_energy_per_bit);
  const std::int64_t transmitted = m.delivered + m.interfered;
  m.energy_consumed = static_cast<double>(transmitted) * per_packet;
  if (transmitted > 0) {
    m.lifetime_packets = static_cast<std::int64_t>(std::floor(config.initial_energy / per_packet));
  }
  return m;
}

}  // namespace bondsim
