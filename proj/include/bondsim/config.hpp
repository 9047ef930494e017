#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bondsim/bonding.hpp"
#include "bondsim/prmodel.hpp"
#include "bondsim/sensing.hpp"

namespace bondsim {

// One simulation run. Defaults follow the reference experiment: 10000
// packets of 44 bytes, 1 J initial energy, 50 nJ per transmitted bit.
struct SimConfig {
  int n_channels = 15;
  Regime regime = Regime::kLow;
  Scheme scheme = Scheme::kRitcb;
  std::int64_t n_packets = 10000;
  int packet_bytes = 44;
  std::uint64_t seed = 1;
  double packet_airtime = 0.01;  // seconds
  double inter_packet_gap = 0.0;
  double initial_energy = 1.0;  // joules
  double tx_energy_per_bit = 50e-9;
  SensingErrorModel sensing_error;
  int bond_size = 3;
  // Scales airtime by 2/width so wider bonds finish sooner.
  bool scale_airtime_by_width = false;
  // Replaces the regime table when set; truncated to n_channels.
  std::optional<std::vector<ChannelParams>> channel_table;

  // Throws ConfigError on any out-of-range field.
  void validate() const;
  std::vector<ChannelParams> channels() const;
};

}  // namespace bondsim
