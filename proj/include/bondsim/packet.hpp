#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "bondsim/bonding.hpp"

namespace bondsim {

enum class Outcome { kDelivered, kInterfered, kDroppedNoBond, kDroppedGuard };

std::string_view to_string(Outcome outcome);

struct PacketRecord {
  std::int64_t index = 0;
  double time = 0.0;
  std::optional<Bond> bond;
  Outcome outcome = Outcome::kDroppedNoBond;
  // The bond differs from the most recent earlier bond (first bond never counts).
  bool switched = false;
};

}  // namespace bondsim
