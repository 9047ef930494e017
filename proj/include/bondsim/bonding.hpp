#pragma once

// Contiguous channel bonding: the remaining-idle-time selection procedures
// (RITCB and its interference-preventing variant RITCB-IP) and the baseline
// schemes they are compared against.

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "bondsim/prmodel.hpp"
#include "bondsim/rng.hpp"
#include "bondsim/sensing.hpp"

namespace bondsim {

/// Two or three strictly consecutive channel ids.
class Bond {
 public:
  // Throws ContractViolation unless ids are 2 or 3 strictly consecutive values.
  explicit Bond(std::vector<int> channel_ids, std::optional<double> bottleneck_rit = std::nullopt);

  const std::vector<int>& channel_ids() const { return ids_; }
  int width() const { return static_cast<int>(ids_.size()); }
  int first() const { return ids_.front(); }
  // Minimum member RIT; absent for schemes that do not score bonds.
  std::optional<double> bottleneck_rit() const { return bottleneck_rit_; }

  bool same_channels(const Bond& other) const { return ids_ == other.ids_; }

 private:
  std::vector<int> ids_;
  std::optional<double> bottleneck_rit_;
};

enum class Contiguity { kNone, kTwo, kThree };

struct ContiguityClass {
  Contiguity kind = Contiguity::kNone;
  std::vector<int> ids;
};

// Finds the lowest-starting run of three consecutive ids, else of two.
// Input must be sorted ascending without duplicates.
ContiguityClass classify_contiguous(std::span<const int> sorted_ids);

// Every window of `width` consecutive ids fully contained in idle_ids, by
// ascending start.
std::vector<std::vector<int>> enumerate_contiguous_sets(std::span<const int> idle_ids, int width);

struct SelectionContext {
  const SensingSnapshot& snapshot;
  std::span<const ChannelParams> params;
  int cb_size = 3;
  RandomStream* rng = nullptr;  // only PRACB draws from it
};

struct SelectionResult {
  std::optional<Bond> bond;
  int rit_evaluations = 0;
};

SelectionResult ritcb_select(const SelectionContext& ctx);

enum class GuardDecision { kProceed, kDropAndRelease };

// True when any bond member is ON at some instant of [t, t + airtime].
bool bond_clashes(const Bond& bond, std::span<ChannelProcess> truth, double t, double airtime);

// RITCB-IP's pre-transmission check against the true channel state.
GuardDecision ritcb_ip_guard(const Bond& bond, std::span<ChannelProcess> truth, double t, double airtime);

SelectionResult pracb_select(const SelectionContext& ctx);
// PRACB after its random draw: keep the idle drawn channels, bond any run.
SelectionResult pracb_from_draw(const SensingSnapshot& snapshot, std::span<const int> drawn);
SelectionResult swa_select(const SelectionContext& ctx);
SelectionResult knows_select(const SelectionContext& ctx);
SelectionResult agile_select(const SelectionContext& ctx);

enum class Scheme { kRitcb, kRitcbIp, kPracb, kSwa, kKnows, kAgile };

inline constexpr std::array<Scheme, 6> kAllSchemes = {Scheme::kRitcb, Scheme::kRitcbIp, Scheme::kPracb,
                                                      Scheme::kSwa,   Scheme::kKnows,   Scheme::kAgile};

std::string_view to_string(Scheme scheme);
Scheme parse_scheme(std::string_view name);

// Every scheme except RITCB-IP may transmit into a clash.
inline bool interference_capable(Scheme scheme) { return scheme != Scheme::kRitcbIp; }

// One per simulation run; owns the scheme-local random stream.
class BondingScheme {
 public:
  BondingScheme(Scheme kind, std::uint64_t master_seed);

  Scheme kind() const { return kind_; }
  SelectionResult select(const SensingSnapshot& snapshot, std::span<const ChannelParams> params,
                         int cb_size);

 private:
  Scheme kind_;
  RandomStream rng_;
};

}  // namespace bondsim
