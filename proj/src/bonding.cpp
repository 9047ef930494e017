#include "bondsim/bonding.hpp"

#include <algorithm>
#include <numeric>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "bondsim/errors.hpp"

namespace bondsim {

Bond::Bond(std::vector<int> channel_ids, std::optional<double> bottleneck_rit)
    : ids_(std::move(channel_ids)), bottleneck_rit_(bottleneck_rit) {
  if (ids_.size() < 2 || ids_.size() > 3) {
    throw ContractViolation(fmt::format("bond must hold 2 or 3 channels (got {})", ids_.size()));
  }
  for (std::size_t i = 1; i < ids_.size(); ++i) {
    if (ids_[i] != ids_[i - 1] + 1) {
      throw ContractViolation(fmt::format("bond channels must be consecutive: [{}]", fmt::join(ids_, ",")));
    }
  }
  if (ids_.front() < 0) throw ContractViolation("bond channel ids must be non-negative");
}

namespace {

void require_sorted_distinct(std::span<const int> ids) {
  for (std::size_t i = 1; i < ids.size(); ++i) {
    if (ids[i] == ids[i - 1]) throw ContractViolation(fmt::format("duplicate channel id {}", ids[i]));
    if (ids[i] < ids[i - 1]) throw ContractViolation("channel ids must be sorted ascending");
  }
}

std::vector<int> run_from(int start, int width) {
  std::vector<int> ids(static_cast<std::size_t>(width));
  std::iota(ids.begin(), ids.end(), start);
  return ids;
}

void require_context(const SelectionContext& ctx) {
  if (ctx.params.size() != ctx.snapshot.width()) {
    throw ContractViolation(fmt::format("snapshot width {} does not match {} channel params",
                                        ctx.snapshot.width(), ctx.params.size()));
  }
  if (ctx.cb_size != 2 && ctx.cb_size != 3) {
    throw ContractViolation(fmt::format("bond size must be 2 or 3 (got {})", ctx.cb_size));
  }
  if (ctx.params.size() < static_cast<std::size_t>(ctx.cb_size)) {
    throw ContractViolation("fewer channels than the bond size");
  }
}

}  // namespace

ContiguityClass classify_contiguous(std::span<const int> sorted_ids) {
  require_sorted_distinct(sorted_ids);
  for (std::size_t i = 0; i + 2 < sorted_ids.size(); ++i) {
    if (sorted_ids[i + 2] == sorted_ids[i] + 2) return {Contiguity::kThree, run_from(sorted_ids[i], 3)};
  }
  for (std::size_t i = 0; i + 1 < sorted_ids.size(); ++i) {
    if (sorted_ids[i + 1] == sorted_ids[i] + 1) return {Contiguity::kTwo, run_from(sorted_ids[i], 2)};
  }
  return {};
}

std::vector<std::vector<int>> enumerate_contiguous_sets(std::span<const int> idle_ids, int width) {
  if (width < 1) throw ContractViolation("window width must be positive");
  require_sorted_distinct(idle_ids);
  std::vector<std::vector<int>> out;
  const auto w = static_cast<std::size_t>(width);
  for (std::size_t i = 0; i + w <= idle_ids.size(); ++i) {
    // Sorted and distinct, so equal span means every id in between is present.
    if (idle_ids[i + w - 1] == idle_ids[i] + width - 1) out.push_back(run_from(idle_ids[i], width));
  }
  return out;
}

SelectionResult ritcb_select(const SelectionContext& ctx) {
  require_context(ctx);
  const auto idle = ctx.snapshot.idle_ids();

  SelectionResult result;
  std::vector<std::optional<double>> cache(ctx.params.size());
  auto channel_rit = [&](int id) {
    auto& slot = cache[static_cast<std::size_t>(id)];
    if (!slot) {
      const auto& elapsed = ctx.snapshot.idle_elapsed[static_cast<std::size_t>(id)];
      if (!elapsed) throw ContractViolation(fmt::format("channel {} is idle but has no elapsed time", id));
      slot = rit(ctx.params[static_cast<std::size_t>(id)], *elapsed);
      ++result.rit_evaluations;
    }
    return *slot;
  };

  struct Best {
    std::vector<int> ids;
    double score = 0.0;
  };
  // Highest bottleneck among windows of one width; ties keep the lowest start.
  auto best_window = [&](int width) -> std::optional<Best> {
    std::optional<Best> best;
    for (auto& window : enumerate_contiguous_sets(idle, width)) {
      double score = channel_rit(window.front());
      for (std::size_t k = 1; k < window.size(); ++k) score = std::min(score, channel_rit(window[k]));
      if (!best || score > best->score) best = Best{std::move(window), score};
    }
    return best;
  };

  const auto three = ctx.cb_size == 3 ? best_window(3) : std::nullopt;
  const auto two = best_window(2);
  if (three && (!two || three->score >= two->score)) {
    result.bond.emplace(three->ids, three->score);
  } else if (two) {
    result.bond.emplace(two->ids, two->score);
  }
  return result;
}

bool bond_clashes(const Bond& bond, std::span<ChannelProcess> truth, double t, double airtime) {
  bool clash = false;
  // Every member is queried so all processes see the same time sequence.
  for (int id : bond.channel_ids()) {
    if (static_cast<std::size_t>(id) >= truth.size()) {
      throw ContractViolation(fmt::format("bond channel {} outside {} channels", id, truth.size()));
    }
    clash = truth[static_cast<std::size_t>(id)].busy_during(t, t + airtime) || clash;
  }
  return clash;
}

GuardDecision ritcb_ip_guard(const Bond& bond, std::span<ChannelProcess> truth, double t, double airtime) {
  return bond_clashes(bond, truth, t, airtime) ? GuardDecision::kDropAndRelease : GuardDecision::kProceed;
}

SelectionResult pracb_select(const SelectionContext& ctx) {
  require_context(ctx);
  if (ctx.rng == nullptr) throw ContractViolation("PRACB needs a random stream");
  const std::size_t n = ctx.params.size();

  // Partial Fisher-Yates: the first cb_size slots become the draw.
  std::vector<int> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  const auto draws = static_cast<std::size_t>(ctx.cb_size);
  for (std::size_t i = 0; i < draws; ++i) {
    const auto j = i + static_cast<std::size_t>(ctx.rng->below(n - i));
    std::swap(pool[i], pool[j]);
  }

  return pracb_from_draw(ctx.snapshot, std::span<const int>(pool).first(draws));
}

SelectionResult pracb_from_draw(const SensingSnapshot& snapshot, std::span<const int> drawn) {
  std::vector<int> survivors;
  for (int id : drawn) {
    if (id < 0 || static_cast<std::size_t>(id) >= snapshot.width()) {
      throw ContractViolation(fmt::format("drawn channel {} outside {} channels", id, snapshot.width()));
    }
    if (!snapshot.busy[static_cast<std::size_t>(id)]) survivors.push_back(id);
  }
  std::sort(survivors.begin(), survivors.end());

  SelectionResult result;
  auto cls = classify_contiguous(survivors);
  if (cls.kind != Contiguity::kNone) result.bond.emplace(std::move(cls.ids));
  return result;
}

SelectionResult swa_select(const SelectionContext& ctx) {
  require_context(ctx);
  SelectionResult result;
  result.bond.emplace(run_from(0, ctx.cb_size));
  return result;
}

SelectionResult knows_select(const SelectionContext& ctx) {
  require_context(ctx);
  const auto& busy = ctx.snapshot.busy;
  const int n = static_cast<int>(busy.size());

  int best_start = -1;
  int best_width = 0;
  for (int i = 0; i < n;) {
    if (busy[static_cast<std::size_t>(i)]) {
      ++i;
      continue;
    }
    int j = i;
    while (j < n && !busy[static_cast<std::size_t>(j)]) ++j;
    const int width = std::min(j - i, ctx.cb_size);
    if (width >= 2 && width > best_width) {
      best_start = i;
      best_width = width;
    }
    i = j;
  }

  SelectionResult result;
  if (best_start >= 0) result.bond.emplace(run_from(best_start, best_width));
  return result;
}

SelectionResult agile_select(const SelectionContext& ctx) {
  require_context(ctx);
  const int n = static_cast<int>(ctx.params.size());
  int best_start = 0;
  double best_sum = 0.0;
  for (int start = 0; start + ctx.cb_size <= n; ++start) {
    double sum = 0.0;
    for (int k = start; k < start + ctx.cb_size; ++k) sum += ctx.params[static_cast<std::size_t>(k)].utilization();
    if (start == 0 || sum < best_sum) {
      best_start = start;
      best_sum = sum;
    }
  }
  SelectionResult result;
  result.bond.emplace(run_from(best_start, ctx.cb_size));
  return result;
}

std::string_view to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::kRitcb: return "ritcb";
    case Scheme::kRitcbIp: return "ritcb-ip";
    case Scheme::kPracb: return "pracb";
    case Scheme::kSwa: return "swa";
    case Scheme::kKnows: return "knows";
    case Scheme::kAgile: return "agile";
  }
  return "?";
}

Scheme parse_scheme(std::string_view name) {
  for (Scheme s : kAllSchemes) {
    if (to_string(s) == name) return s;
  }
  throw ConfigError(
      fmt::format("unknown scheme '{}'; valid: ritcb, ritcb-ip, pracb, swa, knows, agile", name));
}

BondingScheme::BondingScheme(Scheme kind, std::uint64_t master_seed)
    : kind_(kind), rng_(master_seed, StreamKind::kScheme, 0) {}

SelectionResult BondingScheme::select(const SensingSnapshot& snapshot, std::span<const ChannelParams> params,
                                      int cb_size) {
  const SelectionContext ctx{snapshot, params, cb_size, &rng_};
  switch (kind_) {
    case Scheme::kRitcb:
    case Scheme::kRitcbIp: return ritcb_select(ctx);
    case Scheme::kPracb: return pracb_select(ctx);
    case Scheme::kSwa: return swa_select(ctx);
    case Scheme::kKnows: return knows_select(ctx);
    case Scheme::kAgile: return agile_select(ctx);
  }
  throw ContractViolation("unhandled scheme");
}

}  // namespace bondsim
