#include <doctest.h>

#include <cmath>

#include "bondsim/errors.hpp"
#include "bondsim/sensing.hpp"

using namespace bondsim;

namespace {

// Random rates spanning the preset range and beyond.
ChannelParams random_params(RandomStream& rng) {
  return ChannelParams::from_rates(0.05 + 10.0 * rng.uniform(), 0.05 + 10.0 * rng.uniform());
}

}  // namespace

TEST_CASE("perfect sensing of fresh processes reports every channel idle") {
  auto procs = make_processes(truncate_regime(regime_preset(Regime::kHigh), 15), 1);
  RandomStream rng(1, StreamKind::kSensing, 0);
  const auto snap = sense(procs, 0.0, {}, rng);
  CHECK(snap.width() == 15);
  for (std::size_t i = 0; i < 15; ++i) {
    CHECK_FALSE(snap.busy[i]);
    REQUIRE(snap.idle_elapsed[i].has_value());
    CHECK(*snap.idle_elapsed[i] == 0.0);
  }
  CHECK(snap.idle_ids().size() == 15);
}

TEST_CASE("idle elapsed time is measured from the last transition to OFF") {
  auto procs = make_processes(truncate_regime(regime_preset(Regime::kIntermittent), 15), 3);
  RandomStream rng(3, StreamKind::kSensing, 0);
  for (double t = 0.0; t < 20.0; t += 0.37) {
    const auto snap = sense(procs, t, {}, rng);
    for (std::size_t i = 0; i < procs.size(); ++i) {
      REQUIRE(snap.busy[i] == (procs[i].phase() == Phase::kOn));
      REQUIRE(snap.idle_elapsed[i].has_value() == !snap.busy[i]);
      if (!snap.busy[i]) CHECK(*snap.idle_elapsed[i] == doctest::Approx(t - procs[i].phase_start()));
    }
  }
}

TEST_CASE("full error probabilities invert the truth") {
  const auto params = truncate_regime(regime_preset(Regime::kLong), 15);
  auto truth = make_processes(params, 8);
  auto sensed = make_processes(params, 8);
  RandomStream rng(8, StreamKind::kSensing, 0);
  const SensingErrorModel flip{1.0, 1.0};
  for (double t = 0.0; t < 50.0; t += 1.3) {
    const auto snap = sense(sensed, t, flip, rng);
    for (std::size_t i = 0; i < params.size(); ++i) {
      const bool busy = truth[i].state_at(t) == Phase::kOn;
      REQUIRE(snap.busy[i] == !busy);
      REQUIRE(snap.idle_elapsed[i].has_value() == busy);
    }
  }
}

TEST_CASE("missed detections occur at the configured rate") {
  // ON periods of ~1e6 s: the channel is busy from its first arrival onward.
  std::vector<ChannelProcess> procs;
  procs.emplace_back(0, ChannelParams::from_rates(1e-6, 1e6), 4);
  RandomStream rng(4, StreamKind::kSensing, 0);
  const SensingErrorModel err{0.1, 0.0};
  constexpr int kInstants = 100000;
  int busy_instants = 0;
  int reported_idle = 0;
  double t = 1.0;
  while (busy_instants < kInstants) {
    const bool truly_busy = procs[0].state_at(t) == Phase::kOn;
    const auto snap = sense(procs, t, err, rng);
    if (truly_busy) {
      ++busy_instants;
      if (!snap.busy[0]) {
        ++reported_idle;
        CHECK(*snap.idle_elapsed[0] == 0.0);
      }
    }
    t += 0.001;
  }
  const double rate = static_cast<double>(reported_idle) / kInstants;
  const double sigma = std::sqrt(0.1 * 0.9 / kInstants);
  CHECK(std::abs(rate - 0.1) <= 3.0 * sigma);
}

TEST_CASE("error model bounds") {
  CHECK_NOTHROW(SensingErrorModel{}.validate());
  CHECK_THROWS_AS((SensingErrorModel{-0.1, 0.0}.validate()), ConfigError);
  CHECK_THROWS_AS((SensingErrorModel{0.0, 1.5}.validate()), ConfigError);
}

TEST_CASE("occupancy probabilities at t = 0 and t -> infinity") {
  const auto low0 = ChannelParams::from_rates(1.20, 0.4);
  RandomStream rng(5, StreamKind::kScheme, 0);
  for (int i = 0; i < 1000; ++i) {
    const auto p = random_params(rng);
    REQUIRE(p_on(p, 0.0) == 0.0);
    REQUIRE(p_off(p, 0.0) == 1.0);
    const double far = 50.0 / p.total_rate();
    REQUIRE(std::abs(p_on(p, far) - p.utilization()) <= 1e-9);
    REQUIRE(std::abs(p_off(p, far) - (1.0 - p.utilization())) <= 1e-9);
  }
  CHECK(p_on(low0, 1e3) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(p_off(low0, 1e3) == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("p_on + p_off = 1 for random (params, t)") {
  RandomStream rng(6, StreamKind::kScheme, 0);
  for (int i = 0; i < 10000; ++i) {
    const auto p = random_params(rng);
    const double t = 20.0 * rng.uniform();
    REQUIRE(std::abs(p_on(p, t) + p_off(p, t) - 1.0) <= 1e-12);
  }
}

TEST_CASE("p_off strictly decreases on a time grid") {
  for (Regime r : kAllRegimes) {
    for (const auto& e : regime_preset(r).entries) {
      double previous = p_off(e.params, 0.0);
      // Grid stops before exp() underflows relative to 1 - u.
      const double end = 20.0 / e.params.total_rate();
      for (double t = end / 200; t <= end; t += end / 200) {
        const double now = p_off(e.params, t);
        REQUIRE(now < previous);
        previous = now;
      }
    }
  }
}

TEST_CASE("negative times are contract violations") {
  const auto p = ChannelParams::from_rates(1.0, 1.0);
  CHECK_THROWS_AS(p_on(p, -1e-9), ContractViolation);
  CHECK_THROWS_AS(p_off(p, -1.0), ContractViolation);
  CHECK_THROWS_AS(rit(p, -1.0), ContractViolation);
  CHECK_THROWS_AS(rit_expanded(p, -1.0), ContractViolation);
  CHECK_THROWS_AS(rit_mean_scaled(p, -1.0), ContractViolation);
}

TEST_CASE("remaining idle time reference values") {
  const auto low0 = ChannelParams::from_rates(1.20, 0.4);
  CHECK(rit(low0, 0.0) == 1.0 / 1.20);
  // 40-digit evaluation of (1.2 + 0.4 e^{-1.6}) / (1.2 * 1.6).
  CHECK(std::abs(rit(low0, 1.0) - 0.6670617745822198767677) <= 1e-15);
  CHECK(rit(low0, 1.0) == doctest::Approx(0.6671).epsilon(1e-4));
}

TEST_CASE("the three RIT forms agree and obey their limits") {
  RandomStream rng(12, StreamKind::kScheme, 0);
  for (int i = 0; i < 10000; ++i) {
    const auto p = random_params(rng);
    const double t = 10.0 * rng.uniform();
    const double r = rit(p, t);
    REQUIRE(std::abs(r - rit_expanded(p, t)) <= 1e-12);
    REQUIRE(std::abs(r - rit_mean_scaled(p, t)) <= 1e-12);
    REQUIRE(rit(p, 0.0) == 1.0 / p.lambda_x());
    REQUIRE(std::abs(rit(p, 50.0 / p.total_rate()) - 1.0 / p.total_rate()) <= 1e-9);
    REQUIRE(r <= 1.0 / p.lambda_x());
    REQUIRE(r >= 1.0 / p.total_rate() - 1e-15);
  }
}

TEST_CASE("RIT strictly decreases with elapsed idle time") {
  RandomStream rng(13, StreamKind::kScheme, 0);
  for (int i = 0; i < 200; ++i) {
    const auto p = random_params(rng);
    const double end = 20.0 / p.total_rate();
    double previous = rit(p, 0.0);
    for (int k = 1; k <= 100; ++k) {
      const double now = rit(p, end * k / 100);
      REQUIRE(now < previous);
      previous = now;
    }
  }
}

TEST_CASE("RIT ranking equals the p_off / lambda_x comparator") {
  RandomStream rng(14, StreamKind::kScheme, 0);
  for (int i = 0; i < 5000; ++i) {
    const auto a = random_params(rng);
    const auto b = random_params(rng);
    const double t = 5.0 * rng.uniform();
    REQUIRE((rit(a, t) > rit(b, t)) == (p_off(a, t) / a.lambda_x() > p_off(b, t) / b.lambda_x()));
  }
}
