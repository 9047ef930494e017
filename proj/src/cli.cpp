#include "bondsim/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "bondsim/errors.hpp"
#include "bondsim/simkernel.hpp"
#include "bondsim/sweep.hpp"

namespace bondsim {

std::vector<TableCheck> validate_tables(double rate_tol, double utilization_tol) {
  std::vector<TableCheck> checks;
  for (Regime regime : kAllRegimes) {
    const auto& preset = regime_preset(regime);
    for (int i = 0; i < kPresetChannels; ++i) {
      const auto& e = preset.entries[static_cast<std::size_t>(i)];
      TableCheck c;
      c.regime = regime;
      c.channel = i;
      c.on_product = e.params.lambda_x() * e.printed_mean_on;
      c.off_product = e.params.lambda_y() * e.printed_mean_off;
      c.derived_utilization = e.params.utilization();
      c.printed_utilization = e.printed_utilization;
      c.pass = std::abs(c.on_product - 1.0) <= rate_tol && std::abs(c.off_product - 1.0) <= rate_tol &&
               std::abs(c.derived_utilization - c.printed_utilization) <= utilization_tol;
      checks.push_back(c);
    }
  }
  return checks;
}

bool print_table_report(std::ostream& out, std::span<const TableCheck> checks) {
  int failed = 0;
  for (const auto& c : checks) {
    fmt::print(out, "{:<12} ch {:>2}  lx*Ton={:.4f}  ly*Toff={:.4f}  u={:.4f} printed={:.2f}  {}\n",
               to_string(c.regime), c.channel, c.on_product, c.off_product, c.derived_utilization,
               c.printed_utilization, c.pass ? "PASS" : "FAIL");
    if (!c.pass) ++failed;
  }
  fmt::print(out, "{} of {} rows passed\n", checks.size() - static_cast<std::size_t>(failed), checks.size());
  return failed == 0;
}

std::vector<std::pair<std::string, std::string>> read_key_value_config(std::istream& in) {
  auto trim = [](std::string s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return std::string();
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
  };
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(fmt::format("config line {}: expected key=value", line_no));
    out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return out;
}

namespace {

// Flags shared by `run` and `sweep`; the config file uses the same names
// without the leading dashes.
constexpr std::array<std::string_view, 14> kValueKeys = {
    "channels", "regime",   "scheme",   "packets", "seed", "airtime",   "gap",
    "bond-size", "p-miss", "p-false-alarm", "out",  "jobs", "event-log", "regime-file"};

struct RawFlags {
  std::map<std::string, std::string, std::less<>> values;
  bool scale_airtime = false;
  std::string config_path;
};

// Raised with the offending flag's name so the diagnostic can cite it.
class FlagError : public ConfigError {
 public:
  FlagError(std::string_view flag, const std::string& what) : ConfigError(fmt::format("--{}: {}", flag, what)) {}
};

void add_value_flags(CLI::App& sub, RawFlags& raw) {
  for (auto key : kValueKeys) {
    sub.add_option(fmt::format("--{}", key), raw.values[std::string(key)]);
  }
  sub.add_option("--config", raw.config_path, "key=value file; flags override it");
  sub.add_flag("--scale-airtime", raw.scale_airtime, "scale airtime by 2/width");
}

// Merged view of flags, config file and environment.
class Settings {
 public:
  Settings(const CLI::App& sub, const RawFlags& raw) {
    if (!raw.config_path.empty()) {
      std::ifstream in(raw.config_path);
      if (!in) throw FlagError("config", fmt::format("cannot read '{}'", raw.config_path));
      for (auto& [key, value] : read_key_value_config(in)) {
        if (std::find(kValueKeys.begin(), kValueKeys.end(), key) == kValueKeys.end() && key != "scale-airtime") {
          throw FlagError("config", fmt::format("unknown key '{}'", key));
        }
        values_[key] = value;
      }
    }
    for (auto key : kValueKeys) {
      if (sub.get_option(fmt::format("--{}", key))->count() > 0) {
        values_[std::string(key)] = raw.values.at(std::string(key));
      }
    }
    if (raw.scale_airtime) values_["scale-airtime"] = "true";
    if (!values_.contains("seed")) {
      if (const char* env = std::getenv("BONDSIM_SEED"); env != nullptr && *env != '\0') values_["seed"] = env;
    }
  }

  std::optional<std::string> get(std::string_view key) const {
    if (auto it = values_.find(key); it != values_.end()) return it->second;
    return std::nullopt;
  }

 private:
  std::map<std::string, std::string, std::less<>> values_;
};

template <typename T>
T parse_number(std::string_view flag, std::string_view text) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw FlagError(flag, fmt::format("'{}' is not a valid number", text));
  }
  return value;
}

std::vector<std::string_view> split_list(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto pos = text.find(',', start);
    const auto part = text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
    if (!part.empty()) parts.push_back(part);
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

// "3,5,7" or "3-15" or a mix.
template <typename T>
std::vector<T> parse_int_list(std::string_view flag, std::string_view text) {
  std::vector<T> out;
  for (auto part : split_list(text)) {
    const auto dash = part.find('-', 1);
    if (dash == std::string_view::npos) {
      out.push_back(parse_number<T>(flag, part));
      continue;
    }
    const T lo = parse_number<T>(flag, part.substr(0, dash));
    const T hi = parse_number<T>(flag, part.substr(dash + 1));
    if (hi < lo) throw FlagError(flag, fmt::format("empty range '{}'", part));
    for (T v = lo;; ++v) {
      out.push_back(v);
      if (v == hi) break;
    }
  }
  if (out.empty()) throw FlagError(flag, "empty list");
  return out;
}

template <typename T, typename Parse, std::size_t N>
std::vector<T> parse_name_list(std::string_view flag, std::string_view text, Parse parse,
                               const std::array<T, N>& all) {
  if (text == "all") return {all.begin(), all.end()};
  std::vector<T> out;
  try {
    for (auto part : split_list(text)) out.push_back(parse(part));
  } catch (const ConfigError& e) {
    throw FlagError(flag, e.what());
  }
  if (out.empty()) throw FlagError(flag, "empty list");
  return out;
}

// Applies every scalar setting except the swept dimensions.
SimConfig base_config(const Settings& s) {
  SimConfig cfg;
  if (auto v = s.get("packets")) cfg.n_packets = parse_number<std::int64_t>("packets", *v);
  if (auto v = s.get("airtime")) cfg.packet_airtime = parse_number<double>("airtime", *v);
  if (auto v = s.get("gap")) cfg.inter_packet_gap = parse_number<double>("gap", *v);
  if (auto v = s.get("bond-size")) cfg.bond_size = parse_number<int>("bond-size", *v);
  if (auto v = s.get("p-miss")) cfg.sensing_error.p_miss = parse_number<double>("p-miss", *v);
  if (auto v = s.get("p-false-alarm")) cfg.sensing_error.p_false_alarm = parse_number<double>("p-false-alarm", *v);
  if (auto v = s.get("scale-airtime")) cfg.scale_airtime_by_width = (*v == "true" || *v == "1");
  if (auto v = s.get("regime-file")) {
    std::ifstream in(*v);
    if (!in) throw FlagError("regime-file", fmt::format("cannot read '{}'", *v));
    try {
      cfg.channel_table = read_channel_table(in);
    } catch (const ConfigError& e) {
      throw FlagError("regime-file", e.what());
    }
  }

  // Attribute range errors to the flag that caused them.
  if (cfg.n_packets <= 0) throw FlagError("packets", "packets must be positive");
  if (!(cfg.packet_airtime > 0.0)) throw FlagError("airtime", "airtime must be positive");
  if (!(cfg.inter_packet_gap >= 0.0)) throw FlagError("gap", "gap must be >= 0");
  if (cfg.bond_size != 2 && cfg.bond_size != 3) throw FlagError("bond-size", "bond-size must be 2 or 3");
  try {
    cfg.sensing_error.validate();
  } catch (const ConfigError& e) {
    const bool miss = std::string_view(e.what()).starts_with("p-miss");
    throw FlagError(miss ? "p-miss" : "p-false-alarm", e.what());
  }
  return cfg;
}

void check_channel_count(int n) {
  if (n < kMinChannels || n > kMaxChannels) {
    throw FlagError("channels", fmt::format("channels must be in [{},{}]", kMinChannels, kMaxChannels));
  }
}

void print_report(std::ostream& out, const SimConfig& cfg, const MetricsReport& m) {
  fmt::print(out, "regime={} scheme={} channels={} seed={} packets={}\n", to_string(cfg.regime),
             to_string(cfg.scheme), cfg.n_channels, cfg.seed, cfg.n_packets);
  fmt::print(out, "  sent               {}\n", m.sent);
  fmt::print(out, "  delivered          {}\n", m.delivered);
  fmt::print(out, "  interfered         {}\n", m.interfered);
  fmt::print(out, "  dropped (no bond)  {}\n", m.dropped_no_bond);
  fmt::print(out, "  dropped (guard)    {}\n", m.dropped_guard);
  fmt::print(out, "  delivery ratio     {:.4f}\n", m.delivery_ratio);
  fmt::print(out, "  hir                {:.4f}\n", m.hir);
  fmt::print(out, "  channel switches   {}\n", m.switches);
  fmt::print(out, "  energy consumed    {:.6f} J\n", m.energy_consumed);
  fmt::print(out, "  lifetime (packets) {}\n",
             m.lifetime_packets ? std::to_string(*m.lifetime_packets) : std::string("unbounded"));
}

int command_run(const Settings& s, std::ostream& out) {
  SimConfig cfg = base_config(s);
  if (auto v = s.get("channels")) {
    cfg.n_channels = parse_number<int>("channels", *v);
    check_channel_count(cfg.n_channels);
  }
  try {
    if (auto v = s.get("regime")) cfg.regime = parse_regime(*v);
  } catch (const ConfigError& e) {
    throw FlagError("regime", e.what());
  }
  try {
    if (auto v = s.get("scheme")) cfg.scheme = parse_scheme(*v);
  } catch (const ConfigError& e) {
    throw FlagError("scheme", e.what());
  }
  if (auto v = s.get("seed")) cfg.seed = parse_number<std::uint64_t>("seed", *v);

  const auto result = run(cfg);
  print_report(out, cfg, result.report);

  if (auto path = s.get("event-log")) {
    std::ofstream log(*path, std::ios::binary);
    if (!log) throw FlagError("event-log", fmt::format("cannot write '{}'", *path));
    write_event_log(log, result.records);
    if (!log) throw FlagError("event-log", fmt::format("write to '{}' failed", *path));
  }
  return 0;
}

std::filesystem::path plot_path(const std::filesystem::path& csv, std::string_view metric) {
  auto p = csv;
  p.replace_filename(fmt::format("{}.{}.csv", csv.stem().string(), metric));
  return p;
}

int command_sweep(const Settings& s, std::ostream& out) {
  SweepSpec spec;
  spec.base = base_config(s);
  spec.channel_counts = parse_int_list<int>("channels", s.get("channels").value_or("15"));
  for (int n : spec.channel_counts) check_channel_count(n);
  spec.regimes = parse_name_list<Regime>(
      "regime", s.get("regime").value_or("all"), [](std::string_view n) { return parse_regime(n); }, kAllRegimes);
  spec.schemes = parse_name_list<Scheme>(
      "scheme", s.get("scheme").value_or("all"), [](std::string_view n) { return parse_scheme(n); }, kAllSchemes);
  spec.seeds = parse_int_list<std::uint64_t>("seed", s.get("seed").value_or("1"));
  const int jobs = parse_number<int>("jobs", s.get("jobs").value_or("1"));
  if (jobs < 1) throw FlagError("jobs", "jobs must be >= 1");
  const auto out_path = s.get("out");
  if (!out_path) throw FlagError("out", "sweep requires an output CSV path");

  const auto rows = run_sweep(spec, jobs);

  auto write_file = [](const std::filesystem::path& path, auto&& body) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw FlagError("out", fmt::format("cannot write '{}'", path.string()));
    body(f);
    if (!f) throw FlagError("out", fmt::format("write to '{}' failed", path.string()));
  };
  const std::filesystem::path csv(*out_path);
  write_file(csv, [&](std::ostream& f) { write_sweep_csv(f, rows); });
  for (auto metric : kPlotMetrics) {
    write_file(plot_path(csv, metric), [&](std::ostream& f) { write_plot_data(f, rows, metric); });
  }
  fmt::print(out, "wrote {} rows to {}\n", rows.size(), csv.string());
  return 0;
}

}  // namespace

int cli_main(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Channel-bonding simulator for a single-hop cognitive-radio sensor link", "bondsim"};
  app.require_subcommand(1);

  RawFlags run_flags;
  auto* run_cmd = app.add_subcommand("run", "simulate one configuration");
  add_value_flags(*run_cmd, run_flags);

  RawFlags sweep_flags;
  auto* sweep_cmd = app.add_subcommand("sweep", "run channels x regimes x schemes x seeds and write CSV");
  add_value_flags(*sweep_cmd, sweep_flags);

  double rate_tol = 0.02;
  double u_tol = 0.015;
  auto* tables_cmd = app.add_subcommand("validate-tables", "check the regime tables for internal consistency");
  tables_cmd->add_option("--rate-tol", rate_tol, "tolerance on |lambda*T - 1|");
  tables_cmd->add_option("--u-tol", u_tol, "tolerance on |u - printed u|");

  std::vector<std::string> argv_storage;
  argv_storage.emplace_back("bondsim");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (run_cmd->parsed()) return command_run(Settings(*run_cmd, run_flags), out);
    if (sweep_cmd->parsed()) return command_sweep(Settings(*sweep_cmd, sweep_flags), out);
    if (tables_cmd->parsed()) return print_table_report(out, validate_tables(rate_tol, u_tol)) ? 0 : 1;
  } catch (const ConfigError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return 2;
  } catch (const ContractViolation& e) {
    fmt::print(err, "internal error: {}\n", e.what());
    return 3;
  }
  return 1;
}

}  // namespace bondsim
