#include "uwsn/scenario_file.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <istream>
#include <sstream>

#include "uwsn/rng.hpp"

namespace uwsn {

namespace {

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const char* expected) {
  throw Error(ErrorCode::invalid_config, key + ": '" + value + "' is not " + expected);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) bad_value(key, v, "a number");
  return out;
}

std::uint64_t to_uint(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) bad_value(key, v, "a non-negative integer");
  return out;
}

std::uint32_t to_u32(const std::string& key, const std::string& v) {
  const std::uint64_t out = to_uint(key, v);
  if (out > 0xffffffffULL) bad_value(key, v, "a 32-bit integer");
  return static_cast<std::uint32_t>(out);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  bad_value(key, v, "a boolean");
}

std::string from_bool(bool b) { return b ? "true" : "false"; }

template <class F>
auto rethrow_as_config(const std::string& key, F&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(ErrorCode::invalid_config, key + ": " + e.what());
  }
}

// Per-node transmit power as `id:fraction` pairs separated by commas.
std::map<NodeId, double> parse_power_map(const std::string& key, const std::string& text);
std::string format_power_map(const std::map<NodeId, double>& power);

struct Field {
  const char* key;
  std::function<std::string(const ScenarioConfig&)> get;
  std::function<void(ScenarioConfig&, const std::string&, const std::string&)> set;
};

#define UWSN_NUMBER(name, member)                                                            \
  Field {                                                                                    \
    name, [](const ScenarioConfig& c) { return format_number(c.member); },                  \
        [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.member = to_double(k, v); } \
  }
#define UWSN_COUNT(name, member, type)                                                       \
  Field {                                                                                    \
    name, [](const ScenarioConfig& c) { return std::to_string(c.member); },                 \
        [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.member = static_cast<type>(to_uint(k, v)); } \
  }
#define UWSN_U32(name, member)                                                               \
  Field {                                                                                    \
    name, [](const ScenarioConfig& c) { return std::to_string(c.member); },                 \
        [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.member = to_u32(k, v); } \
  }
#define UWSN_FLAG(name, member)                                                              \
  Field {                                                                                    \
    name, [](const ScenarioConfig& c) { return from_bool(c.member); },                      \
        [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.member = to_bool(k, v); } \
  }
#define UWSN_TEXT(name, member)                                                              \
  Field {                                                                                    \
    name, [](const ScenarioConfig& c) { return c.member; },                                 \
        [](ScenarioConfig& c, const std::string&, const std::string& v) { c.member = v; }    \
  }
#define UWSN_ENUM(name, member, parse)                                                       \
  Field {                                                                                    \
    name, [](const ScenarioConfig& c) { return std::string(to_string(c.member)); },         \
        [](ScenarioConfig& c, const std::string& k, const std::string& v) {                  \
          c.member = rethrow_as_config(k, [&] { return parse(v); });                         \
        }                                                                                    \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      UWSN_ENUM("topology.kind", topology.kind, parse_topology_kind),
      UWSN_COUNT("topology.side", topology.side, std::size_t),
      UWSN_COUNT("topology.cols", topology.cols, std::size_t),
      UWSN_COUNT("topology.rows", topology.rows, std::size_t),
      UWSN_COUNT("topology.count", topology.count, std::size_t),
      UWSN_TEXT("topology.file", topology.file),
      UWSN_NUMBER("topology.spacing", topology.spacing),
      UWSN_NUMBER("topology.tx_range", topology.tx_range),
      UWSN_NUMBER("topology.delivery", topology.delivery),
      UWSN_U32("network.hello_rounds", hello_rounds),
      UWSN_NUMBER("network.etx_threshold", etx_threshold),
      UWSN_NUMBER("network.sink_range", sink_range),
      UWSN_NUMBER("network.sample_step", sample_step),
      UWSN_NUMBER("sink.trip_duration", trip_duration),
      UWSN_U32("sink.trips", trips),
      UWSN_U32("attacker.count", attackers),
      UWSN_ENUM("attacker.model", attacker_model, parse_attacker_model),
      UWSN_NUMBER("attacker.speed", attacker_speed),
      UWSN_NUMBER("attacker.seizure_time", seizure_time),
      UWSN_TEXT("attacker.start", attacker_start),
      UWSN_FLAG("attacker.pooled", pooled),
      UWSN_ENUM("attacker.objective", objective, parse_objective),
      UWSN_U32("data.f_k", f_k),
      UWSN_U32("data.f_d", f_d),
      UWSN_U32("data.cap", cap),
      UWSN_FLAG("data.allow_unsafe_cap", allow_unsafe_cap),
      UWSN_ENUM("data.generation", generation, parse_generation),
      UWSN_TEXT("data.origin", origin),
      UWSN_ENUM("placement.strategy", strategy, parse_strategy),
      UWSN_NUMBER("placement.target_dfk", target_dfk),
      UWSN_NUMBER("placement.tolerance", dfk_tolerance),
      UWSN_FLAG("placement.origin_holds_cluster", clustered_origin_holds),
      UWSN_U32("placement.kmeans_restarts", kmeans_restarts),
      UWSN_ENUM("routing.protocol", protocol, parse_protocol),
      UWSN_U32("routing.address_bytes", routing.address_bytes),
      UWSN_U32("routing.coordinate_bytes", routing.coordinate_bytes),
      UWSN_NUMBER("energy.e_tx", radio.e_tx),
      UWSN_NUMBER("energy.e_rx", radio.e_rx),
      UWSN_NUMBER("energy.power", radio.default_power),
      Field{"energy.node_power", [](const ScenarioConfig& c) { return format_power_map(c.radio.power); },
            [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.radio.power = parse_power_map(k, v); }},
      UWSN_FLAG("energy.etx_weighted", radio.etx_weighted),
      Field{"run.seeds", [](const ScenarioConfig& c) { return format_seed_list(c.seeds); },
            [](ScenarioConfig& c, const std::string&, const std::string& v) { c.seeds = parse_seed_list(v); }},
      UWSN_U32("run.rounds_limit", rounds_limit),
  };
  return table;
}

#undef UWSN_NUMBER
#undef UWSN_COUNT
#undef UWSN_U32
#undef UWSN_FLAG
#undef UWSN_TEXT
#undef UWSN_ENUM

std::map<NodeId, double> parse_power_map(const std::string& key, const std::string& text) {
  std::map<NodeId, double> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto colon = item.find(':');
    if (colon == std::string::npos) bad_value(key, item, "an id:fraction pair");
    const std::uint32_t id = to_u32(key, trim(item.substr(0, colon)));
    out[id] = to_double(key, trim(item.substr(colon + 1)));
  }
  return out;
}

std::string format_power_map(const std::map<NodeId, double>& power) {
  std::string out;
  for (const auto& [id, p] : power) out += (out.empty() ? "" : ",") + std::to_string(id) + ":" + format_number(p);
  return out;
}

}  // namespace

std::string format_number(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) return std::to_string(value);
  return std::string(buf, ptr);
}

void set_config_value(ScenarioConfig& config, const std::string& key, const std::string& value) {
  for (const auto& f : fields())
    if (key == f.key) {
      f.set(config, key, value);
      return;
    }
  throw Error(ErrorCode::invalid_config, "unknown setting '" + key + "'");
}

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const auto& f : fields()) out.emplace_back(f.key);
  return out;
}

ScenarioConfig parse_scenario(std::istream& in) {
  ScenarioConfig config;
  std::string section;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(number) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') throw Error(ErrorCode::invalid_config, where + "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::invalid_config, where + "expected key = value");
    const std::string name = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string key = section.empty() ? name : section + "." + name;
    try {
      set_config_value(config, key, value);
    } catch (const Error& e) {
      throw Error(ErrorCode::invalid_config, where + e.what());
    }
  }
  return config;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot read scenario file " + path.string());
  return parse_scenario(in);
}

std::string serialize_scenario(const ScenarioConfig& config, bool include_seeds) {
  std::ostringstream out;
  std::string section;
  for (const auto& f : fields()) {
    const std::string key = f.key;
    if (!include_seeds && key == "run.seeds") continue;
    const auto dot = key.find('.');
    const std::string sec = key.substr(0, dot);
    if (sec != section) {
      if (!section.empty()) out << '\n';
      out << '[' << sec << "]\n";
      section = sec;
    }
    out << key.substr(dot + 1) << " = " << f.get(config) << '\n';
  }
  return out.str();
}

std::string config_hash(const ScenarioConfig& config) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(serialize_scenario(config, false))));
  return buf;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    if (auto dots = item.find(".."); dots != std::string::npos) {
      const std::uint64_t lo = to_uint("run.seeds", trim(item.substr(0, dots)));
      const std::uint64_t hi = to_uint("run.seeds", trim(item.substr(dots + 2)));
      if (hi < lo) throw Error(ErrorCode::invalid_config, "run.seeds: empty range '" + item + "'");
      if (hi - lo >= 1000000) throw Error(ErrorCode::invalid_config, "run.seeds: range '" + item + "' is too large");
      for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
    } else {
      seeds.push_back(to_uint("run.seeds", item));
    }
  }
  if (seeds.empty()) throw Error(ErrorCode::invalid_config, "run.seeds: no seeds given");
  return seeds;
}

std::string format_seed_list(const std::vector<std::uint64_t>& seeds) {
  std::string out;
  for (std::size_t i = 0; i < seeds.size();) {
    std::size_t j = i;
    while (j + 1 < seeds.size() && seeds[j + 1] == seeds[j] + 1) ++j;
    if (!out.empty()) out += ',';
    out += std::to_string(seeds[i]);
    if (j > i + 1) out += ".." + std::to_string(seeds[j]);
    else if (j == i + 1) out += ',' + std::to_string(seeds[j]);
    i = j + 1;
  }
  return out;
}

}  // namespace uwsn
