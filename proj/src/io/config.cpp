#include "storeplan/io/config.hpp"

#include <charconv>
#include <cmath>
#include <cctype>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

namespace storeplan::io {

namespace {

constexpr int B = 0, G = 1, S = 2;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(out)) {
    throw ConfigError(fmt::format("{}: '{}' is not a number", key, v));
  }
  return out;
}

int to_int(const std::string& key, const std::string& v) {
  int out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ConfigError(fmt::format("{}: '{}' is not an integer", key, v));
  }
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  throw ConfigError(fmt::format("{}: '{}' is not a boolean", key, v));
}

std::string num(double v) { return fmt::format("{}", v); }

std::filesystem::path to_path(const std::string& v, const std::filesystem::path& base) {
  if (v.empty()) return {};
  std::filesystem::path p(v);
  return p.is_absolute() || base.empty() ? p : base / p;
}

std::vector<PreinstalledEntry> to_units(const std::string& key, const std::string& v) {
  std::vector<PreinstalledEntry> out;
  if (v.empty() || v == "none") return out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    const auto at = item.find('@');
    if (at == std::string::npos) throw ConfigError(fmt::format("{}: expected <MW>@<year>, got '{}'", key, item));
    out.push_back({to_double(key, trim(item.substr(0, at))), to_int(key, trim(item.substr(at + 1)))});
  }
  return out;
}

std::string from_units(const std::vector<PreinstalledEntry>& units) {
  if (units.empty()) return "none";
  std::string out;
  for (const auto& u : units) out += fmt::format("{}{}@{}", out.empty() ? "" : ", ", u.capacity, u.year);
  return out;
}

struct Key {
  std::function<void(PlanningConfig&, const std::string& key, const std::string& value, const std::filesystem::path&)> set;
  std::function<std::string(const PlanningConfig&)> get;
};

using Table = std::vector<std::pair<std::string, Key>>;

template <class F>
Key number_key(F field) {
  return {[field](PlanningConfig& c, const std::string& k, const std::string& v, const std::filesystem::path&) {
            field(c) = to_double(k, v);
          },
          [field](const PlanningConfig& c) { return num(field(c)); }};
}

template <class F>
Key int_key(F field) {
  return {[field](PlanningConfig& c, const std::string& k, const std::string& v, const std::filesystem::path&) {
            field(c) = to_int(k, v);
          },
          [field](const PlanningConfig& c) { return std::to_string(field(c)); }};
}

template <class F>
Key bool_key(F field) {
  return {[field](PlanningConfig& c, const std::string& k, const std::string& v, const std::filesystem::path&) {
            field(c) = to_bool(k, v);
          },
          [field](const PlanningConfig& c) { return std::string(field(c) ? "true" : "false"); }};
}

template <class F>
Key string_key(F field) {
  return {[field](PlanningConfig& c, const std::string&, const std::string& v, const std::filesystem::path&) {
            field(c) = v;
          },
          [field](const PlanningConfig& c) { return field(c); }};
}

template <class F>
Key path_key(F field) {
  return {[field](PlanningConfig& c, const std::string&, const std::string& v, const std::filesystem::path& base) {
            field(c) = to_path(v, base);
          },
          [field](const PlanningConfig& c) { return field(c).string(); }};
}

template <class F>
Key optional_number_key(F field) {
  return {[field](PlanningConfig& c, const std::string& k, const std::string& v, const std::filesystem::path&) {
            if (v.empty() || v == "none") {
              field(c).reset();
            } else {
              field(c) = to_double(k, v);
            }
          },
          [field](const PlanningConfig& c) {
            const auto& f = field(c);
            return f ? num(*f) : std::string("none");
          }};
}

void add_resource_keys(Table& t, const std::string& section, int r) {
  auto res = [r](auto& c) -> auto& { return c.resources[r]; };
  t.emplace_back(section + ".min_invest_mw", number_key([res](auto& c) -> auto& { return res(c).min_invest; }));
  t.emplace_back(section + ".max_invest_mw", number_key([res](auto& c) -> auto& { return res(c).max_invest; }));
  t.emplace_back(section + ".lifetime_years", int_key([res](auto& c) -> auto& { return res(c).lifetime; }));
  t.emplace_back(section + ".unit_cost_per_kw", number_key([res](auto& c) -> auto& { return res(c).unit_cost; }));
  t.emplace_back(section + ".unit_cost_csv", path_key([res](auto& c) -> auto& { return res(c).unit_cost_csv; }));
  t.emplace_back(section + ".fixed_cost_usd", number_key([res](auto& c) -> auto& { return res(c).fixed_cost; }));
  t.emplace_back(section + ".preinstalled_mw",
                 Key{[r](PlanningConfig& c, const std::string& k, const std::string& v, const std::filesystem::path&) {
                       c.resources[r].preinstalled = to_units(k, v);
                     },
                     [r](const PlanningConfig& c) { return from_units(c.resources[r].preinstalled); }});
}

const Table& table() {
  static const Table t = [] {
    Table t;
    t.emplace_back("experiment.name", string_key([](auto& c) -> auto& { return c.experiment.name; }));
    t.emplace_back("experiment.market_participation",
                   Key{[](PlanningConfig& c, const std::string& k, const std::string& v, const std::filesystem::path&) {
                         try {
                           c.experiment.market_mode = market_mode_from_string(v);
                         } catch (const std::invalid_argument& e) {
                           throw ConfigError(fmt::format("{}: {}", k, e.what()));
                         }
                       },
                       [](const PlanningConfig& c) {
                         return std::string(c.experiment.market_mode == MarketMode::PeakOnly ? "peak" : "full");
                       }});
    t.emplace_back("experiment.investable",
                   Key{[](PlanningConfig& c, const std::string& k, const std::string& v, const std::filesystem::path&) {
                         try {
                           c.experiment.investable = investable_from_string(v);
                         } catch (const std::invalid_argument& e) {
                           throw ConfigError(fmt::format("{}: {}", k, e.what()));
                         }
                       },
                       [](const PlanningConfig& c) { return investable_to_string(c.experiment.investable); }});
    t.emplace_back("experiment.storage_cost_per_kwh", optional_number_key([](auto& c) -> auto& {
                     return c.experiment.storage_cost_per_kwh;
                   }));
    t.emplace_back("experiment.cycle_limit",
                   Key{[](PlanningConfig& c, const std::string& k, const std::string& v, const std::filesystem::path&) {
                         try {
                           c.experiment.cycle_scope = cycle_scope_from_string(v);
                         } catch (const std::invalid_argument& e) {
                           throw ConfigError(fmt::format("{}: {}", k, e.what()));
                         }
                       },
                       [](const PlanningConfig& c) { return std::string(to_string(c.experiment.cycle_scope)); }});
    t.emplace_back("experiment.capacity_price_per_kw_month",
                   optional_number_key([](auto& c) -> auto& {
                     return c.experiment.capacity_price_per_kw_month;
                   }));
    t.emplace_back("experiment.load_shedding", bool_key([](auto& c) -> auto& { return c.experiment.load_shedding; }));
    t.emplace_back("experiment.load_shed_value_per_mwh",
                   number_key([](auto& c) -> auto& { return c.experiment.load_shed_value; }));

    t.emplace_back("horizon.first_year", int_key([](auto& c) -> auto& { return c.first_year; }));
    t.emplace_back("horizon.periods", int_key([](auto& c) -> auto& { return c.periods; }));
    t.emplace_back("horizon.representative_days", int_key([](auto& c) -> auto& { return c.representative_days; }));
    t.emplace_back("horizon.day_selection",
                   Key{[](PlanningConfig& c, const std::string& k, const std::string& v, const std::filesystem::path&) {
                         try {
                           c.day_selection = day_strategy_from_string(v);
                         } catch (const std::invalid_argument& e) {
                           throw ConfigError(fmt::format("{}: {}", k, e.what()));
                         }
                       },
                       [](const PlanningConfig& c) { return std::string(to_string(c.day_selection)); }});
    t.emplace_back("horizon.contingency", bool_key([](auto& c) -> auto& { return c.contingency; }));
    t.emplace_back("horizon.hours_without_contingency",
                   number_key([](auto& c) -> auto& { return c.hours_without_contingency; }));
    t.emplace_back("horizon.hours_with_contingency",
                   number_key([](auto& c) -> auto& { return c.hours_with_contingency; }));

    t.emplace_back("load.csv", path_key([](auto& c) -> auto& { return c.load_csv; }));
    t.emplace_back("load.column", string_key([](auto& c) -> auto& { return c.load_column; }));
    t.emplace_back("load.peak_projection_csv",
                   path_key([](auto& c) -> auto& { return c.peak_projection_csv; }));
    t.emplace_back("load.peak_first_mw", number_key([](auto& c) -> auto& { return c.peak_first_mw; }));
    t.emplace_back("load.peak_last_mw", number_key([](auto& c) -> auto& { return c.peak_last_mw; }));
    t.emplace_back("load.peak_last_year", int_key([](auto& c) -> auto& { return c.peak_last_year; }));

    t.emplace_back("prices.grid_csv", path_key([](auto& c) -> auto& { return c.grid_price_csv; }));
    t.emplace_back("prices.grid_column", string_key([](auto& c) -> auto& { return c.grid_price_column; }));
    t.emplace_back("prices.capacity_price_csv",
                   path_key([](auto& c) -> auto& { return c.capacity_price_csv; }));
    t.emplace_back("prices.scarcity_events_csv",
                   path_key([](auto& c) -> auto& { return c.scarcity_events_csv; }));

    add_resource_keys(t, "backup", B);
    t.emplace_back("backup.supply_price_per_mwh", number_key([](auto& c) -> auto& { return c.resources[B].supply_price; }));
    add_resource_keys(t, "grid", G);
    add_resource_keys(t, "storage", S);
    t.emplace_back("storage.efficiency_charge", number_key([](auto& c) -> auto& { return c.storage.eta_c; }));
    t.emplace_back("storage.efficiency_discharge", number_key([](auto& c) -> auto& { return c.storage.eta_d; }));
    t.emplace_back("storage.duration_h", number_key([](auto& c) -> auto& { return c.storage.duration; }));
    t.emplace_back("storage.cycles_per_year", number_key([](auto& c) -> auto& { return c.storage.cycle_limit; }));

    t.emplace_back("solver.backend", string_key([](auto& c) -> auto& { return c.backend; }));
    t.emplace_back("solver.mip_gap", number_key([](auto& c) -> auto& { return c.experiment.solver.mip_gap; }));
    t.emplace_back("solver.time_limit_s", number_key([](auto& c) -> auto& { return c.experiment.solver.time_limit; }));
    t.emplace_back("solver.verbose", bool_key([](auto& c) -> auto& { return c.experiment.solver.verbose; }));
    return t;
  }();
  return t;
}

const Key* find_key(const std::string& name) {
  for (const auto& [k, key] : table())
    if (k == name) return &key;
  return nullptr;
}

void set_key(PlanningConfig& c, const std::string& name, const std::string& value, const std::filesystem::path& base) {
  const Key* key = find_key(name);
  if (!key) throw ConfigError(fmt::format("unknown key '{}'", name));
  key->set(c, name, trim(value), base);
}

}  // namespace

std::string investable_to_string(const std::array<bool, kNumResources>& investable) {
  std::string out;
  const char* names[] = {"b", "g", "s"};
  for (int r = 0; r < kNumResources; ++r)
    if (investable[r]) out += fmt::format("{}{}", out.empty() ? "" : "+", names[r]);
  return out.empty() ? "none" : out;
}

std::array<bool, kNumResources> investable_from_string(std::string_view text) {
  std::array<bool, kNumResources> out{false, false, false};
  if (text == "none") return out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('+', pos), text.size());
    const auto item = text.substr(pos, end - pos);
    int r = -1;
    if (item == "b") r = B;
    if (item == "g") r = G;
    if (item == "s") r = S;
    if (r < 0 || out[r]) throw std::invalid_argument(fmt::format("bad resource list '{}'", text));
    out[r] = true;
    pos = end + 1;
  }
  return out;
}

PlanningConfig::PlanningConfig() {
  experiment.name = "experiment";
  experiment.solver.mip_gap = 1e-5;
  experiment.solver.time_limit = 14400.0;
  auto& b = resources[B];
  b.min_invest = 2;
  b.max_invest = 30;
  b.lifetime = 20;
  b.unit_cost = 2700;
  b.preinstalled = {{13, 2019}};
  b.supply_price = 305;
  auto& g = resources[G];
  g.min_invest = 40;
  g.max_invest = 40;
  g.lifetime = 40;
  g.unit_cost = 2200;
  g.preinstalled = {{36, 1996}, {38, 2006}};
  auto& s = resources[S];
  s.min_invest = 2;
  s.max_invest = 24;
  s.lifetime = 20;
  s.unit_cost = 604.0 * 8.0;
  s.preinstalled = {{6, 2019}};
}

void PlanningConfig::validate() const {
  auto fail = [](const std::string& m) { throw ConfigError(m); };
  if (periods < 1) fail("horizon.periods must be at least 1");
  if (representative_days < 2) fail("horizon.representative_days must be at least 2");
  if (representative_days > 365) fail("horizon.representative_days must be at most 365");
  if (hours_without_contingency < 0 || hours_with_contingency < 0) fail("contingency hours must be nonnegative");
  if (!(peak_first_mw > 0) || !(peak_last_mw > 0)) fail("projected peaks must be positive");
  if (peak_last_year <= first_year && peak_projection_csv.empty() && peak_last_mw != peak_first_mw) {
    fail("load.peak_last_year must be after horizon.first_year");
  }
  const char* names[] = {"backup", "grid", "storage"};
  for (int r = 0; r < kNumResources; ++r) {
    const auto& p = resources[r];
    if (p.min_invest < 0) fail(fmt::format("{}.min_invest_mw must be nonnegative", names[r]));
    if (p.min_invest > p.max_invest) {
      fail(fmt::format("{}.min_invest_mw = {} exceeds {}.max_invest_mw = {}", names[r], p.min_invest, names[r], p.max_invest));
    }
    if (p.lifetime < 1) fail(fmt::format("{}.lifetime_years must be at least 1", names[r]));
    if (p.unit_cost < 0 || p.fixed_cost < 0 || p.supply_price < 0) fail(fmt::format("{}: costs must be nonnegative", names[r]));
    for (const auto& u : p.preinstalled)
      if (u.capacity < 0) fail(fmt::format("{}.preinstalled_mw must be nonnegative", names[r]));
  }
  try {
    storage.validate();
    experiment.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

namespace {

// "value   # note" -> "value"; a # or ; only starts a comment after whitespace
std::string strip_inline_comment(const std::string& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if ((v[i] == '#' || v[i] == ';') && std::isspace(static_cast<unsigned char>(v[i - 1]))) return trim(v.substr(0, i));
  return v;
}

}  // namespace

PlanningConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(fmt::format("config line {}: {}", e.line(), e.message()));
  }
  PlanningConfig c;
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError(fmt::format("key '{}' outside a section", section));
    for (const auto& [key, value] : body) set_key(c, section + "." + key, strip_inline_comment(value.data()), base_dir);
  }
  c.validate();
  return c;
}

PlanningConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open {}", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str(), path.parent_path());
  } catch (const ConfigError& e) {
    throw ConfigError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const auto& [k, key] : table()) out.push_back(k);
  return out;
}

void apply_override(PlanningConfig& config, const std::string& assignment, const std::filesystem::path& base_dir) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError(fmt::format("override '{}' is not key=value", assignment));
  PlanningConfig next = config;
  set_key(next, trim(assignment.substr(0, eq)), assignment.substr(eq + 1), base_dir);
  next.validate();
  config = std::move(next);
}

std::string format_config(const PlanningConfig& config) {
  std::string out, section;
  for (const auto& [k, key] : table()) {
    const auto dot = k.find('.');
    const std::string sec = k.substr(0, dot);
    if (sec != section) {
      out += fmt::format("{}[{}]\n", out.empty() ? "" : "\n", sec);
      section = sec;
    }
    out += fmt::format("{} = {}\n", k.substr(dot + 1), key.get(config));
  }
  return out;
}

}  // namespace storeplan::io
