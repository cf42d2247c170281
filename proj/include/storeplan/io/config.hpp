#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "storeplan/core/types.hpp"
#include "storeplan/formulation/config.hpp"
#include "storeplan/io/timeseries.hpp"

namespace storeplan::io {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PreinstalledEntry {
  double capacity = 0.0;  ///< MW
  int year = 0;           ///< commissioning year
  bool operator==(const PreinstalledEntry&) const = default;
};

struct ResourceParams {
  double min_invest = 0.0;      ///< MW
  double max_invest = 0.0;      ///< MW
  int lifetime = 1;             ///< years
  double unit_cost = 0.0;       ///< $/kW, used when no cost file is given
  std::filesystem::path unit_cost_csv;  ///< year,cost_per_kw
  double fixed_cost = 0.0;      ///< $ per build
  std::vector<PreinstalledEntry> preinstalled;
  double supply_price = 0.0;    ///< $/MWh (backup fuel cost; storage 0)
};

struct PlanningConfig {
  ExperimentConfig experiment;

  int first_year = 2025;
  int periods = 3;
  int representative_days = 10;
  DayStrategy day_selection = DayStrategy::PeakStratified;
  bool contingency = true;
  double hours_without_contingency = 0.8;
  double hours_with_contingency = 0.2;

  std::filesystem::path load_csv;
  std::string load_column;
  std::filesystem::path peak_projection_csv;
  double peak_first_mw = 62.0;   ///< linear projection used without a projection file
  double peak_last_mw = 98.0;
  int peak_last_year = 2050;

  std::filesystem::path grid_price_csv;
  std::string grid_price_column;
  std::filesystem::path capacity_price_csv;  ///< year,price_per_kw_month
  std::filesystem::path scarcity_events_csv;

  std::array<ResourceParams, kNumResources> resources;
  StorageSpec storage;

  std::string backend = "reference";

  PlanningConfig();
  void validate() const;
};

/// Strict INI-style reader: `[section]` headers, `key = value` lines, `#` or `;` comments.
/// Unknown sections or keys are errors. Relative paths resolve against `base_dir`.
PlanningConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
PlanningConfig load_config(const std::filesystem::path& path);

/// Every recognized `section.key`, for help text.
std::vector<std::string> config_keys();

/// Applies one `section.key=value` override; the configuration is unchanged if it fails.
void apply_override(PlanningConfig& config, const std::string& assignment, const std::filesystem::path& base_dir = {});

/// Writes the configuration back in the same format (round-trips through parse_config).
std::string format_config(const PlanningConfig& config);

std::string investable_to_string(const std::array<bool, kNumResources>& investable);
std::array<bool, kNumResources> investable_from_string(std::string_view text);

}  // namespace storeplan::io
