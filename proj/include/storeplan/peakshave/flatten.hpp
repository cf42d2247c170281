#pragma once

#include <optional>
#include <span>
#include <vector>

#include "storeplan/core/types.hpp"

namespace storeplan {

struct FlattenResult {
  double flattened_peak = 0.0;   ///< MW
  std::vector<double> charge;    ///< y^d_s per subperiod, MW
  std::vector<double> discharge; ///< y^s_s per subperiod, MW
  double required_power = 0.0;   ///< MW
  double required_energy = 0.0;  ///< MWh
};

/// Minimizes the peak of load - discharge + charge subject to
/// eta_c eta_d * sum(charge) >= sum(discharge), solved as an LP. A throughput penalty of 1e-9
/// picks a unique schedule. Sizing uses the individual efficiencies for the stored energy.
FlattenResult flatten_load(std::span<const double> load, const StorageSpec& storage, double dt = 1.0);

/// Same with a roundtrip efficiency split evenly between charging and discharging.
FlattenResult flatten_load(std::span<const double> load, double eta_rt, double dt = 1.0);

/// Dual value: max over m of (sum of the m largest loads + eta * rest) / (m + (K - m) eta).
double flattened_peak_closed_form(std::span<const double> load, double eta_rt);

struct StorageBound {
  double power = 0.0;               ///< MW, max required power over all days
  std::optional<double> duration;   ///< hours, max required energy / power; nullopt if power is 0
};

/// Sizing bound over every operating day of every period of the load tensor.
StorageBound storage_upper_bound(const Tensor3& load, const StorageSpec& storage, double dt = 1.0);

/// Same for a plain list of daily profiles.
StorageBound storage_upper_bound(const std::vector<std::vector<double>>& days, const StorageSpec& storage,
                                 double dt = 1.0);

}  // namespace storeplan
