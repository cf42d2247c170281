#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace storeplan {

/// Supply resources R = {b, g, s}.
enum class ResourceKind : int { Backup = 0, Grid = 1, Storage = 2 };
/// Demand resources D = {g, l, s}. Load is demand only, backup is supply only.
enum class DemandKind : int { Grid = 0, Load = 1, Storage = 2 };

inline constexpr int kNumResources = 3;
inline constexpr std::array<ResourceKind, 3> kResources{ResourceKind::Backup, ResourceKind::Grid,
                                                       ResourceKind::Storage};
inline constexpr std::array<DemandKind, 3> kDemands{DemandKind::Grid, DemandKind::Load,
                                                   DemandKind::Storage};

constexpr int idx(ResourceKind r) { return static_cast<int>(r); }
constexpr int idx(DemandKind d) { return static_cast<int>(d); }
const char* short_name(ResourceKind r);
const char* short_name(DemandKind d);

/// Dense (n, j, k) array.
class Tensor3 {
 public:
  Tensor3() = default;
  Tensor3(int n, int j, int k, double fill = 0.0)
      : n_(n), j_(j), k_(k), data_(static_cast<std::size_t>(n) * j * k, fill) {}

  double& operator()(int n, int j, int k) { return data_[offset(n, j, k)]; }
  double operator()(int n, int j, int k) const { return data_[offset(n, j, k)]; }

  [[nodiscard]] int periods() const { return n_; }
  [[nodiscard]] int days() const { return j_; }
  [[nodiscard]] int hours() const { return k_; }
  [[nodiscard]] bool matches(int n, int j, int k) const { return n == n_ && j == j_ && k == k_; }
  [[nodiscard]] const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

 private:
  [[nodiscard]] std::size_t offset(int n, int j, int k) const {
    return (static_cast<std::size_t>(n) * j_ + j) * k_ + k;
  }
  int n_ = 0, j_ = 0, k_ = 0;
  std::vector<double> data_;
};

/// Dense (n, j, k, c) array.
class Tensor4 {
 public:
  Tensor4() = default;
  Tensor4(int n, int j, int k, int c, double fill = 0.0)
      : n_(n), j_(j), k_(k), c_(c), data_(static_cast<std::size_t>(n) * j * k * c, fill) {}

  double& operator()(int n, int j, int k, int c) { return data_[offset(n, j, k, c)]; }
  double operator()(int n, int j, int k, int c) const { return data_[offset(n, j, k, c)]; }

  [[nodiscard]] int periods() const { return n_; }
  [[nodiscard]] int days() const { return j_; }
  [[nodiscard]] int hours() const { return k_; }
  [[nodiscard]] int contingencies() const { return c_; }
  [[nodiscard]] bool matches(int n, int j, int k, int c) const {
    return n == n_ && j == j_ && k == k_ && c == c_;
  }
  [[nodiscard]] const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

 private:
  [[nodiscard]] std::size_t offset(int n, int j, int k, int c) const {
    return ((static_cast<std::size_t>(n) * j_ + j) * k_ + k) * c_ + c;
  }
  int n_ = 0, j_ = 0, k_ = 0, c_ = 0;
  std::vector<double> data_;
};

struct Horizon {
  int n_periods = 1;     ///< N, years
  int n_operating = 1;   ///< J, days per year
  int n_subperiods = 24; ///< K, hours per day
  double dt = 1.0;       ///< hours per subperiod
  /// T_c, probability-weighted hours per subperiod, one per contingency (size 1 or 2).
  std::vector<double> duration_weights{0.8, 0.2};
  /// w_j, days represented by each operating period.
  std::vector<double> day_weights{1.0};

  [[nodiscard]] int n_contingencies() const { return static_cast<int>(duration_weights.size()); }
  [[nodiscard]] double total_day_weight() const;
  void validate() const;
};

/// A preinstalled unit, live for periods first..last (0-based, inclusive; may start before the
/// horizon).
struct PreinstalledUnit {
  double capacity = 0.0;  ///< MW
  int first_period = 0;
  int last_period = 0;

  [[nodiscard]] bool live(int n) const { return n >= first_period && n <= last_period; }
};

struct ResourceSpec {
  ResourceKind kind = ResourceKind::Grid;
  std::vector<double> unit_cost;       ///< p_rn, $/kW, one per period
  std::vector<double> fixed_cost;      ///< p0_rn, $, one per period
  double min_invest = 0.0;             ///< MW
  double max_invest = 0.0;             ///< MW
  int lifetime = 1;                    ///< periods
  std::vector<PreinstalledUnit> preinstalled;
  std::vector<double> capacity_price;  ///< $/kW per period; zero for grid

  void validate(int n_periods) const;
};

using ResourceSpecs = std::array<std::optional<ResourceSpec>, kNumResources>;

struct StorageSpec {
  double eta_c = 0.913;
  double eta_d = 0.913;
  double duration = 8.0;       ///< T^s, hours
  double cycle_limit = 150.0;  ///< C^s, cycles per planning period

  void validate() const;
};

struct EventHour {
  int n = 0;
  int j = 0;
  int k = 0;
  bool operator==(const EventHour&) const = default;
};

struct ExogenousSeries {
  Tensor3 load;                                 ///< MW
  std::array<Tensor3, kNumResources> supply_price;  ///< $/MWh by ResourceKind
  std::array<Tensor3, kNumResources> demand_price;  ///< $/MWh by DemandKind (load: shed value)
  double load_shed_value = 0.0;                 ///< $/MWh, informational copy of the load price
  std::vector<EventHour> scarcity_events;

  void validate(const Horizon& h) const;
};

struct InvestmentPlan {
  std::array<std::vector<double>, kNumResources> x;      ///< MW built at the start of period n
  std::array<std::vector<double>, kNumResources> z;      ///< 0/1 build indicators
  std::array<std::vector<double>, kNumResources> x_tot;  ///< MW installed (non-grid)
  std::vector<std::vector<double>> x_tot_grid;           ///< [c][n] MW grid capacity
  std::vector<double> x_max;                             ///< MW largest live grid unit

  /// All-zero plan sized for the horizon.
  static InvestmentPlan zeros(const Horizon& h);
};

struct OperationPlan {
  std::array<Tensor4, kNumResources> supply;  ///< y^s by ResourceKind, MW
  std::array<Tensor4, kNumResources> demand;  ///< y^d by DemandKind, MW
  Tensor4 soc;                                ///< MWh at the end of each subperiod
  std::vector<double> soc_target;             ///< y^0_n, MWh

  static OperationPlan zeros(const Horizon& h);
};

struct CostBreakdown {
  std::array<double, kNumResources> capital{};           ///< $
  std::array<double, kNumResources> capacity_revenue{};  ///< $ (positive = revenue)
  std::vector<double> operating;                          ///< $ per contingency, T_c-weighted
  double total = 0.0;

  [[nodiscard]] double total_capital() const;
  [[nodiscard]] double total_capacity_revenue() const;
  [[nodiscard]] double total_operating() const;
};

/// Everything needed to build a planning model.
struct Instance {
  Horizon horizon;
  ResourceSpecs specs;
  StorageSpec storage;
  ExogenousSeries series;

  void validate() const;
};

}  // namespace storeplan
