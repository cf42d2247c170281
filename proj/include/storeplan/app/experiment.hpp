#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "storeplan/formulation/config.hpp"
#include "storeplan/io/config.hpp"
#include "storeplan/io/dataset.hpp"
#include "storeplan/io/results.hpp"
#include "storeplan/solver/backend.hpp"

namespace storeplan::app {

/// Registers the bundled HiGHS script as backend "highs" and, when STOREPLAN_BACKEND_COMMAND is
/// set, that command as backend "external". Safe to call more than once.
void register_default_backends();

/// Backend name: the explicit choice if non-empty, else STOREPLAN_BACKEND, else the config's.
std::string resolve_backend(const std::string& explicit_choice, const io::PlanningConfig& config);

/// Builds, solves, extracts and checks one experiment. Never throws for model or solver
/// failures; they are recorded in the result's error field.
io::ExperimentResult run_experiment(const ExperimentConfig& experiment, const io::BuiltInstance& data,
                                    const std::string& backend = "reference");

/// The nine case-study experiments (exp1..exp9). Solver options and shedding settings come from
/// `base`; market mode, investable set, storage cost, cycle scope and capacity price are fixed.
std::vector<ExperimentConfig> case_study_suite(const ExperimentConfig& base);

/// Runs experiments concurrently on up to `jobs` threads; results keep the input order.
std::vector<io::ExperimentResult> run_suite(const std::vector<ExperimentConfig>& experiments,
                                            const io::BuiltInstance& data, const std::string& backend, int jobs,
                                            const std::function<void(const io::ExperimentResult&)>& on_done = {});

/// Experiment settings recorded in a saved result, on top of `base` (solver options, shedding).
ExperimentConfig experiment_from_result(const io::ExperimentResult& r, const ExperimentConfig& base);

struct RecheckReport {
  std::vector<std::string> violations;
  int complementarity_violations = 0;  ///< -1 when not checked
  double cost_mismatch = 0;  ///< |recomputed - saved total| / (1 + |saved total|)
  [[nodiscard]] bool ok(double cost_tol = 1e-9) const;
};

/// Re-checks a saved result against freshly built data: operational constraints on the saved
/// operation and plan, charge/discharge complementarity, and the cost of the saved decisions.
RecheckReport recheck_result(const io::ExperimentResult& r, const io::BuiltInstance& data, const ExperimentConfig& base);

/// True iff the experiment solved (optimal or within the configured gap) and passed every check.
bool succeeded(const io::ExperimentResult& r);

}  // namespace storeplan::app
