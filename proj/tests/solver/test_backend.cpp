#include <doctest.h>

#include <cstdlib>
#include <random>

#include "storeplan/solver/backend.hpp"
#include "storeplan/solver/mps.hpp"
#include "storeplan/solver/branch_and_bound.hpp"
#include "../support/lp_oracle.hpp"
#include "../support/mps_toys.hpp"

using namespace storeplan::solver;

namespace {

class FixedBackend final : public SolverBackend {
 public:
  explicit FixedBackend(Solution s) : s_(std::move(s)) {}
  std::string name() const override { return "mock"; }
  Solution submit(const Problem&, const SolverOptions&) override { return s_; }

 private:
  Solution s_;
};

bool python_solver_available() {
  return std::system("python3 -c 'import scipy.optimize' >/dev/null 2>&1") == 0;
}

}  // namespace

TEST_CASE("reference backend is registered by default") {
  auto& reg = BackendRegistry::instance();
  const auto names = reg.names();
  CHECK(std::find(names.begin(), names.end(), "reference") != names.end());
  const auto s = reg.get("reference")->submit(storeplan::testing::toy_single_constraint(), {});
  REQUIRE(s.status == SolveStatus::Optimal);
  CHECK(s.objective == doctest::Approx(3.0));
}

TEST_CASE("unknown backend is a configuration error") {
  CHECK_THROWS_AS((void)BackendRegistry::instance().get("no-such-solver"), BackendUnavailable);
}

TEST_CASE("mock backend solution is passed through unchanged") {
  Solution fixed;
  fixed.status = SolveStatus::GapFeasible;
  fixed.values = {1.0, 2.0};
  fixed.objective = 6.0;
  fixed.gap = 0.01;
  BackendRegistry::instance().add(std::make_shared<FixedBackend>(fixed));
  const auto s = BackendRegistry::instance().get("mock")->submit(storeplan::testing::toy_single_constraint(), {});
  CHECK(s.status == fixed.status);
  CHECK(s.values == fixed.values);
  CHECK(s.objective == fixed.objective);
  CHECK(s.gap == fixed.gap);
  BackendRegistry::instance().remove("mock");
  CHECK_THROWS_AS((void)BackendRegistry::instance().get("mock"), BackendUnavailable);
}

TEST_CASE("solution file parsing") {
  const Problem p = storeplan::testing::toy_single_constraint();
  const auto s = parse_solution_file("status optimal\nobjective 3\nx 3\ny 0\n", p);
  CHECK(s.status == SolveStatus::Optimal);
  CHECK(s.values == std::vector<double>{3.0, 0.0});
  CHECK_THROWS(parse_solution_file("status optimal\nobjective 3\nx 3\n", p));
  CHECK_THROWS(parse_solution_file("objective 3\n", p));
  CHECK(parse_solution_file("status infeasible\nobjective nan\n", p).status == SolveStatus::Infeasible);
}

TEST_CASE("failing command backend raises instead of falling back") {
  CommandBackend broken("broken", "false");
  CHECK_THROWS_AS(broken.submit(storeplan::testing::toy_single_constraint(), {}), BackendUnavailable);
}

TEST_CASE("reference and external backend agree on a shared toy set") {
  if (!python_solver_available()) {
    MESSAGE("python3 with scipy not found; cross-check skipped");
    return;
  }
  CommandBackend external("external", std::string("python3 ") + STOREPLAN_TOOLS_DIR + "/external_backend.py");
  ReferenceBackend reference;
  std::mt19937_64 rng(2025);
  std::vector<Problem> toys;
  for (const auto& [name, p] : storeplan::testing::golden_toys()) toys.push_back(p);
  for (int t = 0; t < 8; ++t) toys.push_back(storeplan::testing::random_milp(rng, 4, 4));
  for (std::size_t t = 0; t < toys.size(); ++t) {
    CAPTURE(t);
    // MPS numbers carry at most 12 characters, so compare on the re-read problem
    const Problem p = read_mps(export_mps(toys[t]));
    SolverOptions opt;
    opt.mip_gap = 1e-9;
    const auto a = reference.submit(p, opt);
    const auto b = external.submit(p, opt);
    REQUIRE(a.status == b.status);
    if (a.status == SolveStatus::Optimal) {
      CHECK(std::abs(a.objective - b.objective) <= 1e-6 * std::max(1.0, std::abs(b.objective)));
    }
  }
}
