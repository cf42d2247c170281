#include "storeplan/solver/backend.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>
#include <unordered_map>

#include <fmt/format.h>

#include "storeplan/solver/branch_and_bound.hpp"
#include "storeplan/solver/mps.hpp"
#include "storeplan/solver/simplex.hpp"

namespace storeplan::solver {

namespace fs = std::filesystem;

Solution ReferenceBackend::submit(const Problem& problem, const SolverOptions& options) {
  return problem.num_binaries() > 0 ? solve_milp(problem, options) : solve_lp(problem, options);
}

Solution parse_solution_file(const std::string& text, const Problem& problem) {
  const auto names = mps_column_names(problem);
  std::unordered_map<std::string, int> id;
  for (int j = 0; j < static_cast<int>(names.size()); ++j) id.emplace(names[j], j);

  Solution sol;
  bool have_status = false;
  std::vector<double> values(names.size(), 0.0);
  std::vector<bool> seen(names.size(), false);
  std::istringstream in(text);
  std::string key;
  std::string value;
  while (in >> key >> value) {
    if (key == "status") {
      sol.status = status_from_string(value);
      have_status = true;
    } else if (key == "objective") {
      sol.objective = std::stod(value);
    } else if (key == "gap") {
      sol.gap = std::stod(value);
    } else if (key == "bound") {
      sol.best_bound = std::stod(value);
    } else if (key == "nodes") {
      sol.nodes = std::stol(value);
    } else {
      auto it = id.find(key);
      if (it == id.end()) throw std::runtime_error(fmt::format("solution file: unknown column '{}'", key));
      values[it->second] = std::stod(value);
      seen[it->second] = true;
    }
  }
  if (!have_status) throw std::runtime_error("solution file: missing status line");
  if (sol.has_values()) {
    for (std::size_t j = 0; j < seen.size(); ++j) {
      if (!seen[j]) throw std::runtime_error(fmt::format("solution file: no value for '{}'", names[j]));
    }
    sol.values = std::move(values);
  }
  return sol;
}

Solution CommandBackend::submit(const Problem& problem, const SolverOptions& options) {
  static std::atomic<long> counter{0};
  const auto t0 = std::chrono::steady_clock::now();
  const fs::path dir = fs::temp_directory_path() /
                       fmt::format("storeplan-{}-{}", static_cast<long>(::getpid()), counter++);
  fs::create_directories(dir);
  const fs::path in = dir / "problem.mps";
  const fs::path out = dir / "solution.sol";
  {
    std::ofstream f(in);
    f << export_mps(problem);
  }
  const std::string cmd = fmt::format("{} '{}' '{}' {} {}", command_, in.string(), out.string(),
                                      options.mip_gap, options.time_limit);
  const int rc = std::system(cmd.c_str());
  std::ifstream f(out);
  if (rc != 0 || !f) {
    fs::remove_all(dir);
    throw BackendUnavailable(fmt::format("backend '{}': command failed ({})", name_, rc));
  }
  std::stringstream buf;
  buf << f.rdbuf();
  fs::remove_all(dir);
  Solution sol = parse_solution_file(buf.str(), problem);
  sol.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return sol;
}

BackendRegistry::BackendRegistry() {
  backends_.emplace("reference", std::make_shared<ReferenceBackend>());
}

BackendRegistry& BackendRegistry::instance() {
  static BackendRegistry registry;
  return registry;
}

void BackendRegistry::add(std::shared_ptr<SolverBackend> backend) {
  std::lock_guard lock(mu_);
  const auto name = backend->name();
  backends_[name] = std::move(backend);
}

std::shared_ptr<SolverBackend> BackendRegistry::get(const std::string& name) const {
  std::lock_guard lock(mu_);
  auto it = backends_.find(name);
  if (it == backends_.end()) {
    throw BackendUnavailable(fmt::format("solver backend '{}' is not registered", name));
  }
  return it->second;
}

std::vector<std::string> BackendRegistry::names() const {
  std::lock_guard lock(mu_);
  std::vector<std::string> out;
  for (const auto& [name, _] : backends_) out.push_back(name);
  return out;
}

void BackendRegistry::remove(const std::string& name) {
  std::lock_guard lock(mu_);
  if (name != "reference") backends_.erase(name);
}

}  // namespace storeplan::solver
