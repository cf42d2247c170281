#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "storeplan/solver/problem.hpp"
#include "storeplan/solver/solution.hpp"

namespace storeplan::solver {

/// Raised when a backend is requested that is not registered or cannot run.
struct BackendUnavailable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class SolverBackend {
 public:
  virtual ~SolverBackend() = default;
  [[nodiscard]] virtual std::string name() const = 0;
  virtual Solution submit(const Problem& problem, const SolverOptions& options) = 0;
};

/// Built-in simplex / branch-and-bound.
class ReferenceBackend final : public SolverBackend {
 public:
  [[nodiscard]] std::string name() const override { return "reference"; }
  Solution submit(const Problem& problem, const SolverOptions& options) override;
};

/// Runs an external program as `<command> <in.mps> <out.sol> <mip_gap> <time_limit>`.
///
/// The solution file has `status <name>` and `objective <value>` lines, optional `gap`,
/// `bound` and `nodes` lines, then one `<mps column name> <value>` line per column.
class CommandBackend final : public SolverBackend {
 public:
  CommandBackend(std::string name, std::string command)
      : name_(std::move(name)), command_(std::move(command)) {}
  [[nodiscard]] std::string name() const override { return name_; }
  Solution submit(const Problem& problem, const SolverOptions& options) override;

 private:
  std::string name_;
  std::string command_;
};

/// Parses the solution-file format described at CommandBackend.
Solution parse_solution_file(const std::string& text, const Problem& problem);

/// Process-wide name -> backend table. "reference" is always present.
class BackendRegistry {
 public:
  static BackendRegistry& instance();

  void add(std::shared_ptr<SolverBackend> backend);
  /// Throws BackendUnavailable for unknown names.
  [[nodiscard]] std::shared_ptr<SolverBackend> get(const std::string& name) const;
  [[nodiscard]] std::vector<std::string> names() const;
  void remove(const std::string& name);

 private:
  BackendRegistry();
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<SolverBackend>> backends_;
};

}  // namespace storeplan::solver
