#pragma once

// Acceptance criteria shared by the standalone suite and `anharmonic verify`.

#include <anharmonic/variational_solver.hpp>

#include <nlohmann/json_fwd.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace anharmonic {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::vector<std::string> details;  // one line per measured quantity
  double seconds = 0.0;
};

struct AcceptanceOptions {
  SolverOptions solver;
  int threads = 0;  // 0: worker_threads()
  int mesh_points = defaults::kMeshPoints;
};

/// Runs the selected criteria (all of 1..11 when `only` is empty).
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt = {}, const std::vector<int>& only = {});

/// "PASS  3  title  (1.2 s)" followed by indented detail lines.
void print_report(std::ostream& os, const std::vector<CriterionResult>& results, bool verbose = true);

void to_json(nlohmann::json& j, const CriterionResult& r);

}  // namespace anharmonic
