#ifndef MLNS_SOLVER_TYPES_HPP
#define MLNS_SOLVER_TYPES_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mlns/counters.hpp"

namespace mlns {

/// Termination flags, following the usual iterative-solver convention.
enum SolveFlag : int {
  kConverged = 0,
  kMaxIterations = 1,
  kBreakdown = -1,
};

struct SolverConfig {
  int n = 4;                   // block size (number of shadow vectors)
  double tol = 1e-7;           // relative residual tolerance
  std::int64_t max_it = 1000;  // iteration cap
  double kappa = 0.0;          // omega safeguard; 0 = standard minimization
  double breakdown_eps = 0.0;  // |denominator| <= eps is a breakdown
  std::uint64_t seed = 0;      // RNG seed for shadow-vector generation
};

struct SolverReport {
  int flag = kMaxIterations;  // 0 converged, 1 budget exhausted, -1 breakdown
  std::int64_t iter = 0;
  double err = 0.0;       // last computed relative residual
  double true_err = 0.0;  // ||b - A x||_2 / ||b||_2 recomputed at exit
  std::vector<double> residual_history;  // length iter + 1
  OpCounters counters;
  double elapsed_seconds = 0.0;
  std::string breakdown_reason;  // empty unless flag == -1
};

}  // namespace mlns

#endif  // MLNS_SOLVER_TYPES_HPP
