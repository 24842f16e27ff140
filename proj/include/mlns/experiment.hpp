#ifndef MLNS_EXPERIMENT_HPP
#define MLNS_EXPERIMENT_HPP

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mlns/bicgstab.hpp"
#include "mlns/matrix_market.hpp"
#include "mlns/mlbicg.hpp"
#include "mlns/mlbicgstabt.hpp"
#include "mlns/precond.hpp"
#include "mlns/shadow.hpp"
#include "mlns/solver_types.hpp"

namespace mlns {

enum class RhsSource { ones, file };
enum class SolverKind { mlbicgstabt, mlbicg, bicgstab };
enum class PrecondKind { ilu0, none };

inline const char* solver_name(SolverKind k) {
  switch (k) {
    case SolverKind::mlbicgstabt:
      return "mlbicgstabt";
    case SolverKind::mlbicg:
      return "mlbicg";
    case SolverKind::bicgstab:
      return "bicgstab";
  }
  return "?";
}

/// One experiment: a matrix, a right-hand side rule, a solver, and the list
/// of block sizes to sweep. The initial guess is always the zero vector and
/// each sweep point derives its RNG stream as seed xor n.
struct ExperimentSpec {
  std::string matrix_path;
  RhsSource rhs_source = RhsSource::ones;
  std::string rhs_path;
  SolverKind solver = SolverKind::mlbicgstabt;
  std::vector<int> n_list{4};
  PrecondKind precond = PrecondKind::ilu0;
  ShadowStrategy shadow = ShadowStrategy::residual_gauss;
  SolverConfig cfg;
  std::string output_path;
  bool ilu0_fallback_identity = false;  // retry with identity on zero pivot
};

struct SweepRow {
  std::string solver;
  int n = 0;
  int flag = 1;
  std::int64_t iter = 0;
  double err = 0.0;
  double true_err = 0.0;
  double seconds = 0.0;
  std::uint64_t matvecs = 0;
  std::uint64_t hermitian_matvecs = 0;
  std::uint64_t precond_applies = 0;
  std::uint64_t dots = 0;
  std::int64_t system_index = -1;  // >= 0 only in sequence mode
};

struct PrecondFailure : std::runtime_error {
  explicit PrecondFailure(const std::string& what)
      : std::runtime_error("preconditioner: " + what) {}
};

/// b = A*ones or a stored right-hand-side vector of matching length.
template <Scalar S>
DenseVector<S> build_rhs(const CsrMatrix<S>& A, RhsSource source,
                         const std::string& rhs_path = {}) {
  if (source == RhsSource::ones) {
    DenseVector<S> ones(A.ncols, S{1.0});
    return matvec(A, ones);
  }
  DenseVector<S> b = read_vector_market<S>(rhs_path);
  if (b.size() != A.nrows)
    throw std::invalid_argument("rhs length does not match the matrix");
  return b;
}

inline std::string format_sig17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline constexpr const char* kSweepCsvHeader =
    "solver,n,flag,iter,err,true_err,seconds,matvecs,hermitian_matvecs,"
    "precond_applies,dots";

inline void write_csv_rows(std::ostream& out, const std::vector<SweepRow>& rows,
                           bool with_system_index = false) {
  if (with_system_index)
    out << "system," << kSweepCsvHeader << "\n";
  else
    out << kSweepCsvHeader << "\n";
  for (const auto& r : rows) {
    if (with_system_index) out << r.system_index << ",";
    out << r.solver << "," << r.n << "," << r.flag << "," << r.iter << ","
        << format_sig17(r.err) << "," << format_sig17(r.true_err) << ","
        << format_sig17(r.seconds) << "," << r.matvecs << ","
        << r.hermitian_matvecs << "," << r.precond_applies << "," << r.dots
        << "\n";
  }
}

inline void write_csv_file(const std::string& path,
                           const std::vector<SweepRow>& rows,
                           bool with_system_index = false) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  write_csv_rows(out, rows, with_system_index);
}

/// 0 if every solve converged; otherwise 3 on any breakdown, else 2.
inline int sweep_exit_code(const std::vector<SweepRow>& rows) {
  bool budget = false;
  for (const auto& r : rows) {
    if (r.flag == kBreakdown) return 3;
    if (r.flag != kConverged) budget = true;
  }
  return budget ? 2 : 0;
}

namespace detail {

template <Scalar S>
Preconditioner<S> build_preconditioner(const CsrMatrix<S>& A,
                                       const ExperimentSpec& spec,
                                       std::string* note) {
  if (spec.precond == PrecondKind::none || spec.solver == SolverKind::mlbicg)
    return Preconditioner<S>::identity();
  try {
    return Preconditioner<S>::ilu0(ilu0_factorize(A));
  } catch (const std::runtime_error& e) {
    if (spec.ilu0_fallback_identity) {
      if (note) *note = std::string(e.what()) + "; retrying with identity";
      return Preconditioner<S>::identity();
    }
    throw PrecondFailure(e.what());
  }
}

template <Scalar S>
SweepRow solve_one(const CsrMatrix<S>& A, const Preconditioner<S>& P,
                   const DenseVector<S>& b, const ExperimentSpec& spec,
                   int n) {
  SolverConfig cfg = spec.cfg;
  cfg.n = n;
  cfg.seed = spec.cfg.seed ^ static_cast<std::uint64_t>(n);
  const DenseVector<S> x0(A.nrows, S{});

  SweepRow row;
  row.solver = solver_name(spec.solver);
  row.n = n;

  SolverReport rep;
  double bnrm = norm2(b);
  if (bnrm == 0.0) {
    // zero right-hand side: the zero guess is already exact
    rep.flag = kConverged;
    rep.residual_history.push_back(0.0);
  } else if (spec.solver == SolverKind::bicgstab) {
    rep = bicgstab(A, P, b, x0, cfg).second;
  } else {
    const DenseVector<S> r0 = b;  // x0 = 0
    const auto Q = make_shadow_matrix(r0, n, spec.shadow, cfg.seed);
    rep = spec.solver == SolverKind::mlbicgstabt
              ? ml_n_bicgstabt(A, P, b, x0, Q, cfg).second
              : ml_n_bicg(A, b, x0, Q, cfg).second;
  }

  row.flag = rep.flag;
  row.iter = rep.iter;
  row.err = rep.err;
  row.true_err = rep.true_err;
  row.seconds = rep.elapsed_seconds;
  row.matvecs = rep.counters.matvecs;
  row.hermitian_matvecs = rep.counters.hermitian_matvecs;
  row.precond_applies = rep.counters.precond_applies;
  row.dots = rep.counters.dots;
  return row;
}

}  // namespace detail

/// Runs one solve per entry of n_list and writes one CSV row each. Timing
/// covers the solver call only; matrix I/O and the ILU(0) factorization are
/// excluded (the factorization time goes to `factor_seconds` if given).
template <Scalar S>
std::vector<SweepRow> run_sweep(const ExperimentSpec& spec,
                                double* factor_seconds = nullptr,
                                std::string* precond_note = nullptr) {
  if (spec.n_list.empty())
    throw std::invalid_argument("sweep: n_list must be nonempty");
  for (int n : spec.n_list)
    if (n < 1) throw std::invalid_argument("sweep: n must be >= 1");

  const CsrMatrix<S> A = read_matrix_market<S>(spec.matrix_path);
  const DenseVector<S> b = build_rhs(A, spec.rhs_source, spec.rhs_path);

  const auto f0 = std::chrono::steady_clock::now();
  const Preconditioner<S> P =
      detail::build_preconditioner(A, spec, precond_note);
  if (factor_seconds)
    *factor_seconds = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - f0)
                          .count();

  std::vector<SweepRow> rows;
  rows.reserve(spec.n_list.size());
  for (int n : spec.n_list) rows.push_back(detail::solve_one(A, P, b, spec, n));
  if (!spec.output_path.empty()) write_csv_file(spec.output_path, rows);
  return rows;
}

/// Block-size controller for a sequence of linear systems: t1 and t2 are the
/// times of the previous and the current solves; if t1 > t2 the block size
/// grows by `step` for the next system, otherwise it shrinks, clamped to
/// [n_min, n_max].
struct AdaptiveState {
  int n_current = 4;
  int step = 2;
  double t1 = -1.0;  // previous system's time; < 0 until two solves happened
  double t2 = -1.0;  // current system's time
  int n_min = 1;
  int n_max = 64;

  void record_time(double t) {
    t1 = t2;
    t2 = t;
    if (t1 >= 0.0) {
      n_current = t1 > t2 ? std::min(n_current + step, n_max)
                          : std::max(n_current - step, n_min);
    }
  }
};

/// Solves the systems in order, driving n with the adaptive rule. The clock
/// is injectable so the rule is testable with scripted times; the default
/// reads the monotonic clock.
template <Scalar S>
std::vector<SweepRow> run_sequence(
    const std::vector<ExperimentSpec>& specs, AdaptiveState& adaptive,
    std::function<double()> now = {}) {
  if (specs.size() < 2)
    throw std::invalid_argument("sequence mode needs at least two systems");
  if (!now)
    now = [] {
      return std::chrono::duration<double>(
                 std::chrono::steady_clock::now().time_since_epoch())
          .count();
    };
  std::vector<SweepRow> rows;
  for (std::size_t idx = 0; idx < specs.size(); ++idx) {
    const auto& spec = specs[idx];
    const CsrMatrix<S> A = read_matrix_market<S>(spec.matrix_path);
    const DenseVector<S> b = build_rhs(A, spec.rhs_source, spec.rhs_path);
    const Preconditioner<S> P =
        detail::build_preconditioner(A, spec, nullptr);
    const double start = now();
    SweepRow row = detail::solve_one(A, P, b, spec, adaptive.n_current);
    const double elapsed = now() - start;
    row.seconds = elapsed;
    row.system_index = static_cast<std::int64_t>(idx);
    rows.push_back(std::move(row));
    adaptive.record_time(elapsed);
  }
  if (!specs.front().output_path.empty())
    write_csv_file(specs.front().output_path, rows, true);
  return rows;
}

}  // namespace mlns

#endif  // MLNS_EXPERIMENT_HPP
