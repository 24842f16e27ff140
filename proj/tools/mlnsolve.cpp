// mlnsolve: benchmark runner for the ML(n)BiCGStab-family solvers.
//
// Loads a Matrix Market system, builds the right-hand side and shadow
// vectors, sweeps the block size n (or drives it adaptively over a sequence
// of systems) and writes one CSV row per solve.
//
// Exit codes: 0 all solves converged, 2 iteration budget exhausted,
// 3 breakdown, 4 input error, 5 preconditioner failure.

#include <complex>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mlns/experiment.hpp"

namespace {

struct CliOptions {
  std::string matrix;
  std::string rhs;
  bool rhs_ones = false;
  std::string solver = "mlbicgstabt";
  std::vector<int> n_list{4};
  std::string precond = "ilu0";
  double tol = 1e-7;
  std::int64_t max_it = 0;  // 0: use 3N
  double kappa = 0.0;
  double breakdown_eps = 0.0;
  std::uint64_t seed = 0;
  std::string shadow = "residual-gauss";
  std::string out;
  std::string sequence;
  int step = 2;
  int n_min = 1;
  int n_max = 64;
  bool ilu0_fallback = false;
};

struct ManifestEntry {
  std::string matrix;
  std::string rhs;  // empty means ones
};

std::vector<ManifestEntry> read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open sequence manifest: " + path);
  std::vector<ManifestEntry> entries;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream iss(line);
    std::string matrix, rhs;
    if (!(iss >> matrix)) continue;
    if (matrix[0] == '#') continue;
    iss >> rhs;
    if (rhs == "ones") rhs.clear();
    entries.push_back({matrix, rhs});
  }
  return entries;
}

mlns::SolverKind parse_solver(const std::string& s) {
  if (s == "mlbicgstabt") return mlns::SolverKind::mlbicgstabt;
  if (s == "mlbicg") return mlns::SolverKind::mlbicg;
  if (s == "bicgstab") return mlns::SolverKind::bicgstab;
  throw std::runtime_error("unknown solver: " + s);
}

mlns::ShadowStrategy parse_shadow(const std::string& s) {
  if (s == "residual-gauss") return mlns::ShadowStrategy::residual_gauss;
  if (s == "residual-gauss-complex")
    return mlns::ShadowStrategy::residual_gauss_complex;
  if (s == "sign-gauss") return mlns::ShadowStrategy::sign_gauss;
  throw std::runtime_error("unknown shadow strategy: " + s);
}

mlns::ExperimentSpec make_spec(const CliOptions& opt, const std::string& matrix,
                               const std::string& rhs, std::size_t nrows) {
  mlns::ExperimentSpec spec;
  spec.matrix_path = matrix;
  if (!rhs.empty()) {
    spec.rhs_source = mlns::RhsSource::file;
    spec.rhs_path = rhs;
  }
  spec.solver = parse_solver(opt.solver);
  spec.n_list = opt.n_list;
  spec.precond = opt.precond == "none" ? mlns::PrecondKind::none
                                       : mlns::PrecondKind::ilu0;
  spec.shadow = parse_shadow(opt.shadow);
  spec.cfg.tol = opt.tol;
  spec.cfg.max_it =
      opt.max_it > 0 ? opt.max_it : 3 * static_cast<std::int64_t>(nrows);
  spec.cfg.kappa = opt.kappa;
  spec.cfg.breakdown_eps = opt.breakdown_eps;
  spec.cfg.seed = opt.seed;
  spec.ilu0_fallback_identity = opt.ilu0_fallback;
  return spec;
}

void print_rows(const std::vector<mlns::SweepRow>& rows, bool with_index) {
  mlns::write_csv_rows(std::cout, rows, with_index);
}

template <class S>
int run_typed(const CliOptions& opt) {
  using namespace mlns;
  if constexpr (!is_complex_v<S>) {
    if (opt.shadow == "residual-gauss-complex") {
      std::cerr << "mlnsolve: complex shadow strategy needs a complex matrix\n";
      return 4;
    }
  }

  std::vector<SweepRow> rows;
  if (!opt.sequence.empty()) {
    const auto entries = read_manifest(opt.sequence);
    if (entries.size() < 2) {
      std::cerr << "mlnsolve: sequence manifest needs at least two systems\n";
      return 4;
    }
    std::vector<ExperimentSpec> specs;
    for (const auto& e : entries) {
      const auto A_rows = read_matrix_market<S>(e.matrix).nrows;
      auto spec = make_spec(opt, e.matrix, e.rhs, A_rows);
      spec.output_path.clear();
      specs.push_back(std::move(spec));
    }
    AdaptiveState adaptive;
    adaptive.n_current = opt.n_list.front();
    adaptive.step = opt.step;
    adaptive.n_min = opt.n_min;
    adaptive.n_max = opt.n_max;
    rows = run_sequence<S>(specs, adaptive);
    if (!opt.out.empty() && opt.out != "-")
      write_csv_file(opt.out, rows, true);
    else
      print_rows(rows, true);
  } else {
    const auto A_rows = read_matrix_market<S>(opt.matrix).nrows;
    auto spec = make_spec(opt, opt.matrix, opt.rhs_ones ? "" : opt.rhs, A_rows);
    spec.output_path.clear();
    double factor_seconds = 0.0;
    std::string note;
    rows = run_sweep<S>(spec, &factor_seconds, &note);
    if (!note.empty()) std::cerr << "mlnsolve: " << note << "\n";
    if (spec.precond == PrecondKind::ilu0 &&
        spec.solver != SolverKind::mlbicg)
      std::cerr << "mlnsolve: ilu0 setup took " << factor_seconds << " s\n";
    if (!opt.out.empty() && opt.out != "-")
      write_csv_file(opt.out, rows);
    else
      print_rows(rows, false);
  }
  return sweep_exit_code(rows);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Sparse-system benchmark runner for ML(n)BiCGStabt, ML(n)BiCG and "
      "BiCGStab"};
  CliOptions opt;

  app.add_option("--matrix", opt.matrix,
                 "Matrix Market coordinate file (required unless --sequence)");
  auto* rhs_opt = app.add_option("--rhs", opt.rhs,
                                 "Matrix Market array file with the rhs");
  app.add_flag("--rhs-ones", opt.rhs_ones, "Use b = A*ones (default)")
      ->excludes(rhs_opt);
  app.add_option("--solver", opt.solver, "mlbicgstabt|mlbicg|bicgstab")
      ->check(CLI::IsMember({"mlbicgstabt", "mlbicg", "bicgstab"}));
  app.add_option("--n", opt.n_list, "block sizes to sweep, e.g. --n 1,2,4,8")
      ->delimiter(',');
  app.add_option("--precond", opt.precond, "ilu0|none")
      ->check(CLI::IsMember({"ilu0", "none"}));
  app.add_option("--tol", opt.tol, "relative residual tolerance");
  app.add_option("--max-it", opt.max_it, "iteration cap (default 3N)");
  app.add_option("--kappa", opt.kappa, "omega safeguard in [0,1)");
  app.add_option("--breakdown-eps", opt.breakdown_eps,
                 "breakdown threshold on |c| (default exact zero)");
  app.add_option("--seed", opt.seed, "RNG seed for the shadow vectors");
  app.add_option("--shadow", opt.shadow,
                 "residual-gauss|residual-gauss-complex|sign-gauss")
      ->check(CLI::IsMember(
          {"residual-gauss", "residual-gauss-complex", "sign-gauss"}));
  app.add_option("--out", opt.out, "CSV output path ('-' for stdout)");
  app.add_option("--sequence", opt.sequence,
                 "manifest of systems to solve with adaptive n");
  app.add_option("--step", opt.step, "adaptive search step size");
  app.add_option("--n-min", opt.n_min, "adaptive lower bound on n");
  app.add_option("--n-max", opt.n_max, "adaptive upper bound on n");
  app.add_flag("--ilu0-fallback-identity", opt.ilu0_fallback,
               "retry with the identity preconditioner on a zero pivot");

  CLI11_PARSE(app, argc, argv);

  try {
    if (opt.sequence.empty() && opt.matrix.empty()) {
      std::cerr << "mlnsolve: either --matrix or --sequence is required\n";
      return 4;
    }
    const std::string probe_path =
        opt.sequence.empty() ? opt.matrix
                             : read_manifest(opt.sequence).at(0).matrix;
    const auto field = mlns::peek_matrix_market_field(probe_path);
    return field == mlns::MmField::complex_
               ? run_typed<std::complex<double>>(opt)
               : run_typed<double>(opt);
  } catch (const mlns::PrecondFailure& e) {
    std::cerr << "mlnsolve: " << e.what() << "\n";
    return 5;
  } catch (const std::exception& e) {
    std::cerr << "mlnsolve: " << e.what() << "\n";
    return 4;
  }
}
