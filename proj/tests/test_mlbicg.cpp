#include <complex>

#include "doctest.h"
#include "mlns/mlbicg.hpp"
#include "mlns/oracles.hpp"
#include "mlns/shadow.hpp"
#include "support/test_support.hpp"

using namespace mlns;
using Cplx = std::complex<double>;
namespace ts = mlns::testsupport;

namespace {

template <Scalar S>
CsrMatrix<S> identity_csr(std::size_t n) {
  std::vector<Triplet<S>> t;
  for (std::size_t i = 0; i < n; ++i) t.push_back({i, i, S{1.0}});
  return csr_from_triplets<S>(n, n, std::move(t));
}

template <Scalar S>
double relative_error(const DenseVector<S>& x, const DenseVector<S>& ref) {
  DenseVector<S> d = x;
  axpy(S{-1.0}, ref, d);
  return norm2(d) / norm2(ref);
}

}  // namespace

TEST_CASE("identity matrix converges at the first step") {
  const auto A = identity_csr<double>(8);
  const auto b = ts::random_vector<double>(8, 3);
  const DenseVector<double> x0(8);
  SolverConfig cfg;
  cfg.n = 2;
  const auto Q = make_shadow_matrix(b, 2, ShadowStrategy::residual_gauss, 5);
  const auto [x, rep] = ml_n_bicg(A, b, x0, Q, cfg);
  CHECK(rep.flag == 0);
  CHECK(rep.iter == 1);
  CHECK(relative_error(x, b) <= 1e-13);
}

TEST_CASE("n = 1 with shadow r0 matches the textbook BiCG oracle") {
  // clustered spectrum keeps the repeated shadow powers well conditioned
  const auto A = ts::random_clustered<double>(20, 881);
  const auto dense = oracles::DenseMatrix<double>::from_csr(A);
  const auto b = ts::random_vector<double>(20, 882);
  const DenseVector<double> x0(20);
  SolverConfig cfg;
  cfg.n = 1;
  cfg.tol = 1e-6;
  cfg.max_it = 60;
  DenseBlock<double> Q(20, 1);
  copy_into(b, Q.col(0));
  const auto [x, rep] = ml_n_bicg(A, b, x0, Q, cfg);
  CHECK(rep.flag == 0);
  const auto hist =
      oracles::bicg_reference(dense, b, x0, b, static_cast<int>(rep.iter));
  const double bnrm = norm2(b);
  for (std::int64_t k = 1; k <= rep.iter; ++k)
    CHECK(ts::close(rep.residual_history[k] * bnrm, hist[k - 1], 1e-8));
}

TEST_CASE("n = N with shadow q_k = r_{k-1} matches the FOM oracle") {
  const std::size_t N = 12;
  const auto A = ts::random_dd_dense<double>(N, 883);
  const auto dense = oracles::DenseMatrix<double>::from_csr(A);
  const auto b = ts::random_vector<double>(N, 884);
  const DenseVector<double> x0(N);
  SolverConfig cfg;
  cfg.n = static_cast<int>(N);
  cfg.tol = 1e-12;
  cfg.max_it = static_cast<std::int64_t>(N);
  DenseBlock<double> Q(N, N);  // placeholder; adaptive mode overwrites columns
  copy_into(b, Q.col(0));
  const auto [x, rep] =
      ml_n_bicg(A, b, x0, Q, cfg, MlBicgShadowMode::residual);
  const auto fom =
      oracles::fom_reference(dense, b, x0, static_cast<int>(rep.iter));
  const double bnrm = norm2(b);
  REQUIRE(static_cast<std::size_t>(rep.iter) <= fom.size());
  for (std::int64_t k = 1; k <= rep.iter; ++k)
    CHECK(ts::close(rep.residual_history[k] * bnrm, fom[k - 1], 1e-8));
}

TEST_CASE("n = N with shadow q_k = A r_{k-1} matches the GMRES oracle") {
  const std::size_t N = 12;
  const auto A = ts::random_dd_dense<double>(N, 885);
  const auto dense = oracles::DenseMatrix<double>::from_csr(A);
  const auto b = ts::random_vector<double>(N, 886);
  const DenseVector<double> x0(N);
  SolverConfig cfg;
  cfg.n = static_cast<int>(N);
  cfg.tol = 1e-12;
  cfg.max_it = static_cast<std::int64_t>(N);
  DenseBlock<double> Q(N, N);
  copy_into(b, Q.col(0));
  const auto [x, rep] =
      ml_n_bicg(A, b, x0, Q, cfg, MlBicgShadowMode::a_residual);
  const auto gmres =
      oracles::gmres_reference(dense, b, x0, static_cast<int>(rep.iter));
  const double bnrm = norm2(b);
  REQUIRE(static_cast<std::size_t>(rep.iter) <= gmres.size());
  for (std::int64_t k = 1; k <= rep.iter; ++k)
    CHECK(ts::close(rep.residual_history[k] * bnrm, gmres[k - 1], 1e-8));
}

TEST_CASE("fixed-shadow runs solve diagonally dominant systems") {
  for (int n : {2, 4}) {
    const auto A = ts::random_dd_sparse<double>(24, 0.25, 890 + n);
    const auto b = ts::random_vector<double>(24, 895 + n);
    const DenseVector<double> x0(24);
    SolverConfig cfg;
    cfg.n = n;
    cfg.tol = 1e-8;
    cfg.max_it = 120;
    const auto Q =
        make_shadow_matrix(b, n, ShadowStrategy::residual_gauss, 55);
    const auto [x, rep] = ml_n_bicg(A, b, x0, Q, cfg);
    CHECK(rep.flag == 0);
    const auto xstar = oracles::dense_direct_solve(
        oracles::DenseMatrix<double>::from_csr(A), b);
    CHECK(relative_error(x, xstar) < 1e-6);
  }
}

TEST_CASE("breakdown threshold is honored") {
  // q1 orthogonal to A g0 forces a first-step breakdown
  const auto A = csr_from_triplets<double>(2, 2, {{0, 1, 1.0}, {1, 0, -1.0}});
  const DenseVector<double> b{1.0, 0.0};
  const DenseVector<double> x0(2);
  SolverConfig cfg;
  cfg.n = 1;
  DenseBlock<double> Q(2, 1);
  copy_into(b, Q.col(0));
  const auto [x, rep] = ml_n_bicg(A, b, x0, Q, cfg);
  CHECK(rep.flag == -1);
  CHECK(!rep.breakdown_reason.empty());
}

TEST_CASE("true error is recomputed at exit") {
  const auto A = ts::random_dd_sparse<double>(16, 0.3, 901);
  const auto b = ts::random_vector<double>(16, 902);
  const DenseVector<double> x0(16);
  SolverConfig cfg;
  cfg.n = 2;
  cfg.tol = 1e-9;
  cfg.max_it = 80;
  const auto Q = make_shadow_matrix(b, 2, ShadowStrategy::residual_gauss, 66);
  const auto [x, rep] = ml_n_bicg(A, b, x0, Q, cfg);
  CHECK(rep.flag == 0);
  DenseVector<double> res = matvec(A, x);
  sub_from(b, res);
  CHECK(rep.true_err == doctest::Approx(norm2(res) / norm2(b)));
}
