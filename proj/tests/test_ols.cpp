#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ct/exact.hpp"
#include "ct/generator.hpp"
#include "ct/moments.hpp"
#include "ct/ols.hpp"
#include "ct/transfer.hpp"

namespace {

// Moments of the two-point hand case: rows (x1,x2) = (1,2), (3,4) with
// response (1,3).  Too small to be a valid Dataset; used as raw moments.
ct::Moments two_row_moments() {
  Eigen::MatrixXd values(2, 3);
  values << 1, 2, 1, 3, 4, 3;
  return ct::compute_moments(values);
}

}  // namespace

TEST_CASE("assemble_system over the full subset is the bordered moment matrix") {
  const ct::Dataset d = ct::make_synthetic(3, 3, 12);
  const ct::Moments ms = ct::compute_moments(d);
  const auto sys = ct::assemble_system(ms, ct::SubsetIndex::full(3));
  CHECK(sys.matrix(0, 0) == 1.0);
  for (int i = 0; i < 3; ++i) {
    CHECK(sys.matrix(0, i + 1) == ms.mean_x(i));
    CHECK(sys.matrix(i + 1, 0) == ms.mean_x(i));
    for (int j = 0; j < 3; ++j) CHECK(sys.matrix(i + 1, j + 1) == ms.xx(i, j));
    CHECK(sys.rhs_y(i + 1) == ms.xy(i));
  }
  CHECK(sys.rhs_y(0) == ms.mean_y);
}

TEST_CASE("assemble_system hand case: subset {2} of the two-row moments") {
  const auto sys = ct::assemble_system(two_row_moments(), ct::SubsetIndex({2}, 2));
  CHECK(sys.matrix(0, 0) == 1.0);
  CHECK(sys.matrix(0, 1) == 3.0);
  CHECK(sys.matrix(1, 0) == 3.0);
  CHECK(sys.matrix(1, 1) == 10.0);
  CHECK(sys.rhs_y(0) == 2.0);
  CHECK(sys.rhs_y(1) == 7.0);
  // X_1 right-hand side: (mean x1, second moment of x2 with x1)
  CHECK(sys.rhs_x(0, 0) == 2.0);
  CHECK(sys.rhs_x(1, 0) == 7.0);
}

TEST_CASE("assembled systems are symmetric") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const int n = 2 + static_cast<int>(seed % 4);
    const ct::Moments ms = ct::compute_moments(ct::make_synthetic(seed, n, n + 6));
    for (const auto& subset : ct::all_nonempty_subsets(n)) {
      const auto sys = ct::assemble_system(ms, subset);
      CHECK(sys.matrix == sys.matrix.transpose().eval());
    }
  }
}

TEST_CASE("fit_full reproduces an exact interpolation y = x1") {
  Eigen::MatrixXd values(6, 2);
  for (int r = 0; r < 6; ++r) {
    values(r, 0) = 2 * r - 5;
    values(r, 1) = values(r, 0);
  }
  const ct::FullModel full = ct::fit_full(ct::compute_moments(values));
  CHECK(full.b0 == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(full.b(0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("fit_full reproduces an exact plane y = 3 + 2 x1 - x2") {
  const ct::Dataset d = ct::make_synthetic(17, 2, 9);
  Eigen::MatrixXd values = d.values;
  for (int r = 0; r < values.rows(); ++r)
    values(r, 2) = 3.0 + 2.0 * values(r, 0) - values(r, 1);
  const ct::FullModel full = ct::fit_full(ct::compute_moments(values));
  CHECK(full.b0 == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(full.b(0) == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(full.b(1) == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("fit_full agrees with the exact Cramer solution on seed 42") {
  const ct::Dataset d = ct::make_synthetic(42, 4, 30);
  const ct::FullModel lu = ct::fit_full(ct::compute_moments(d));
  const auto exact = ct::fit_full_exact(ct::to_rational(d));
  CHECK(ct::rel_diff(lu.b0, ct::to_double(exact.b0)) <= 1e-10);
  for (int i = 0; i < 4; ++i) CHECK(ct::rel_diff(lu.b(i), ct::to_double(exact.b(i))) <= 1e-10);
}

TEST_CASE("fit_transfer over the full subset installs the identity exactly") {
  const ct::Moments ms = ct::compute_moments(ct::make_synthetic(5, 4, 16));
  const ct::TransferMatrix tm = ct::fit_transfer(ms, ct::SubsetIndex::full(4));
  for (int i = 0; i < 4; ++i) {
    CHECK(tm.c0(i) == 0.0);
    for (int j = 0; j < 4; ++j) CHECK(tm.c(i, j) == (i == j ? 1.0 : 0.0));
  }
}

TEST_CASE("fit_transfer hand case: X1 regressed on X2 in the two-row moments") {
  const ct::TransferMatrix tm = ct::fit_transfer(two_row_moments(), ct::SubsetIndex({2}, 2));
  CHECK(tm.c0(0) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(tm.c(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  // convention row for the subset member
  CHECK(tm.c0(1) == 0.0);
  CHECK(tm.c(1, 0) == 1.0);
}

TEST_CASE("subset members always get exact unit rows") {
  for (std::uint64_t seed = 2; seed <= 8; ++seed) {
    const int n = 3 + static_cast<int>(seed % 3);
    const ct::Moments ms = ct::compute_moments(ct::make_synthetic(seed, n, n + 8));
    for (const auto& subset : ct::all_nonempty_subsets(n)) {
      const ct::TransferMatrix tm = ct::fit_transfer(ms, subset);
      for (int pos = 0; pos < subset.k(); ++pos) {
        const int i = subset[pos] - 1;
        CHECK(tm.c0(i) == 0.0);
        for (int j = 0; j < subset.k(); ++j) CHECK(tm.c(i, j) == (j == pos ? 1.0 : 0.0));
      }
    }
  }
}

TEST_CASE("fit_submodel over the full subset equals fit_full bitwise") {
  const ct::Moments ms = ct::compute_moments(ct::make_synthetic(9, 5, 22));
  const ct::FullModel full = ct::fit_full(ms);
  const ct::SubModel sub = ct::fit_submodel(ms, ct::SubsetIndex::full(5));
  CHECK(full.b0 == sub.a0);
  CHECK(full.b == sub.a);
}

TEST_CASE("fit_submodel hand case: y on X2 in the two-row moments") {
  const ct::SubModel sub = ct::fit_submodel(two_row_moments(), ct::SubsetIndex({2}, 2));
  CHECK(sub.a0 == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(sub.a(0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("direct submodel equals the transfer route on seed 7, n=5, k=2") {
  const ct::Moments ms = ct::compute_moments(ct::make_synthetic(7, 5, 25));
  const ct::FullModel full = ct::fit_full(ms);
  for (const auto& subset : ct::all_nonempty_subsets(5)) {
    if (subset.k() != 2) continue;
    const ct::SubModel direct = ct::fit_submodel(ms, subset);
    const ct::SubModel moved = ct::transfer_submodel(full, ct::fit_transfer(ms, subset));
    CHECK(ct::rel_diff(direct.a0, moved.a0) <= 1e-8);
    CHECK(ct::max_rel_diff(direct.a, moved.a) <= 1e-8);
  }
}

TEST_CASE("solve_cramer base case: one-dimensional bordered system") {
  ct::NormalSystem<double> sys;
  sys.matrix.resize(1, 1);
  sys.matrix(0, 0) = 1.0;
  sys.rhs_y.resize(1);
  sys.rhs_y(0) = 4.25;  // the mean response
  sys.rhs_x.resize(1, 0);
  const auto cr = ct::solve_cramer(sys, 0);
  CHECK(cr.delta == 1.0);
  CHECK(cr.solution(0) == 4.25);
}

TEST_CASE("solve_cramer hand case carries the column determinants") {
  const auto sys = ct::assemble_system(two_row_moments(), ct::SubsetIndex({2}, 2));
  const auto cr = ct::solve_cramer(sys, 0);
  // det [[1,3],[3,10]] = 1; replacing col 0: det [[2,3],[7,10]] = -1;
  // replacing col 1: det [[1,2],[3,7]] = 1.  Integer arithmetic, so exact.
  CHECK(cr.delta == 1.0);
  CHECK(cr.column_dets(0) == -1.0);
  CHECK(cr.column_dets(1) == 1.0);
  CHECK(cr.solution(0) == -1.0);
  CHECK(cr.solution(1) == 1.0);
}

TEST_CASE("solve_cramer agrees with the LU path across seeds") {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const int n = 2 + static_cast<int>(seed % 5);
    const ct::Moments ms = ct::compute_moments(ct::make_synthetic(seed * 13, n, n + 10));
    for (const auto& subset : ct::all_nonempty_subsets(n)) {
      const auto sys = ct::assemble_system(ms, subset);
      const Eigen::PartialPivLU<Eigen::MatrixXd> lu(sys.matrix);
      if (lu.rcond() < 1e-8) continue;  // condition beyond 1e8
      const Eigen::VectorXd direct = lu.solve(sys.rhs_y);
      const auto cr = ct::solve_cramer(sys, 0);
      CHECK(ct::max_rel_diff(direct, cr.solution) <= 1e-9);
    }
  }
}

TEST_CASE("solve_cramer respects the dimension cap") {
  const ct::Moments ms = ct::compute_moments(ct::make_synthetic(2, 8, 20));
  const auto sys = ct::assemble_system(ms, ct::SubsetIndex::full(8));  // dimension 9
  CHECK_THROWS_AS(ct::solve_cramer(sys, 0), ct::CapabilityExceeded);
  CHECK_NOTHROW(ct::solve_cramer(sys, 0, 9));
}

TEST_CASE("a duplicated predictor column makes the full system singular") {
  ct::Dataset d = ct::make_synthetic(21, 3, 14);
  Eigen::MatrixXd values = d.values;
  values.col(1) = values.col(0);  // x2 := x1
  try {
    ct::fit_full(ct::compute_moments(values));
    FAIL("expected SingularSystem");
  } catch (const ct::SingularSystem& e) {
    CHECK_FALSE(e.by_exact_zero);
    CHECK(e.rcond < ct::kSingularRcond);
  }
}

TEST_CASE("every fitted model passes through the point of means") {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    const int n = 2 + static_cast<int>(seed % 5);
    const ct::Moments ms = ct::compute_moments(ct::make_synthetic(seed * 7 + 1, n, n + 9));
    const ct::FullModel full = ct::fit_full(ms);
    CHECK(ct::rel_diff(ms.mean_y, full.b0 + full.b.dot(ms.mean_x)) <= 1e-10);
    for (const auto& subset : ct::all_nonempty_subsets(n)) {
      const ct::SubModel sub = ct::fit_submodel(ms, subset);
      double mean_sub = sub.a0;
      for (int pos = 0; pos < subset.k(); ++pos) mean_sub += sub.a(pos) * ms.mean_x(subset[pos] - 1);
      CHECK(ct::rel_diff(ms.mean_y, mean_sub) <= 1e-10);
      const ct::TransferMatrix tm = ct::fit_transfer(ms, subset);
      for (int i = 1; i <= n; ++i) {
        if (subset.contains(i)) continue;
        double mean_i = tm.c0(i - 1);
        for (int pos = 0; pos < subset.k(); ++pos)
          mean_i += tm.c(i - 1, pos) * ms.mean_x(subset[pos] - 1);
        CHECK(ct::rel_diff(ms.mean_x(i - 1), mean_i) <= 1e-10);
      }
    }
  }
}
