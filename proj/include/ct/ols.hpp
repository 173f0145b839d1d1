#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "ct/determinant.hpp"
#include "ct/models.hpp"
#include "ct/normal_system.hpp"

namespace ct {

// A reciprocal condition estimate below this threshold fails the fit.  The
// underlying systems are only assumed nonsingular; the numeric cutoff is a
// library choice.
inline constexpr double kSingularRcond = 1e-12;
inline constexpr int kDefaultCramerMax = 8;

namespace detail {

inline Eigen::PartialPivLU<Eigen::MatrixXd> factor_checked(const Eigen::MatrixXd& a,
                                                           const char* what) {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  const double rc = lu.rcond();
  if (!std::isfinite(rc) || rc < kSingularRcond)
    throw SingularSystem(std::string(what) +
                             ": system judged singular by the float reciprocal-condition "
                             "estimate",
                         lu.determinant(), rc, false);
  return lu;
}

}  // namespace detail

inline SubModel fit_submodel(const Moments& ms, const SubsetIndex& subset) {
  const auto sys = assemble_system(ms, subset);
  const auto lu = detail::factor_checked(sys.matrix, "fit_submodel");
  const Eigen::VectorXd x = lu.solve(sys.rhs_y);
  return SubModel{subset, x(0), x.tail(subset.k()), ms.fingerprint};
}

// The all-predictor fit is the submodel fit over the full subset: same
// system, same code path.
inline FullModel fit_full(const Moments& ms) {
  const SubModel s = fit_submodel(ms, SubsetIndex::full(static_cast<int>(ms.n)));
  return FullModel{s.a0, s.a, s.fingerprint};
}

inline TransferMatrix fit_transfer(const Moments& ms, const SubsetIndex& subset) {
  const int n = static_cast<int>(ms.n);
  const int k = subset.k();
  TransferMatrix tm{subset, DenseVector<double>::Zero(n), DenseMatrix<double>::Zero(n, k),
                    ms.fingerprint};
  for (int pos = 0; pos < k; ++pos) tm.c(subset[pos] - 1, pos) = 1.0;
  if (subset.is_full()) return tm;  // only convention rows; nothing to solve
  const auto sys = assemble_system(ms, subset);
  const auto lu = detail::factor_checked(sys.matrix, "fit_transfer");
  for (int i = 1; i <= n; ++i) {
    if (subset.contains(i)) continue;
    const Eigen::VectorXd x = lu.solve(sys.rhs_x.col(i - 1));
    tm.c0(i - 1) = x(0);
    tm.c.row(i - 1) = x.tail(k).transpose();
  }
  return tm;
}

// One bordered system solved by Cramer's rule: each unknown is a ratio of
// column-replacement determinants, all of which are returned for reporting.
// Determinants come from minor expansion, hence the dimension cap.
template <class Scalar>
struct CramerSolution {
  DenseVector<Scalar> solution;     // intercept first
  Scalar delta{};                   // system determinant
  DenseVector<Scalar> column_dets;  // delta with column p replaced by the rhs
};

template <class Scalar>
CramerSolution<Scalar> solve_cramer(const NormalSystem<Scalar>& sys, int rhs_index,
                                    int cramer_max = kDefaultCramerMax) {
  const Index d = sys.matrix.rows();
  if (d > cramer_max)
    throw CapabilityExceeded("solve_cramer: system dimension " + std::to_string(d) +
                             " exceeds cramer_max = " + std::to_string(cramer_max));
  const DenseVector<Scalar> rhs = rhs_column(sys, rhs_index);
  CramerSolution<Scalar> out;
  out.delta = det_cofactor<Scalar>(sys.matrix);
  if (out.delta == Scalar(0))
    throw SingularSystem("solve_cramer: zero system determinant", 0.0, 0.0, true);
  out.solution.resize(d);
  out.column_dets.resize(d);
  DenseMatrix<Scalar> work = sys.matrix;
  for (Index p = 0; p < d; ++p) {
    const DenseVector<Scalar> saved = work.col(p);
    work.col(p) = rhs;
    out.column_dets(p) = det_cofactor<Scalar>(work);
    work.col(p) = saved;
    out.solution(p) = out.column_dets(p) / out.delta;
  }
  return out;
}

}  // namespace ct
