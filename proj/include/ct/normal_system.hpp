#pragma once

#include <string>

#include "ct/moments.hpp"
#include "ct/subset.hpp"

namespace ct {

// Bordered normal-equation system over a predictor subset: row/column 0 is
// the means border with entry (0,0) = 1, the interior holds second moments.
// Right-hand sides for the response and for every predictor are carried
// together, so one assembly serves the response fit and all the
// predictor-on-subset fits.
template <class Scalar>
struct NormalSystem {
  DenseMatrix<Scalar> matrix;  // (k+1) x (k+1)
  DenseVector<Scalar> rhs_y;   // k+1
  DenseMatrix<Scalar> rhs_x;   // (k+1) x n; column i-1 belongs to X_i
};

template <class Scalar>
NormalSystem<Scalar> assemble_system(const MomentSystem<Scalar>& ms, const SubsetIndex& subset) {
  if (subset.ambient() != static_cast<int>(ms.n))
    throw SubsetError("assemble_system: subset ambient count " +
                      std::to_string(subset.ambient()) + " does not match n = " +
                      std::to_string(ms.n));
  const int k = subset.k();
  const Index n = ms.n;
  NormalSystem<Scalar> sys;
  sys.matrix.resize(k + 1, k + 1);
  sys.rhs_y.resize(k + 1);
  sys.rhs_x.resize(k + 1, n);
  sys.matrix(0, 0) = Scalar(1);
  for (int q = 0; q < k; ++q) {
    const Index iq = subset[q] - 1;
    sys.matrix(0, q + 1) = ms.mean_x(iq);
    sys.matrix(q + 1, 0) = ms.mean_x(iq);
    for (int p = 0; p < k; ++p) sys.matrix(p + 1, q + 1) = ms.xx(subset[p] - 1, iq);
  }
  sys.rhs_y(0) = ms.mean_y;
  for (int p = 0; p < k; ++p) sys.rhs_y(p + 1) = ms.xy(subset[p] - 1);
  for (Index i = 0; i < n; ++i) {
    sys.rhs_x(0, i) = ms.mean_x(i);
    for (int p = 0; p < k; ++p) sys.rhs_x(p + 1, i) = ms.xx(subset[p] - 1, i);
  }
  return sys;
}

// rhs_index 0 selects the Y column; i in 1..n selects the X_i column.
template <class Scalar>
DenseVector<Scalar> rhs_column(const NormalSystem<Scalar>& sys, int rhs_index) {
  if (rhs_index == 0) return sys.rhs_y;
  if (rhs_index < 1 || rhs_index > sys.rhs_x.cols())
    throw Error("rhs_column: index " + std::to_string(rhs_index) + " out of range 0.." +
                std::to_string(sys.rhs_x.cols()));
  return sys.rhs_x.col(rhs_index - 1);
}

}  // namespace ct
