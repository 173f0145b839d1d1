#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "ct/errors.hpp"
#include "ct/types.hpp"

namespace ct {

namespace detail {

template <class Scalar>
Scalar det_cofactor_rec(const DenseMatrix<Scalar>& m, Index row, std::uint32_t cols) {
  if (cols == 0) return Scalar(1);
  Scalar acc(0);
  int sign = 1;
  for (Index c = 0; c < m.cols(); ++c) {
    const std::uint32_t bit = 1u << c;
    if (!(cols & bit)) continue;
    if (!(m(row, c) == Scalar(0))) {
      Scalar term = m(row, c) * det_cofactor_rec(m, row + 1, cols & ~bit);
      if (sign < 0)
        acc -= term;
      else
        acc += term;
    }
    sign = -sign;
  }
  return acc;
}

// Destructive Bareiss elimination; the caller's matrix is consumed.
template <class Scalar>
Scalar det_bareiss_inplace(DenseMatrix<Scalar>& a) {
  const Index n = a.rows();
  if (n == 0) return Scalar(1);
  int sign = 1;
  Scalar prev(1);
  for (Index k = 0; k + 1 < n; ++k) {
    if (a(k, k) == Scalar(0)) {
      Index pivot = -1;
      for (Index r = k + 1; r < n; ++r)
        if (!(a(r, k) == Scalar(0))) {
          pivot = r;
          break;
        }
      if (pivot < 0) return Scalar(0);
      a.row(k).swap(a.row(pivot));
      sign = -sign;
    }
    for (Index i = k + 1; i < n; ++i) {
      for (Index j = k + 1; j < n; ++j) a(i, j) = (a(k, k) * a(i, j) - a(i, k) * a(k, j)) / prev;
      a(i, k) = Scalar(0);
    }
    prev = a(k, k);
  }
  Scalar d = a(n - 1, n - 1);
  if (sign < 0) d = -d;
  return d;
}

}  // namespace detail

// Determinant by first-row minor expansion.  Factorial cost: meant for small
// systems and as an independent oracle for the elimination path.
template <class Scalar>
Scalar det_cofactor(const DenseMatrix<Scalar>& m) {
  if (m.rows() != m.cols()) throw Error("det_cofactor: matrix must be square");
  if (m.cols() > 20)
    throw CapabilityExceeded("det_cofactor: order " + std::to_string(m.cols()) + " too large");
  if (m.rows() == 0) return Scalar(1);
  const std::uint32_t all = (1u << m.cols()) - 1u;
  return detail::det_cofactor_rec(m, 0, all);
}

// Fraction-free (Bareiss) elimination.  Over an exact scalar type every
// division is exact, so the result is the true determinant; pivots are the
// first rows with a nonzero entry (exact zero test).
template <class Scalar>
Scalar det_bareiss(DenseMatrix<Scalar> a) {
  if (a.rows() != a.cols()) throw Error("det_bareiss: matrix must be square");
  return detail::det_bareiss_inplace(a);
}

}  // namespace ct
