#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "ct/ols.hpp"

namespace ct {

inline constexpr double kRelTol = 1e-8;
inline constexpr double kAbsFloor = 1e-12;

// Scaled difference such that rel_diff(x, y) <= kRelTol is exactly
// |x - y| <= max(kRelTol * max(|x|, |y|), kAbsFloor).
inline double rel_diff(double x, double y) {
  const double scale = std::max(std::abs(x), std::abs(y));
  return std::abs(x - y) / std::max(scale, kAbsFloor / kRelTol);
}

inline double max_rel_diff(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size()) throw Error("max_rel_diff: size mismatch");
  double worst = 0.0;
  for (Index i = 0; i < a.size(); ++i) worst = std::max(worst, rel_diff(a(i), b(i)));
  return worst;
}

namespace detail {

inline void require_same_source(std::uint64_t a, std::uint64_t b, const char* what) {
  if (a != b)
    throw FingerprintMismatch(std::string(what) +
                              ": models were fitted from different moment systems");
}

}  // namespace detail

// Submodel slopes from the full model and the predictor-on-subset slopes
// alone: a_{i_j} = sum_i b_i c_{i,i_j}.  By construction no response moments
// are touched; the inputs carry none.
template <class Scalar>
DenseVector<Scalar> transfer_slopes(const FullModelT<Scalar>& full,
                                    const TransferMatrixT<Scalar>& tm) {
  detail::require_same_source(full.fingerprint, tm.fingerprint, "transfer_slopes");
  return tm.c.transpose() * full.b;
}

// Intercept counterpart, a0 = b0 + sum_i b_i c0[i].  Follows from the
// mean-passing property of every least-squares fit; unlike the slope rule it
// is a derived extension, not part of the cited identity.
template <class Scalar>
Scalar transfer_intercept(const FullModelT<Scalar>& full, const TransferMatrixT<Scalar>& tm) {
  detail::require_same_source(full.fingerprint, tm.fingerprint, "transfer_intercept");
  Scalar acc = full.b0;
  for (Index i = 0; i < full.b.size(); ++i) acc += full.b(i) * tm.c0(i);
  return acc;
}

template <class Scalar>
SubModelT<Scalar> transfer_submodel(const FullModelT<Scalar>& full,
                                    const TransferMatrixT<Scalar>& tm) {
  return SubModelT<Scalar>{tm.subset, transfer_intercept(full, tm), transfer_slopes(full, tm),
                           tm.fingerprint};
}

// k = 1 case: a_i = b_i + sum_{j != i} b_j c_{j,i} with c_{i,i} = 1.
template <class Scalar>
Scalar singleton_transfer(const FullModelT<Scalar>& full, const TransferMatrixT<Scalar>& tm) {
  if (tm.subset.k() != 1)
    throw SubsetError("singleton_transfer: subset must contain exactly one index");
  return transfer_slopes(full, tm)(0);
}

// All-pairs form: a(i-1) is the simple-regression slope of Y on X_i and
// c(j-1, i-1) the slope of X_j on X_i (diagonal 1), plus the achieved
// deviation max |A - B*C| against the full model.
struct PairwiseForm {
  Eigen::RowVectorXd a;
  Eigen::MatrixXd c;
  double max_abs_deviation = 0.0;
  std::uint64_t fingerprint = 0;
};

inline PairwiseForm pairwise_full_form(const Moments& ms) {
  const int n = static_cast<int>(ms.n);
  PairwiseForm out;
  out.a.resize(n);
  out.c.resize(n, n);
  out.fingerprint = ms.fingerprint;
  for (int i = 1; i <= n; ++i) {
    const SubsetIndex single({i}, n);
    out.a(i - 1) = fit_submodel(ms, single).a(0);
    out.c.col(i - 1) = fit_transfer(ms, single).c.col(0);
  }
  const FullModel full = fit_full(ms);
  out.max_abs_deviation = (out.a - full.b.transpose() * out.c).cwiseAbs().maxCoeff();
  return out;
}

// Inverse direction of the pairwise form: B = A * C^{-1}, computed as a row
// solve on C^T rather than by forming the inverse.
inline Eigen::RowVectorXd recover_full_from_pairwise(const Eigen::RowVectorXd& a,
                                                     const Eigen::MatrixXd& c) {
  if (c.rows() != c.cols() || a.cols() != c.rows())
    throw Error("recover_full_from_pairwise: shape mismatch");
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(c.transpose());
  const double rc = lu.rcond();
  if (!std::isfinite(rc) || rc < kSingularRcond)
    throw SingularTransferMatrix(
        "recover_full_from_pairwise: pairwise slope matrix judged singular", rc);
  return lu.solve(a.transpose()).transpose();
}

// Concatenated transfer over a disjoint cover of {1..n}; parts are applied
// in the given order and must partition the predictor set.
template <class Scalar>
DenseVector<Scalar> partition_transfer(const FullModelT<Scalar>& full,
                                       const std::vector<TransferMatrixT<Scalar>>& parts) {
  const int n = static_cast<int>(full.b.size());
  if (parts.empty()) throw SubsetError("partition_transfer: no parts given");
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  int total = 0;
  for (const auto& tm : parts) {
    if (tm.subset.ambient() != n)
      throw SubsetError("partition_transfer: part ambient count does not match the model");
    for (int i : tm.subset.indices()) {
      if (seen[static_cast<std::size_t>(i - 1)])
        throw SubsetError("partition_transfer: parts overlap at index " + std::to_string(i));
      seen[static_cast<std::size_t>(i - 1)] = true;
    }
    total += tm.subset.k();
  }
  if (total != n) throw SubsetError("partition_transfer: parts do not cover {1..n}");
  DenseVector<Scalar> out(n);
  Index at = 0;
  for (const auto& tm : parts) {
    const DenseVector<Scalar> block = transfer_slopes(full, tm);
    out.segment(at, block.size()) = block;
    at += block.size();
  }
  return out;
}

// Zero-padded forms.  Columns of c_ext outside the subset are zero and the
// subset block reproduces the compact matrix, so the product identity
// carries over verbatim.
template <class Scalar>
ExtendedTransferT<Scalar> extend(const TransferMatrixT<Scalar>& tm) {
  const Index n = tm.c0.size();
  ExtendedTransferT<Scalar> out{tm.subset, tm.c0, DenseMatrix<Scalar>::Zero(n, n),
                                tm.fingerprint};
  for (int pos = 0; pos < tm.subset.k(); ++pos) out.c_ext.col(tm.subset[pos] - 1) = tm.c.col(pos);
  return out;
}

template <class Scalar>
ExtendedSubModelT<Scalar> extend_sub(const SubModelT<Scalar>& sm) {
  const Index n = sm.subset.ambient();
  ExtendedSubModelT<Scalar> out{sm.subset, sm.a0, DenseVector<Scalar>::Zero(n), sm.fingerprint};
  for (int pos = 0; pos < sm.subset.k(); ++pos) out.a_ext(sm.subset[pos] - 1) = sm.a(pos);
  return out;
}

}  // namespace ct
