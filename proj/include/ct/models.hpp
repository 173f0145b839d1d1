#pragma once

#include <cstdint>

#include "ct/subset.hpp"
#include "ct/types.hpp"

namespace ct {

// Fitted all-predictor model y = b0 + <b, x>.  `fingerprint` identifies the
// moment system it was fitted from; transfer operations refuse mixed inputs.
template <class Scalar>
struct FullModelT {
  Scalar b0{};
  DenseVector<Scalar> b;
  std::uint64_t fingerprint = 0;
};

// Predictor-on-subset fits, one row per predictor: x_i = c0[i] + <row i of
// c, x_I>.  Rows with i in the subset are unit convention rows, installed
// exactly rather than solved.
template <class Scalar>
struct TransferMatrixT {
  SubsetIndex subset;
  DenseVector<Scalar> c0;  // n
  DenseMatrix<Scalar> c;   // n x k
  std::uint64_t fingerprint = 0;
};

// Submodel y = a0 + <a, x_I> over the chosen subset.
template <class Scalar>
struct SubModelT {
  SubsetIndex subset;
  Scalar a0{};
  DenseVector<Scalar> a;  // k
  std::uint64_t fingerprint = 0;
};

// Zero-padded to the ambient predictor count: columns (entries) outside the
// subset are zero; inside, the compact forms are reproduced.
template <class Scalar>
struct ExtendedTransferT {
  SubsetIndex subset;
  DenseVector<Scalar> c0;     // n
  DenseMatrix<Scalar> c_ext;  // n x n
  std::uint64_t fingerprint = 0;
};

template <class Scalar>
struct ExtendedSubModelT {
  SubsetIndex subset;
  Scalar a0{};
  DenseVector<Scalar> a_ext;  // n
  std::uint64_t fingerprint = 0;
};

using FullModel = FullModelT<double>;
using TransferMatrix = TransferMatrixT<double>;
using SubModel = SubModelT<double>;
using ExtendedTransfer = ExtendedTransferT<double>;
using ExtendedSubModel = ExtendedSubModelT<double>;

}  // namespace ct
