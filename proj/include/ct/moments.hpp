#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "ct/dataset.hpp"
#include "ct/hash.hpp"
#include "ct/types.hpp"

namespace ct {

// First and second sample moments with 1/m normalization.  Every
// normal-equation system in this library is assembled from these values.
template <class Scalar>
struct MomentSystem {
  Index n = 0;
  DenseVector<Scalar> mean_x;
  Scalar mean_y{};
  DenseMatrix<Scalar> xx;  // symmetric second moments of the predictors
  DenseVector<Scalar> xy;
  std::uint64_t fingerprint = 0;
};

using Moments = MomentSystem<double>;

namespace detail {

// Neumaier-compensated sum over a canonically ordered buffer.  Sorting the
// addends first (with -0 ordered before +0) makes the result a function of
// the multiset alone, so shuffling dataset rows cannot change an output bit.
inline double canonical_sum(std::vector<double>& buf) {
  std::sort(buf.begin(), buf.end(), [](double a, double b) {
    if (a < b) return true;
    if (b < a) return false;
    return std::signbit(a) && !std::signbit(b);
  });
  double sum = 0.0, comp = 0.0;
  for (double v : buf) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v))
      comp += (sum - t) + v;
    else
      comp += (v - t) + sum;
    sum = t;
  }
  return (sum + comp) + 0.0;  // fold a possible -0 into +0
}

inline std::uint64_t moments_fingerprint(const Moments& ms) {
  std::uint64_t h = fnv1a_u64(static_cast<std::uint64_t>(ms.n), kFnvOffset);
  for (Index i = 0; i < ms.n; ++i) h = fnv1a_double(ms.mean_x(i), h);
  h = fnv1a_double(ms.mean_y, h);
  for (Index i = 0; i < ms.n; ++i)
    for (Index j = 0; j < ms.n; ++j) h = fnv1a_double(ms.xx(i, j), h);
  for (Index i = 0; i < ms.n; ++i) h = fnv1a_double(ms.xy(i), h);
  return h;
}

}  // namespace detail

// Moments of raw (predictors | response) rows, response in the last column.
// One canonical summation per moment, column-major passes.
inline Moments compute_moments(const Eigen::MatrixXd& values) {
  const Index m = values.rows();
  const Index n = values.cols() - 1;
  Moments ms;
  ms.n = n;
  ms.mean_x.resize(n);
  ms.xx.resize(n, n);
  ms.xy.resize(n);
  std::vector<double> buf(static_cast<std::size_t>(m));
  const double inv_m = static_cast<double>(m);
  for (Index i = 0; i < n; ++i) {
    for (Index r = 0; r < m; ++r) buf[static_cast<std::size_t>(r)] = values(r, i);
    ms.mean_x(i) = detail::canonical_sum(buf) / inv_m;
  }
  for (Index r = 0; r < m; ++r) buf[static_cast<std::size_t>(r)] = values(r, n);
  ms.mean_y = detail::canonical_sum(buf) / inv_m;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i; j < n; ++j) {
      for (Index r = 0; r < m; ++r) buf[static_cast<std::size_t>(r)] = values(r, i) * values(r, j);
      const double moment = detail::canonical_sum(buf) / inv_m;
      ms.xx(i, j) = moment;
      ms.xx(j, i) = moment;
    }
    for (Index r = 0; r < m; ++r) buf[static_cast<std::size_t>(r)] = values(r, i) * values(r, n);
    ms.xy(i) = detail::canonical_sum(buf) / inv_m;
  }
  ms.fingerprint = detail::moments_fingerprint(ms);
  return ms;
}

inline Moments compute_moments(const Dataset& d) { return compute_moments(d.values); }

}  // namespace ct
