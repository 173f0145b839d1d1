#pragma once

#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "ct/dataset.hpp"
#include "ct/determinant.hpp"
#include "ct/hash.hpp"
#include "ct/models.hpp"
#include "ct/moments.hpp"
#include "ct/normal_system.hpp"
#include "ct/ols.hpp"
#include "ct/rational.hpp"
#include "ct/subset.hpp"

namespace ct {

using ExactMoments = MomentSystem<Rational>;

inline constexpr int kDefaultLaplaceMax = 12;

// Whether values without decimal or integer provenance may be converted by
// expanding the binary double exactly.  Off by default: such a conversion
// silently changes what number the user meant.
enum class BinaryFloatPolicy { reject, allow };

namespace detail {

inline std::uint64_t exact_fingerprint(const ExactMoments& ms) {
  std::uint64_t h = fnv1a_u64(static_cast<std::uint64_t>(ms.n), kFnvOffset);
  const auto mix = [&h](const Rational& q) { h = fnv1a_str(q.get_str(), h); };
  for (Index i = 0; i < ms.n; ++i) mix(ms.mean_x(i));
  mix(ms.mean_y);
  for (Index i = 0; i < ms.n; ++i)
    for (Index j = 0; j < ms.n; ++j) mix(ms.xx(i, j));
  for (Index i = 0; i < ms.n; ++i) mix(ms.xy(i));
  return h;
}

inline Rational exact_cell(const Dataset& d, Index r, Index c, BinaryFloatPolicy policy) {
  if (!d.raw_cells.empty())
    return rational_from_decimal(d.raw_cells[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]);
  const double v = d.values(r, c);
  if (is_exact_integer(v)) return Rational(v);
  if (policy == BinaryFloatPolicy::reject)
    throw NonRepresentable("to_rational: value at row " + std::to_string(r + 1) + ", column '" +
                               d.column_name(c) +
                               "' has no decimal provenance; pass BinaryFloatPolicy::allow to "
                               "convert the binary double exactly",
                           static_cast<long>(r) + 1, d.column_name(c));
  return rational_from_double(v);
}

}  // namespace detail

// Exact moments of raw rational rows (response in the last column).
inline ExactMoments exact_moments(const RationalMatrix& values) {
  const Index m = values.rows();
  const Index n = values.cols() - 1;
  ExactMoments ms;
  ms.n = n;
  ms.mean_x.resize(n);
  ms.xx.resize(n, n);
  ms.xy.resize(n);
  const Rational inv_m(1, static_cast<unsigned long>(m));
  for (Index i = 0; i <= n; ++i) {
    Rational acc(0);
    for (Index r = 0; r < m; ++r) acc += values(r, i);
    acc *= inv_m;
    if (i < n)
      ms.mean_x(i) = acc;
    else
      ms.mean_y = acc;
  }
  for (Index i = 0; i < n; ++i) {
    for (Index j = i; j < n; ++j) {
      Rational acc(0);
      for (Index r = 0; r < m; ++r) acc += values(r, i) * values(r, j);
      acc *= inv_m;
      ms.xx(i, j) = acc;
      ms.xx(j, i) = acc;
    }
    Rational acc(0);
    for (Index r = 0; r < m; ++r) acc += values(r, i) * values(r, n);
    ms.xy(i) = acc * inv_m;
  }
  ms.fingerprint = detail::exact_fingerprint(ms);
  return ms;
}

// Exact moments of a dataset.  Cells convert from their CSV text when
// available, from integral doubles otherwise; anything else needs the
// explicit binary-float opt-in.
inline ExactMoments to_rational(const Dataset& d,
                                BinaryFloatPolicy policy = BinaryFloatPolicy::reject) {
  RationalMatrix values(d.m(), d.n() + 1);
  for (Index r = 0; r < d.m(); ++r)
    for (Index c = 0; c <= d.n(); ++c) values(r, c) = detail::exact_cell(d, r, c, policy);
  return exact_moments(values);
}

// Rational view of already-computed floating moments.  Only integral values
// convert without the opt-in; a rounded moment has lost its provenance.
inline ExactMoments to_rational(const Moments& ms,
                                BinaryFloatPolicy policy = BinaryFloatPolicy::reject) {
  const auto convert = [&](double v, const char* what) -> Rational {
    if (is_exact_integer(v)) return Rational(v);
    if (policy == BinaryFloatPolicy::reject)
      throw NonRepresentable(std::string("to_rational: moment ") + what +
                             " is not integral; pass BinaryFloatPolicy::allow to convert the "
                             "binary double exactly");
    return rational_from_double(v);
  };
  ExactMoments out;
  out.n = ms.n;
  out.mean_x.resize(ms.n);
  out.xx.resize(ms.n, ms.n);
  out.xy.resize(ms.n);
  for (Index i = 0; i < ms.n; ++i) out.mean_x(i) = convert(ms.mean_x(i), "mean_x");
  out.mean_y = convert(ms.mean_y, "mean_y");
  for (Index i = 0; i < ms.n; ++i)
    for (Index j = 0; j < ms.n; ++j) out.xx(i, j) = convert(ms.xx(i, j), "xx");
  for (Index i = 0; i < ms.n; ++i) out.xy(i) = convert(ms.xy(i), "xy");
  out.fingerprint = detail::exact_fingerprint(out);
  return out;
}

// Order n+k+2 block matrix coupling the full normal system with the subset
// system for subset position j:
//
//   [ M | 0 ]   M: full system matrix with its response column appended,
//   [ N | R ]   N: subset-system rows spread over all predictors, first
//               column zeroed, response moments last; R: subset system
//               matrix with the j-th moment column deleted.
//
// For coherent moments this matrix is singular; the zero determinant is what
// ties the full-model and submodel Cramer determinants together.
inline RationalMatrix coupling_matrix(const ExactMoments& ms, const SubsetIndex& subset, int j) {
  const int n = static_cast<int>(ms.n);
  const int k = subset.k();
  if (subset.ambient() != n) throw SubsetError("coupling_matrix: subset ambient count mismatch");
  if (j < 1 || j > k)
    throw SubsetError("coupling_matrix: j = " + std::to_string(j) + " out of range 1.." +
                      std::to_string(k));
  const int order = n + k + 2;
  RationalMatrix a(order, order);
  a.setZero();
  // top rows: full system with response column, zero block on the right
  a(0, 0) = 1;
  for (int q = 0; q < n; ++q) a(0, q + 1) = ms.mean_x(q);
  a(0, n + 1) = ms.mean_y;
  for (int i = 0; i < n; ++i) {
    a(i + 1, 0) = ms.mean_x(i);
    for (int q = 0; q < n; ++q) a(i + 1, q + 1) = ms.xx(i, q);
    a(i + 1, n + 1) = ms.xy(i);
  }
  // bottom-left: subset rows over all predictors, first column zero
  for (int q = 0; q < n; ++q) a(n + 1, q + 1) = ms.mean_x(q);
  a(n + 1, n + 1) = ms.mean_y;
  for (int p = 0; p < k; ++p) {
    const Index ip = subset[p] - 1;
    for (int q = 0; q < n; ++q) a(n + 2 + p, q + 1) = ms.xx(ip, q);
    a(n + 2 + p, n + 1) = ms.xy(ip);
  }
  // bottom-right: subset system matrix with the j-th moment column deleted
  const auto sub = assemble_system<Rational>(ms, subset);
  int out_col = n + 2;
  for (int c = 0; c <= k; ++c) {
    if (c == j) continue;
    for (int r = 0; r <= k; ++r) a(n + 1 + r, out_col) = sub.matrix(r, c);
    ++out_col;
  }
  return a;
}

inline Rational det_exact(const RationalMatrix& m) {
  if (m.rows() != m.cols()) throw Error("det_exact: matrix must be square");
  return det_bareiss<Rational>(m);
}

struct CouplingReport {
  SubsetIndex subset;
  int j = 0;
  Rational det_value;
  bool pass = false;
};

// The coupled system's determinant must vanish identically; a nonzero value
// is a failing report, not an exception, so sweeps can aggregate.
inline CouplingReport verify_coupling_singular(const ExactMoments& ms, const SubsetIndex& subset,
                                               int j) {
  CouplingReport rep{subset, j, det_exact(coupling_matrix(ms, subset, j)), false};
  rep.pass = rep.det_value == 0;
  return rep;
}

// The n+1 column choices whose complementary-minor product can survive in
// the Laplace expansion of the coupling matrix along its first n+1 rows:
// (1..n, n+1), (1..n, n+2), and for each i in 2..n the choice missing i,
// (1,..,i-1, i+1,..,n+1, n+2).  Returned in lexicographic order.
inline std::vector<std::vector<int>> surviving_column_sets(int n, int k) {
  if (n < 2 || k < 1 || k > n)
    throw SubsetError("surviving_column_sets: need n >= 2 and 1 <= k <= n");
  std::vector<std::vector<int>> out;
  std::vector<int> base(static_cast<std::size_t>(n) + 1);
  std::iota(base.begin(), base.end(), 1);  // (1..n+1)
  out.push_back(base);
  std::vector<int> shifted = base;
  shifted.back() = n + 2;  // (1..n, n+2)
  out.push_back(shifted);
  for (int i = n; i >= 2; --i) {
    std::vector<int> s;
    for (int t = 1; t <= n + 1; ++t)
      if (t != i) s.push_back(t);
    s.push_back(n + 2);
    out.push_back(std::move(s));
  }
  return out;
}

struct LaplaceTerm {
  std::vector<int> beta;  // 1-based column choice for the expansion rows
  long long weight = 0;   // sum of the chosen column indices
  int sign = 1;           // (-1)^(|alpha| + |beta|)
  Rational top_minor;
  Rational bottom_minor;

  Rational product() const {
    Rational p = top_minor * bottom_minor;
    return sign < 0 ? Rational(-p) : p;
  }
};

struct LaplaceExpansion {
  Rational sum;
  std::vector<LaplaceTerm> terms;  // lexicographic beta order
};

// Laplace expansion along the first r rows: the determinant equals the
// signed sum over all r-column choices beta of
// minor(rows 1..r, beta) * minor(remaining rows, complement of beta).
inline LaplaceExpansion laplace_expand(const RationalMatrix& m, int r,
                                       int laplace_max = kDefaultLaplaceMax) {
  if (m.rows() != m.cols()) throw Error("laplace_expand: matrix must be square");
  const int order = static_cast<int>(m.rows());
  if (order > laplace_max)
    throw CapabilityExceeded("laplace_expand: order " + std::to_string(order) +
                             " exceeds laplace_max = " + std::to_string(laplace_max));
  if (r < 1 || r > order) throw Error("laplace_expand: row count out of range");
  const long long alpha_weight = static_cast<long long>(r) * (r + 1) / 2;

  LaplaceExpansion out;
  out.sum = 0;
  std::vector<int> beta(static_cast<std::size_t>(r));
  std::iota(beta.begin(), beta.end(), 1);
  std::vector<int> comp;
  RationalMatrix top(r, r), bottom(order - r, order - r);
  for (;;) {
    comp.clear();
    {
      std::size_t bi = 0;
      for (int c = 1; c <= order; ++c) {
        if (bi < beta.size() && beta[bi] == c)
          ++bi;
        else
          comp.push_back(c);
      }
    }
    for (int rr = 0; rr < r; ++rr)
      for (int cc = 0; cc < r; ++cc) top(rr, cc) = m(rr, beta[static_cast<std::size_t>(cc)] - 1);
    for (int rr = 0; rr < order - r; ++rr)
      for (int cc = 0; cc < order - r; ++cc)
        bottom(rr, cc) = m(r + rr, comp[static_cast<std::size_t>(cc)] - 1);

    LaplaceTerm term;
    term.beta = beta;
    term.weight = std::accumulate(beta.begin(), beta.end(), 0LL);
    term.sign = (alpha_weight + term.weight) % 2 == 0 ? 1 : -1;
    {
      RationalMatrix work = top;
      term.top_minor = detail::det_bareiss_inplace(work);
      work = bottom;
      term.bottom_minor = detail::det_bareiss_inplace(work);
    }
    out.sum += term.product();
    out.terms.push_back(std::move(term));

    int i = r - 1;
    while (i >= 0 && beta[static_cast<std::size_t>(i)] == order - r + 1 + i) --i;
    if (i < 0) break;
    ++beta[static_cast<std::size_t>(i)];
    for (int t = i + 1; t < r; ++t)
      beta[static_cast<std::size_t>(t)] = beta[static_cast<std::size_t>(t - 1)] + 1;
  }
  return out;
}

namespace detail {

inline RationalMatrix with_column(const RationalMatrix& a, Index col, const RationalVector& v) {
  RationalMatrix out = a;
  out.col(col) = v;
  return out;
}

}  // namespace detail

struct TransferIdentityReport {
  SubsetIndex subset;
  int j = 0;
  Rational lhs;  // full determinant times the subset response determinant
  Rational rhs;  // sum over predictors of the paired column-replacement determinants
  bool determinant_identity = false;
  Rational slope_direct;       // submodel slope as a Cramer ratio
  Rational slope_transferred;  // sum_i b_i c_{i,i_j} as exact ratios
  bool quotient_identity = false;

  bool pass() const { return determinant_identity && quotient_identity; }
};

// Exact two-form check that the submodel coefficient at subset position j is
// the transfer product of the full-model coefficients: once cross-multiplied
// as determinants (no division), once as the coefficient quotients.
inline TransferIdentityReport verify_transfer_identity(const ExactMoments& ms,
                                                       const SubsetIndex& subset, int j) {
  const int n = static_cast<int>(ms.n);
  const int k = subset.k();
  if (j < 1 || j > k)
    throw SubsetError("verify_transfer_identity: j = " + std::to_string(j) +
                      " out of range 1.." + std::to_string(k));
  const auto full_sys = assemble_system<Rational>(ms, SubsetIndex::full(n));
  const auto sub_sys = assemble_system<Rational>(ms, subset);
  const Rational full_det = det_exact(full_sys.matrix);
  const Rational sub_det = det_exact(sub_sys.matrix);
  if (full_det == 0 || sub_det == 0)
    throw SingularSystem("verify_transfer_identity: singular system (exact zero determinant)",
                         0.0, 0.0, true);
  TransferIdentityReport rep{subset, j, Rational(0), Rational(0), false,
                             Rational(0), Rational(0), false};
  const Rational response_det =
      det_exact(detail::with_column(sub_sys.matrix, j, sub_sys.rhs_y));
  rep.lhs = full_det * response_det;
  for (int i = 1; i <= n; ++i) {
    const Rational full_col = det_exact(detail::with_column(full_sys.matrix, i, full_sys.rhs_y));
    const Rational sub_col =
        det_exact(detail::with_column(sub_sys.matrix, j, sub_sys.rhs_x.col(i - 1)));
    rep.rhs += full_col * sub_col;
    rep.slope_transferred += (full_col / full_det) * (sub_col / sub_det);
  }
  rep.determinant_identity = rep.lhs == rep.rhs;
  rep.slope_direct = response_det / sub_det;
  rep.quotient_identity = rep.slope_direct == rep.slope_transferred;
  return rep;
}

// Exact fits through the Cramer path.  These mirror the floating fits and
// double as their oracle on integer or decimal-exact data.
inline SubModelT<Rational> fit_submodel_exact(const ExactMoments& ms, const SubsetIndex& subset,
                                              int cramer_max = kDefaultCramerMax) {
  const auto sys = assemble_system<Rational>(ms, subset);
  const auto cr = solve_cramer<Rational>(sys, 0, cramer_max);
  return SubModelT<Rational>{subset, cr.solution(0), cr.solution.tail(subset.k()),
                             ms.fingerprint};
}

inline FullModelT<Rational> fit_full_exact(const ExactMoments& ms,
                                           int cramer_max = kDefaultCramerMax) {
  const auto s = fit_submodel_exact(ms, SubsetIndex::full(static_cast<int>(ms.n)), cramer_max);
  return FullModelT<Rational>{s.a0, s.a, s.fingerprint};
}

inline TransferMatrixT<Rational> fit_transfer_exact(const ExactMoments& ms,
                                                    const SubsetIndex& subset,
                                                    int cramer_max = kDefaultCramerMax) {
  const int n = static_cast<int>(ms.n);
  const int k = subset.k();
  TransferMatrixT<Rational> tm{subset, RationalVector::Zero(n), RationalMatrix::Zero(n, k),
                               ms.fingerprint};
  for (int pos = 0; pos < k; ++pos) tm.c(subset[pos] - 1, pos) = 1;
  if (subset.is_full()) return tm;
  const auto sys = assemble_system<Rational>(ms, subset);
  for (int i = 1; i <= n; ++i) {
    if (subset.contains(i)) continue;
    const auto cr = solve_cramer<Rational>(sys, i, cramer_max);
    tm.c0(i - 1) = cr.solution(0);
    for (int pos = 0; pos < k; ++pos) tm.c(i - 1, pos) = cr.solution(pos + 1);
  }
  return tm;
}

}  // namespace ct
