#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ct/dataset.hpp"

namespace ct {

namespace detail {

// Bounded draw from the raw 64-bit stream.  std::uniform_int_distribution is
// not reproducible across standard libraries; plain modulo is.
inline int draw_int(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

}  // namespace detail

// Deterministic synthetic sample: integer predictors in [-10, 10], response
// an integer linear combination of the predictors (coefficients in [-5, 5],
// intercept in [-10, 10]) plus integer noise in [-5, 5].  Integer values make
// the exact-rational path lossless.  Candidates are redrawn until no column
// is constant, so the result always satisfies the Dataset invariants.
inline Dataset make_synthetic(std::uint64_t seed, int n, int m) {
  if (n < 1) throw Error("make_synthetic: n must be >= 1");
  if (m < n + 2)
    throw DataError(DataError::Kind::TooFewRows,
                    "make_synthetic: m = " + std::to_string(m) + " needs at least n+2 = " +
                        std::to_string(n + 2));
  std::mt19937_64 rng(seed);
  Eigen::MatrixXd values(m, n + 1);
  for (int attempt = 0;; ++attempt) {
    if (attempt > 256) throw Error("make_synthetic: could not draw a nonconstant sample");
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < n; ++c) values(r, c) = detail::draw_int(rng, -10, 10);
    const int intercept = detail::draw_int(rng, -10, 10);
    std::vector<int> coef(static_cast<std::size_t>(n));
    for (int c = 0; c < n; ++c) coef[static_cast<std::size_t>(c)] = detail::draw_int(rng, -5, 5);
    for (int r = 0; r < m; ++r) {
      long acc = intercept;
      for (int c = 0; c < n; ++c)
        acc += static_cast<long>(coef[static_cast<std::size_t>(c)]) *
               static_cast<long>(values(r, c));
      values(r, n) = static_cast<double>(acc + detail::draw_int(rng, -5, 5));
    }
    bool ok = true;
    for (int c = 0; c <= n && ok; ++c) {
      bool constant = true;
      for (int r = 1; r < m && constant; ++r) constant = values(r, c) == values(0, c);
      ok = !constant;
    }
    if (ok) break;
  }
  std::vector<std::string> names;
  for (int c = 1; c <= n; ++c) names.push_back("x" + std::to_string(c));
  return make_dataset(std::move(names), "y", std::move(values));
}

}  // namespace ct
