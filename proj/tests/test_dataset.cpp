#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <random>
#include <sstream>

#include "ct/dataset.hpp"
#include "ct/generator.hpp"
#include "ct/moments.hpp"

namespace {

ct::Dataset from_csv(const std::string& text, const std::string& response) {
  std::istringstream in(text);
  return ct::load_csv(in, response);
}

}  // namespace

TEST_CASE("load_csv parses a simple table") {
  std::string text = "x1,x2,y\n";
  for (int r = 0; r < 10; ++r)
    text += std::to_string(r + 1) + "," + std::to_string(2 * r - 3) + "," +
            std::to_string(3 * r + 1) + "\n";
  const ct::Dataset d = from_csv(text, "y");
  CHECK(d.n() == 2);
  CHECK(d.m() == 10);
  CHECK(d.predictor_names == std::vector<std::string>{"x1", "x2"});
  CHECK(d.response_name == "y");
  CHECK(d.values(0, 0) == 1.0);
  CHECK(d.values(0, 1) == -3.0);
  CHECK(d.values(0, 2) == 1.0);
  CHECK(d.values(9, 2) == 28.0);
  CHECK(d.raw_cells.size() == 10);
  CHECK(d.raw_cells[0][1] == "-3");
}

TEST_CASE("load_csv keeps predictor order when the response is a middle column") {
  const ct::Dataset d = from_csv("x1,y,x2\n1,10,5\n2,20,4\n3,35,2\n4,41,9\n", "y");
  CHECK(d.predictor_names == std::vector<std::string>{"x1", "x2"});
  CHECK(d.values(0, 0) == 1.0);
  CHECK(d.values(0, 1) == 5.0);   // x2 stays second predictor
  CHECK(d.values(0, 2) == 10.0);  // response moved last
}

TEST_CASE("load_csv rejects a constant column and names it") {
  const std::string text = "x1,x2,y\n1,5.0,1\n2,5.0,3\n3,5.0,4\n4,5.0,9\n";
  try {
    from_csv(text, "y");
    FAIL("expected DataError");
  } catch (const ct::DataError& e) {
    CHECK(e.kind == ct::DataError::Kind::ConstantColumn);
    CHECK(e.column == "x2");
  }
}

TEST_CASE("load_csv names the row of a non-numeric cell") {
  const std::string text = "x1,x2,y\n1,2,1\n3,4,3\n2,7,6\nabc,1,0\n4,5,4\n";
  try {
    from_csv(text, "y");
    FAIL("expected DataError");
  } catch (const ct::DataError& e) {
    CHECK(e.kind == ct::DataError::Kind::NonNumericCell);
    CHECK(e.row == 4);
    CHECK(e.column == "x1");
  }
}

TEST_CASE("load_csv error catalogue") {
  SUBCASE("missing response column") {
    try {
      from_csv("x1,x2,y\n1,2,3\n", "z");
      FAIL("expected DataError");
    } catch (const ct::DataError& e) {
      CHECK(e.kind == ct::DataError::Kind::MissingResponse);
      CHECK(e.column == "z");
    }
  }
  SUBCASE("too few rows") {
    try {
      from_csv("x1,x2,y\n1,2,3\n2,1,4\n3,5,1\n", "y");  // n= 2 needs m >= 4
      FAIL("expected DataError");
    } catch (const ct::DataError& e) {
      CHECK(e.kind == ct::DataError::Kind::TooFewRows);
    }
  }
  SUBCASE("ragged row") {
    try {
      from_csv("x1,x2,y\n1,2,3\n2,1\n3,5,1\n4,4,4\n", "y");
      FAIL("expected DataError");
    } catch (const ct::DataError& e) {
      CHECK(e.kind == ct::DataError::Kind::MalformedCsv);
      CHECK(e.row == 2);
    }
  }
  SUBCASE("non-finite cell") {
    try {
      from_csv("x1,x2,y\n1,2,3\n2,inf,4\n3,5,1\n4,4,4\n", "y");
      FAIL("expected DataError");
    } catch (const ct::DataError& e) {
      CHECK(e.kind == ct::DataError::Kind::NonFinite);
      CHECK(e.row == 2);
    }
  }
  SUBCASE("duplicate header") {
    CHECK_THROWS_AS(from_csv("x1,x1,y\n1,2,3\n2,1,4\n3,5,1\n4,4,4\n", "y"), ct::DataError);
  }
}

TEST_CASE("compute_moments matches the hand-summed two-row case") {
  Eigen::MatrixXd values(2, 3);
  values << 1, 2, 1, 3, 4, 3;  // rows (x1,x2,y)
  const ct::Moments ms = ct::compute_moments(values);
  CHECK(ms.n == 2);
  CHECK(ms.mean_x(0) == 2.0);
  CHECK(ms.mean_x(1) == 3.0);
  CHECK(ms.mean_y == 2.0);
  CHECK(ms.xx(0, 0) == 5.0);
  CHECK(ms.xx(0, 1) == 7.0);
  CHECK(ms.xx(1, 0) == 7.0);
  CHECK(ms.xx(1, 1) == 10.0);
  CHECK(ms.xy(0) == 5.0);
  CHECK(ms.xy(1) == 7.0);
}

TEST_CASE("response equal to the single predictor makes xy the diagonal moment") {
  std::mt19937_64 rng(11);
  Eigen::MatrixXd values(8, 2);
  for (int r = 0; r < 8; ++r) {
    const double v = static_cast<double>(rng() % 19) - 9.0;
    values(r, 0) = v;
    values(r, 1) = v;
  }
  const ct::Moments ms = ct::compute_moments(values);
  CHECK(ms.xy(0) == ms.xx(0, 0));
}

TEST_CASE("second-moment matrix is symmetric") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const ct::Dataset d = ct::make_synthetic(seed, 2 + static_cast<int>(seed % 4), 15);
    const ct::Moments ms = ct::compute_moments(d);
    for (ct::Index i = 0; i < ms.n; ++i)
      for (ct::Index j = 0; j < ms.n; ++j) CHECK(ms.xx(i, j) == ms.xx(j, i));
  }
}

TEST_CASE("row permutation cannot change a single moment bit") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> dist(-3.0, 3.0);
  const int m = 37, n = 3;
  Eigen::MatrixXd values(m, n + 1);
  for (int r = 0; r < m; ++r)
    for (int c = 0; c <= n; ++c) values(r, c) = dist(rng);

  std::vector<int> perm(m);
  for (int r = 0; r < m; ++r) perm[static_cast<std::size_t>(r)] = r;
  std::shuffle(perm.begin(), perm.end(), rng);
  Eigen::MatrixXd shuffled(m, n + 1);
  for (int r = 0; r < m; ++r) shuffled.row(r) = values.row(perm[static_cast<std::size_t>(r)]);

  const ct::Moments a = ct::compute_moments(values);
  const ct::Moments b = ct::compute_moments(shuffled);
  CHECK(a.fingerprint == b.fingerprint);  // fingerprint hashes every bit
  CHECK(a.mean_x == b.mean_x);
  CHECK(a.mean_y == b.mean_y);
  CHECK(a.xx == b.xx);
  CHECK(a.xy == b.xy);
}

TEST_CASE("covariance matrix is positive semidefinite within tolerance") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const int n = 2 + static_cast<int>(seed % 5);
    const ct::Dataset d = ct::make_synthetic(seed * 31 + 7, n, n + 5 + static_cast<int>(seed % 20));
    const ct::Moments ms = ct::compute_moments(d);
    const Eigen::MatrixXd cov = ms.xx - ms.mean_x * ms.mean_x.transpose();
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
    CHECK(es.eigenvalues().minCoeff() >= -1e-9 * cov.trace());
  }
}

TEST_CASE("synthetic generator is deterministic and in range") {
  const ct::Dataset a = ct::make_synthetic(123, 4, 20);
  const ct::Dataset b = ct::make_synthetic(123, 4, 20);
  CHECK(a.values == b.values);
  CHECK(a.fingerprint() == b.fingerprint());
  for (ct::Index r = 0; r < a.m(); ++r)
    for (ct::Index c = 0; c < 4; ++c) {
      CHECK(a.values(r, c) >= -10.0);
      CHECK(a.values(r, c) <= 10.0);
      CHECK(a.values(r, c) == std::nearbyint(a.values(r, c)));
    }
  CHECK(ct::make_synthetic(124, 4, 20).fingerprint() != a.fingerprint());
  CHECK_THROWS_AS(ct::make_synthetic(1, 4, 5), ct::DataError);  // m < n + 2
}

TEST_CASE("generated datasets satisfy the invariants") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const int n = 1 + static_cast<int>(seed % 6);
    const ct::Dataset d = ct::make_synthetic(seed, n, n + 3 + static_cast<int>(seed % 10));
    CHECK_NOTHROW(ct::validate_dataset(d));
  }
}
