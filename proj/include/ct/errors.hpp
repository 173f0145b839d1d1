#pragma once

#include <stdexcept>
#include <string>

namespace ct {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Ingestion or validation failure.  `kind` distinguishes the violated
// contract; `row` (1-based data row) and `column` locate it when known.
struct DataError : Error {
  enum class Kind {
    MalformedCsv,
    MissingResponse,
    NonNumericCell,
    ConstantColumn,
    TooFewRows,
    NonFinite,
  };

  Kind kind;
  long row = -1;
  std::string column;

  DataError(Kind k, const std::string& msg, long row_ = -1, std::string col = {})
      : Error(msg), kind(k), row(row_), column(std::move(col)) {}
};

struct SubsetError : Error {
  using Error::Error;
};

// A normal-equation system judged singular.  `by_exact_zero` records which
// path made the call: an exact zero-determinant test (rational arithmetic)
// or the reciprocal-condition estimate of the floating LU.
struct SingularSystem : Error {
  double det_estimate;
  double rcond;
  bool by_exact_zero;

  SingularSystem(const std::string& msg, double det, double rc, bool exact_zero)
      : Error(msg), det_estimate(det), rcond(rc), by_exact_zero(exact_zero) {}
};

struct SingularTransferMatrix : Error {
  double rcond;

  SingularTransferMatrix(const std::string& msg, double rc) : Error(msg), rcond(rc) {}
};

struct CapabilityExceeded : Error {
  using Error::Error;
};

struct FingerprintMismatch : Error {
  using Error::Error;
};

// Lossless rational conversion requested for a value without decimal or
// integer provenance.
struct NonRepresentable : Error {
  long row = -1;
  std::string column;

  explicit NonRepresentable(const std::string& msg, long row_ = -1, std::string col = {})
      : Error(msg), row(row_), column(std::move(col)) {}
};

}  // namespace ct
