#pragma once

#include <charconv>
#include <cmath>
#include <istream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ct/errors.hpp"
#include "ct/hash.hpp"
#include "ct/types.hpp"

namespace ct {

// One rectangular sample: m rows of n predictor values plus the response
// (stored as the last column of `values`).  `raw_cells` keeps the original
// cell text when the data came from CSV so the exact-arithmetic path can
// reconstruct decimal values losslessly; it is empty for in-memory data.
struct Dataset {
  std::vector<std::string> predictor_names;
  std::string response_name;
  Eigen::MatrixXd values;                           // m x (n+1)
  std::vector<std::vector<std::string>> raw_cells;  // same layout as values, or empty

  Index n() const { return values.cols() - 1; }
  Index m() const { return values.rows(); }

  const std::string& column_name(Index col) const {
    return col == n() ? response_name : predictor_names[static_cast<std::size_t>(col)];
  }

  std::uint64_t fingerprint() const {
    std::uint64_t h = detail::fnv1a_u64(static_cast<std::uint64_t>(m()), detail::kFnvOffset);
    h = detail::fnv1a_u64(static_cast<std::uint64_t>(n()), h);
    for (const auto& name : predictor_names) h = detail::fnv1a_str(name, h);
    h = detail::fnv1a_str(response_name, h);
    for (Index r = 0; r < m(); ++r)
      for (Index c = 0; c < values.cols(); ++c) h = detail::fnv1a_double(values(r, c), h);
    return h;
  }
};

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return std::string(s.substr(b, e - b));
}

inline std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      out.push_back(trim(std::string_view(line).substr(start)));
      return out;
    }
    out.push_back(trim(std::string_view(line).substr(start, pos - start)));
    start = pos + 1;
  }
}

inline double parse_cell(const std::string& cell, long row, const std::string& column) {
  std::string_view sv = cell;
  if (!sv.empty() && sv.front() == '+') sv.remove_prefix(1);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), value);
  if (ec != std::errc() || end != sv.data() + sv.size() || sv.empty())
    throw DataError(DataError::Kind::NonNumericCell,
                    "row " + std::to_string(row) + ", column '" + column +
                        "': non-numeric cell '" + cell + "'",
                    row, column);
  if (!std::isfinite(value))
    throw DataError(DataError::Kind::NonFinite,
                    "row " + std::to_string(row) + ", column '" + column +
                        "': non-finite value '" + cell + "'",
                    row, column);
  return value;
}

}  // namespace detail

// Invariants every Dataset must satisfy: m >= n + 2, all values finite, and
// no constant column (predictor or response).
inline void validate_dataset(const Dataset& d) {
  const Index n = d.n(), m = d.m();
  if (n < 1)
    throw DataError(DataError::Kind::MalformedCsv, "dataset has no predictor columns");
  if (m < n + 2)
    throw DataError(DataError::Kind::TooFewRows,
                    "dataset has " + std::to_string(m) + " rows; need at least n+2 = " +
                        std::to_string(n + 2));
  for (Index c = 0; c <= n; ++c) {
    bool constant = true;
    for (Index r = 0; r < m; ++r) {
      if (!std::isfinite(d.values(r, c)))
        throw DataError(DataError::Kind::NonFinite,
                        "row " + std::to_string(r + 1) + ", column '" + d.column_name(c) +
                            "': non-finite value",
                        r + 1, d.column_name(c));
      if (d.values(r, c) != d.values(0, c)) constant = false;
    }
    if (constant)
      throw DataError(DataError::Kind::ConstantColumn,
                      "column '" + d.column_name(c) + "' is constant", -1, d.column_name(c));
  }
}

inline Dataset make_dataset(std::vector<std::string> predictor_names, std::string response_name,
                            Eigen::MatrixXd values,
                            std::vector<std::vector<std::string>> raw_cells = {}) {
  Dataset d{std::move(predictor_names), std::move(response_name), std::move(values),
            std::move(raw_cells)};
  validate_dataset(d);
  return d;
}

// Strict comma-separated CSV with one header row, '.' decimal point, no
// quoting.  Predictors keep header order; the response column moves to the
// last position of `values`.  Row numbers in errors are 1-based data rows.
inline Dataset load_csv(std::istream& source, const std::string& response_column) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(source, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw DataError(DataError::Kind::MalformedCsv, "empty CSV input");

  const std::vector<std::string> header = detail::split_fields(lines[0]);
  if (header.size() < 2)
    throw DataError(DataError::Kind::MalformedCsv, "header must name at least two columns");
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i].empty())
      throw DataError(DataError::Kind::MalformedCsv, "header has an empty column name");
    for (std::size_t j = i + 1; j < header.size(); ++j)
      if (header[i] == header[j])
        throw DataError(DataError::Kind::MalformedCsv,
                        "duplicate column name '" + header[i] + "'", -1, header[i]);
  }

  std::size_t response_pos = header.size();
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == response_column) response_pos = i;
  if (response_pos == header.size())
    throw DataError(DataError::Kind::MissingResponse,
                    "response column '" + response_column + "' not found in header", -1,
                    response_column);

  const Index cols = static_cast<Index>(header.size());
  const Index rows = static_cast<Index>(lines.size()) - 1;
  Eigen::MatrixXd values(rows, cols);
  std::vector<std::vector<std::string>> raw(static_cast<std::size_t>(rows));

  // Column c of the output is: predictors in header order, then the response.
  std::vector<Index> dest(static_cast<std::size_t>(cols));
  {
    Index next = 0;
    for (std::size_t i = 0; i < header.size(); ++i)
      dest[i] = (i == response_pos) ? cols - 1 : next++;
  }

  for (Index r = 0; r < rows; ++r) {
    const long row_no = static_cast<long>(r) + 1;
    const std::string& text = lines[static_cast<std::size_t>(r) + 1];
    if (text.empty())
      throw DataError(DataError::Kind::MalformedCsv, "row " + std::to_string(row_no) + ": empty line",
                      row_no);
    const std::vector<std::string> fields = detail::split_fields(text);
    if (static_cast<Index>(fields.size()) != cols)
      throw DataError(DataError::Kind::MalformedCsv,
                      "row " + std::to_string(row_no) + ": expected " + std::to_string(cols) +
                          " fields, got " + std::to_string(fields.size()),
                      row_no);
    raw[static_cast<std::size_t>(r)].resize(static_cast<std::size_t>(cols));
    for (Index c = 0; c < cols; ++c) {
      const auto& cell = fields[static_cast<std::size_t>(c)];
      values(r, dest[static_cast<std::size_t>(c)]) =
          detail::parse_cell(cell, row_no, header[static_cast<std::size_t>(c)]);
      raw[static_cast<std::size_t>(r)][static_cast<std::size_t>(dest[static_cast<std::size_t>(c)])] =
          cell;
    }
  }

  std::vector<std::string> predictor_names;
  for (std::size_t i = 0; i < header.size(); ++i)
    if (i != response_pos) predictor_names.push_back(header[i]);

  return make_dataset(std::move(predictor_names), header[response_pos], std::move(values),
                      std::move(raw));
}

}  // namespace ct
