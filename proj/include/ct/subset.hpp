#pragma once

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "ct/errors.hpp"

namespace ct {

// Strictly increasing 1-based predictor indices {i_1,...,i_k} within an
// ambient predictor count n, matching the X_1..X_n labeling at the surface.
class SubsetIndex {
 public:
  SubsetIndex(std::vector<int> indices, int ambient)
      : indices_(std::move(indices)), ambient_(ambient) {
    if (ambient_ < 1) throw SubsetError("subset: ambient predictor count must be >= 1");
    if (indices_.empty()) throw SubsetError("subset: must contain at least one index");
    int prev = 0;
    for (int i : indices_) {
      if (i < 1 || i > ambient_)
        throw SubsetError("subset: index " + std::to_string(i) + " out of range 1.." +
                          std::to_string(ambient_));
      if (i <= prev) throw SubsetError("subset: indices must be strictly increasing");
      prev = i;
    }
  }

  static SubsetIndex full(int ambient) {
    std::vector<int> all(static_cast<std::size_t>(ambient));
    std::iota(all.begin(), all.end(), 1);
    return SubsetIndex(std::move(all), ambient);
  }

  int k() const { return static_cast<int>(indices_.size()); }
  int ambient() const { return ambient_; }
  const std::vector<int>& indices() const { return indices_; }
  // 0-based position -> 1-based predictor index
  int operator[](int pos) const { return indices_[static_cast<std::size_t>(pos)]; }
  bool contains(int i) const { return std::binary_search(indices_.begin(), indices_.end(), i); }
  bool is_full() const { return k() == ambient_; }

  std::string to_string() const {
    std::string s = "{";
    for (std::size_t i = 0; i < indices_.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(indices_[i]);
    }
    return s + "}";
  }

  friend bool operator==(const SubsetIndex& a, const SubsetIndex& b) {
    return a.ambient_ == b.ambient_ && a.indices_ == b.indices_;
  }

 private:
  std::vector<int> indices_;
  int ambient_;
};

// Every nonempty subset of {1..n} in lexicographic order of the index
// sequence: {1}, {1,2}, {1,2,3}, {1,3}, {2}, ...  This is the iteration
// order every sweep and report uses.
inline std::vector<SubsetIndex> all_nonempty_subsets(int n) {
  std::vector<SubsetIndex> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int next) -> void {
    for (int i = next; i <= n; ++i) {
      cur.push_back(i);
      out.emplace_back(cur, n);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 1);
  return out;
}

}  // namespace ct
