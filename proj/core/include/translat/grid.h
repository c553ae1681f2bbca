// core/include/translat/grid.h
//
// Copyright 2026  The translat Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TRANSLAT_GRID_H_
#define TRANSLAT_GRID_H_

#include <cassert>
#include <cstddef>
#include <vector>

namespace translat {

// Dense row-major 2-D table.  Indices here are 0-based; the domain types
// that wrap a Grid expose the 1-based frame index t used throughout the
// recursions and document their offsets.
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(int rows, int cols, T fill = T{})
      : rows_(rows),
        cols_(cols),
        v_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols),
           fill) {}

  T &at(int r, int c) { return v_[index(r, c)]; }
  const T &at(int r, int c) const { return v_[index(r, c)]; }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t size() const { return v_.size(); }

  std::vector<T> &data() { return v_; }
  const std::vector<T> &data() const { return v_; }

  bool operator==(const Grid &) const = default;

 private:
  std::size_t index(int r, int c) const {
    assert(r >= 0 && r < rows_ && c >= 0 && c < cols_);
    return static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) + c;
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<T> v_;
};

}  // namespace translat

#endif  // TRANSLAT_GRID_H_
