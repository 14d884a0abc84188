#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include <opcouple/errors.hpp>
#include <opcouple/rational.hpp>

namespace opcouple {

// Dense matrix of exact rationals, row-major. Zero-dimensional shapes
// (0 x n, m x 0, 0 x 0) are first class: the unique 0 x 0 identity is a
// valid operator and empty blocks participate in block assembly.
class RatMatrix {
 public:
  RatMatrix() : rows_(0), cols_(0) {}

  RatMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  // Entry-list construction, used mostly in tests: RatMatrix{{1,2},{3,4}}.
  RatMatrix(std::initializer_list<std::initializer_list<Rational>> rows)
      : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
      if (row.size() != cols_) throw DimensionMismatch("ragged entry list");
      for (const auto& v : row) data_.push_back(v);
    }
  }

  static RatMatrix zero(std::size_t rows, std::size_t cols) { return RatMatrix(rows, cols); }

  static RatMatrix identity(std::size_t n) {
    RatMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Rational(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }
  bool is_empty() const { return rows_ == 0 || cols_ == 0; }

  const Rational& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }
  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

  bool is_zero() const {
    for (const auto& v : data_)
      if (!v.is_zero()) return false;
    return true;
  }

  bool is_identity() const {
    if (!is_square()) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if ((*this)(i, j) != Rational(i == j ? 1 : 0)) return false;
    return true;
  }

  RatMatrix transpose() const {
    RatMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  RatMatrix operator-() const {
    RatMatrix m(rows_, cols_);
    for (std::size_t k = 0; k < data_.size(); ++k) m.data_[k] = -data_[k];
    return m;
  }

  friend RatMatrix operator+(const RatMatrix& a, const RatMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
      throw DimensionMismatch("matrix sum: " + a.shape_str() + " vs " + b.shape_str());
    RatMatrix m(a.rows_, a.cols_);
    for (std::size_t k = 0; k < a.data_.size(); ++k) m.data_[k] = a.data_[k] + b.data_[k];
    return m;
  }

  friend RatMatrix operator-(const RatMatrix& a, const RatMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
      throw DimensionMismatch("matrix difference: " + a.shape_str() + " vs " + b.shape_str());
    RatMatrix m(a.rows_, a.cols_);
    for (std::size_t k = 0; k < a.data_.size(); ++k) m.data_[k] = a.data_[k] - b.data_[k];
    return m;
  }

  friend RatMatrix operator*(const RatMatrix& a, const RatMatrix& b) {
    if (a.cols_ != b.rows_)
      throw DimensionMismatch("matrix product: " + a.shape_str() + " times " + b.shape_str());
    RatMatrix m(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Rational& aik = a(i, k);
        if (aik.is_zero()) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) {
          const Rational& bkj = b(k, j);
          if (bkj.is_zero()) continue;
          m(i, j) += aik * bkj;
        }
      }
    }
    return m;
  }

  friend RatMatrix operator*(const Rational& s, const RatMatrix& a) {
    RatMatrix m(a.rows_, a.cols_);
    for (std::size_t k = 0; k < a.data_.size(); ++k) m.data_[k] = s * a.data_[k];
    return m;
  }

  friend bool operator==(const RatMatrix& a, const RatMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }
  friend bool operator!=(const RatMatrix& a, const RatMatrix& b) { return !(a == b); }

  // Half-open row/column ranges.
  RatMatrix slice(std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1) const {
    if (r1 < r0 || c1 < c0 || r1 > rows_ || c1 > cols_)
      throw DimensionMismatch("slice out of range");
    RatMatrix m(r1 - r0, c1 - c0);
    for (std::size_t i = r0; i < r1; ++i)
      for (std::size_t j = c0; j < c1; ++j) m(i - r0, j - c0) = (*this)(i, j);
    return m;
  }

  RatMatrix column(std::size_t j) const { return slice(0, rows_, j, j + 1); }

  std::string shape_str() const {
    return std::to_string(rows_) + "x" + std::to_string(cols_);
  }

  std::string str() const {
    std::string out = "[";
    for (std::size_t i = 0; i < rows_; ++i) {
      out += i ? "; " : "";
      for (std::size_t j = 0; j < cols_; ++j) {
        out += j ? ", " : "";
        out += (*this)(i, j).str();
      }
    }
    return out + "]";
  }

 private:
  std::size_t rows_, cols_;
  std::vector<Rational> data_;
};

// Positional assembly of a grid of blocks. Row heights must agree across
// each block row and column widths down each block column; blocks with a
// zero dimension are allowed and contribute nothing in that direction.
inline RatMatrix block(const std::vector<std::vector<RatMatrix>>& grid) {
  if (grid.empty()) return RatMatrix();
  const std::size_t bcols = grid.front().size();
  for (const auto& row : grid)
    if (row.size() != bcols) throw DimensionMismatch("ragged block grid");
  if (bcols == 0) return RatMatrix();

  std::vector<std::size_t> heights(grid.size()), widths(bcols);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    heights[i] = grid[i][0].rows();
    for (const auto& b : grid[i])
      if (b.rows() != heights[i])
        throw DimensionMismatch("inconsistent block row height");
  }
  for (std::size_t j = 0; j < bcols; ++j) {
    widths[j] = grid[0][j].cols();
    for (const auto& row : grid)
      if (row[j].cols() != widths[j])
        throw DimensionMismatch("inconsistent block column width");
  }

  std::size_t total_rows = 0, total_cols = 0;
  for (auto h : heights) total_rows += h;
  for (auto w : widths) total_cols += w;

  RatMatrix m(total_rows, total_cols);
  std::size_t roff = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::size_t coff = 0;
    for (std::size_t j = 0; j < bcols; ++j) {
      const RatMatrix& b = grid[i][j];
      for (std::size_t r = 0; r < b.rows(); ++r)
        for (std::size_t c = 0; c < b.cols(); ++c) m(roff + r, coff + c) = b(r, c);
      coff += widths[j];
    }
    roff += heights[i];
  }
  return m;
}

inline RatMatrix hcat(const RatMatrix& a, const RatMatrix& b) { return block({{a, b}}); }
inline RatMatrix vcat(const RatMatrix& a, const RatMatrix& b) { return block({{a}, {b}}); }

inline RatMatrix block_diag(const RatMatrix& a, const RatMatrix& b) {
  return block({{a, RatMatrix(a.rows(), b.cols())},
                {RatMatrix(b.rows(), a.cols()), b}});
}

// Ordered list of linearly independent column vectors spanning a subspace
// of an ambient coordinate space. Producers guarantee full column rank.
struct Basis {
  std::size_t ambient_dim = 0;
  RatMatrix vectors;  // ambient_dim rows, one column per basis vector

  Basis() = default;
  Basis(std::size_t ambient, RatMatrix v) : ambient_dim(ambient), vectors(std::move(v)) {
    if (vectors.rows() != ambient_dim)
      throw DimensionMismatch("basis vectors do not live in the ambient space");
  }

  std::size_t dim() const { return vectors.cols(); }

  static Basis empty(std::size_t ambient) { return Basis(ambient, RatMatrix(ambient, 0)); }
  static Basis standard(std::size_t ambient) {
    return Basis(ambient, RatMatrix::identity(ambient));
  }
};

}  // namespace opcouple
