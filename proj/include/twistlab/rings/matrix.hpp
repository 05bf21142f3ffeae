#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace twistlab {

// Dense row-major matrix over any coefficient type.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(a, c), (*this)(b, c));
  }

  Matrix without_column_block(std::size_t first, std::size_t width) const {
    Matrix m;
    m.rows_ = rows_;
    m.cols_ = cols_ - width;
    m.data_.reserve(m.rows_ * m.cols_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c)
        if (c < first || c >= first + width) m.data_.push_back((*this)(r, c));
    return m;
  }

  Matrix submatrix(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    Matrix m;
    m.rows_ = nr;
    m.cols_ = nc;
    m.data_.reserve(nr * nc);
    for (std::size_t r = 0; r < nr; ++r)
      for (std::size_t c = 0; c < nc; ++c) m.data_.push_back((*this)(r0 + r, c0 + c));
    return m;
  }

  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

  const std::vector<T>& data() const { return data_; }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<T> data_;
};

template <class T>
Matrix<T> multiply(const Matrix<T>& a, const Matrix<T>& b, const T& zero) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix shapes do not match");
  Matrix<T> m(a.rows(), b.cols(), zero);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const T& x = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) m(i, j) += x * b(k, j);
    }
  return m;
}

}  // namespace twistlab
