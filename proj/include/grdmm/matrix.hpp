#pragma once

#include <random>

#include "grdmm/ring.hpp"

namespace grdmm {

// Dense matrix over a single ring, elements stored row-major in one flat
// word buffer.
class Matrix {
 public:
  Matrix() = default;
  Matrix(RingHandle ring, std::size_t rows, std::size_t cols);

  static Matrix identity(const RingHandle& ring, std::size_t n);
  static Matrix random(const RingHandle& ring, std::size_t rows, std::size_t cols, std::mt19937_64& rng);

  const RingHandle& ring() const { return ring_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t element_count() const { return rows_ * cols_; }
  std::size_t word_count() const { return data_.size(); }

  std::span<u64> at(std::size_t i, std::size_t j) {
    return {data_.data() + (i * cols_ + j) * width_, width_};
  }
  std::span<const u64> at(std::size_t i, std::size_t j) const {
    return {data_.data() + (i * cols_ + j) * width_, width_};
  }
  Elem get(std::size_t i, std::size_t j) const;
  void set(std::size_t i, std::size_t j, const Elem& v);

  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  void paste(std::size_t r0, std::size_t c0, const Matrix& src);

  bool is_zero() const;

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  RingHandle ring_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t width_ = 0;
  std::vector<u64> data_;
};

// Schoolbook product.
Matrix matmul(const Matrix& a, const Matrix& b);
Matrix mat_add(const Matrix& a, const Matrix& b);
// y += c * x
void mat_axpy(const Elem& c, const Matrix& x, Matrix& y);
Matrix mat_scale(const Elem& c, const Matrix& x);

void append_matrix(std::vector<std::uint8_t>& out, const Matrix& m);

}  // namespace grdmm
