#include "grdmm/matrix.hpp"

#include <algorithm>

namespace grdmm {

Matrix::Matrix(RingHandle ring, std::size_t rows, std::size_t cols)
    : ring_(std::move(ring)), rows_(rows), cols_(cols), width_(ring_->width()),
      data_(rows * cols * ring_->width(), 0) {}

Matrix Matrix::identity(const RingHandle& ring, std::size_t n) {
  Matrix m(ring, n, n);
  Elem one = ring->one();
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, one);
  return m;
}

Matrix Matrix::random(const RingHandle& ring, std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  Matrix m(ring, rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m.set(i, j, ring->random(rng));
  return m;
}

Elem Matrix::get(std::size_t i, std::size_t j) const {
  auto s = at(i, j);
  return Elem(std::vector<u64>(s.begin(), s.end()));
}

void Matrix::set(std::size_t i, std::size_t j, const Elem& v) {
  if (v.w.size() != width_) fail(Errc::params_mismatch, "element width does not match matrix ring");
  std::copy(v.w.begin(), v.w.end(), at(i, j).begin());
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) fail(Errc::shape_mismatch, "block out of range");
  Matrix out(ring_, nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j)
      std::copy(at(r0 + i, c0 + j).begin(), at(r0 + i, c0 + j).end(), out.at(i, j).begin());
  return out;
}

void Matrix::paste(std::size_t r0, std::size_t c0, const Matrix& src) {
  if (r0 + src.rows_ > rows_ || c0 + src.cols_ > cols_) fail(Errc::shape_mismatch, "paste out of range");
  for (std::size_t i = 0; i < src.rows_; ++i)
    for (std::size_t j = 0; j < src.cols_; ++j)
      std::copy(src.at(i, j).begin(), src.at(i, j).end(), at(r0 + i, c0 + j).begin());
}

bool Matrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](u64 w) { return w == 0; });
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (!a.ring()->same_ring(*b.ring())) fail(Errc::params_mismatch, "operands live in different rings");
  if (a.cols() != b.rows()) fail(Errc::shape_mismatch, "inner dimensions do not match");
  const Ring& r = *a.ring();
  Matrix c(a.ring(), a.rows(), b.cols());
  std::vector<u64> scratch(r.mul_scratch_words());
  std::vector<u64> tmp(r.width());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      std::span<const u64> aik = a.at(i, k);
      if (r.is_zero(aik)) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        std::span<const u64> bkj = b.at(k, j);
        if (r.is_zero(bkj)) continue;
        r.mul(aik, bkj, tmp, scratch.data());
        r.add(c.at(i, j), tmp, c.at(i, j));
      }
    }
  }
  return c;
}

Matrix mat_add(const Matrix& a, const Matrix& b) {
  if (!a.ring()->same_ring(*b.ring())) fail(Errc::params_mismatch, "operands live in different rings");
  if (a.rows() != b.rows() || a.cols() != b.cols()) fail(Errc::shape_mismatch, "shapes differ");
  const Ring& r = *a.ring();
  Matrix c(a.ring(), a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r.add(a.at(i, j), b.at(i, j), c.at(i, j));
  return c;
}

void mat_axpy(const Elem& c, const Matrix& x, Matrix& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) fail(Errc::shape_mismatch, "shapes differ");
  const Ring& r = *x.ring();
  std::vector<u64> scratch(r.mul_scratch_words());
  std::vector<u64> tmp(r.width());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) {
      if (r.is_zero(x.at(i, j))) continue;
      r.mul(c.w, x.at(i, j), tmp, scratch.data());
      r.add(y.at(i, j), tmp, y.at(i, j));
    }
}

Matrix mat_scale(const Elem& c, const Matrix& x) {
  Matrix y(x.ring(), x.rows(), x.cols());
  mat_axpy(c, x, y);
  return y;
}

void append_matrix(std::vector<std::uint8_t>& out, const Matrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      for (u64 w : m.at(i, j)) append_u64_le(out, w);
}

}  // namespace grdmm
