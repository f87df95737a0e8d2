#pragma once

#include "grdmm/matrix.hpp"
#include "grdmm/ring.hpp"

namespace grdmm {

// Univariate polynomial over a ring, coefficients ascending. Normalized: the
// zero polynomial has length 0 and no other polynomial has a zero leading
// coefficient.
class Poly {
 public:
  Poly() = default;
  explicit Poly(RingHandle ring) : ring_(std::move(ring)) {}
  static Poly from_coeffs(const RingHandle& ring, std::span<const Elem> coeffs);
  static Poly constant(const RingHandle& ring, const Elem& c);

  const RingHandle& ring() const { return ring_; }
  std::size_t length() const { return len_; }  // degree + 1, 0 for zero
  bool is_zero() const { return len_ == 0; }
  // Coefficient of x^k, zero beyond the stored length.
  Elem coeff(std::size_t k) const;
  std::span<const u64> coeff_span(std::size_t k) const {
    return {data_.data() + k * ring_->width(), ring_->width()};
  }
  std::vector<Elem> coeffs() const;

  friend bool operator==(const Poly& a, const Poly& b) { return a.len_ == b.len_ && a.data_ == b.data_; }

 private:
  friend Poly poly_mul(const Poly& a, const Poly& b);
  friend Poly poly_add(const Poly& a, const Poly& b);
  friend Poly poly_sub(const Poly& a, const Poly& b);
  friend Poly derivative(const Poly& f);
  friend void poly_divmod(const Poly& f, const Poly& g, Poly& quot, Poly& rem);
  friend Elem eval_point(const Poly& f, const Elem& x);
  void normalize();

  RingHandle ring_;
  std::size_t len_ = 0;
  std::vector<u64> data_;
};

Poly poly_mul(const Poly& a, const Poly& b);
Poly poly_add(const Poly& a, const Poly& b);
Poly poly_sub(const Poly& a, const Poly& b);
Poly derivative(const Poly& f);
// Division with remainder; the divisor's leading coefficient must be a unit
// (always the case for the monic node polynomials used here).
void poly_divmod(const Poly& f, const Poly& g, Poly& quot, Poly& rem);
Elem eval_point(const Poly& f, const Elem& x);

// Subproduct tree over (x - x_i); shared by fast evaluation and
// interpolation.
struct ProductTree {
  struct Node {
    std::size_t lo, hi;
    Poly poly;
    int left = -1, right = -1;
  };
  RingHandle ring;
  std::vector<Node> nodes;
  int root = -1;
  const Poly& root_poly() const { return nodes[root].poly; }
};
ProductTree build_product_tree(const RingHandle& ring, std::span<const Elem> points);

enum class EvalMode { naive, fast };

// Multipoint evaluation; any points accepted. Both modes agree exactly.
std::vector<Elem> eval_many(const Poly& f, std::span<const Elem> points, EvalMode mode);

// Unique interpolating polynomial of degree < n through n pairwise
// exceptional points. Naive mode is the Lagrange formula with
// lambda_i = prod_{j!=i}(x_i - x_j)^{-1}; fast mode runs on the subproduct
// tree. Throws NonExceptionalPoints when a pairwise difference is not a unit.
Poly interpolate(const RingHandle& ring, std::span<const Elem> points, std::span<const Elem> values,
                 EvalMode mode);

// Lagrange basis: lambda_i * prod_{j!=i}(x - x_j) for each i. Shared by the
// scalar and matrix interpolation paths.
std::vector<Poly> lagrange_basis(const RingHandle& ring, std::span<const Elem> points);

// --- matrix-coefficient polynomials (entrywise scalar polynomials) ---

class MatrixPoly {
 public:
  MatrixPoly() = default;
  MatrixPoly(RingHandle ring, std::size_t rows, std::size_t cols)
      : ring_(std::move(ring)), rows_(rows), cols_(cols) {}
  static MatrixPoly from_coeffs(std::span<const Matrix> coeffs);

  const RingHandle& ring() const { return ring_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t length() const { return coeffs_.size(); }
  // Coefficient matrix of x^k, zero matrix beyond the stored length.
  Matrix coeff(std::size_t k) const;
  Matrix& coeff_ref(std::size_t k) { return coeffs_[k]; }
  void push_coeff(Matrix m);
  void normalize();

 private:
  RingHandle ring_;
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Matrix> coeffs_;
};

std::vector<Matrix> eval_many(const MatrixPoly& f, std::span<const Elem> points, EvalMode mode);
MatrixPoly interpolate_matrix(const RingHandle& ring, std::span<const Elem> points,
                              std::span<const Matrix> values, EvalMode mode);

// Mode picked by the product-tree crossover threshold (fast for >= 32
// points).
EvalMode pick_mode(std::size_t n_points);

}  // namespace grdmm
