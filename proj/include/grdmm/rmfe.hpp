#pragma once

#include <optional>
#include <variant>

#include "grdmm/matrix.hpp"
#include "grdmm/poly.hpp"
#include "grdmm/ring.hpp"

namespace grdmm {

// (n, m)-RMFE over a Galois ring: GR-linear maps phi: GR^n -> GR_m and
// psi: GR_m -> GR^n with psi(phi(x) * phi(y)) = x * y coordinatewise.
//
// Construction: phi interpolates the degree-<n polynomial through the first
// n exceptional points of the base ring (the optional infinity slot is the
// degree n-1 coefficient) and places its coefficient vector in the tower
// extension; psi reads the degree-<m coefficient vector back and evaluates.
// Products of degree-(n-1) polynomials stay below degree m, so the identity
// holds whenever m >= 2n-1. Composite schemes come from concatenation.
class RmfeScheme {
 public:
  static RmfeScheme build(const RingHandle& base, std::size_t n, std::size_t m, bool use_infinity = false);
  // Concatenation: outer (n1, m1) over inner's extension ring, inner
  // (n2, m2) over the shared base; yields (n1*n2, m1*m2).
  static RmfeScheme concatenate(const RmfeScheme& outer, const RmfeScheme& inner);

  std::size_t n() const { return n_; }
  std::size_t m() const { return m_; }
  const RingHandle& base() const { return base_; }
  const RingHandle& ext() const { return ext_; }
  bool uses_infinity() const;
  // Finite evaluation points (the infinity slot, when present, is last and
  // not listed here).
  const std::vector<Elem>& finite_points() const;

  Elem phi(std::span<const Elem> xs) const;
  std::vector<Elem> psi(const Elem& u) const;

  // Entrywise packing of a batch of equally shaped matrices, and its
  // inverse orientation.
  Matrix phi_matrix(std::span<const Matrix> mats) const;
  std::vector<Matrix> psi_matrix(const Matrix& m) const;
  // Sum of all psi components, returned entrywise as one matrix; equals
  // adding the psi_matrix outputs.
  Matrix psi_matrix_sum(const Matrix& m) const;

 private:
  struct Interp {
    std::vector<Elem> points;  // finite points only
    bool use_infinity;
  };
  struct Concat {
    std::shared_ptr<const RmfeScheme> outer;
    std::shared_ptr<const RmfeScheme> inner;
  };

  RmfeScheme() = default;

  RingHandle base_;
  RingHandle ext_;
  std::size_t n_ = 0;
  std::size_t m_ = 0;
  std::variant<Interp, Concat> impl_;
};

}  // namespace grdmm
