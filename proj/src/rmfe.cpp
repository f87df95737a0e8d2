#include "grdmm/rmfe.hpp"

#include <algorithm>

namespace grdmm {

RmfeScheme RmfeScheme::build(const RingHandle& base, std::size_t n, std::size_t m, bool use_infinity) {
  if (n < 1) fail(Errc::width_too_large, "pack width must be positive");
  if (m < 2 * n - 1) fail(Errc::degree_too_small, "RMFE needs m >= 2n-1");
  std::size_t finite = n - (use_infinity ? 1 : 0);
  u64 q = base->residue_size_capped(u64(1) << 62);
  if (finite > q)
    fail(Errc::width_too_large,
         "pack width exceeds the exceptional point budget of the base ring");
  RmfeScheme s;
  s.base_ = base;
  s.ext_ = base->extend(m);
  s.n_ = n;
  s.m_ = m;
  s.impl_ = Interp{exceptional_set(base, finite).elements, use_infinity};
  return s;
}

RmfeScheme RmfeScheme::concatenate(const RmfeScheme& outer, const RmfeScheme& inner) {
  if (!outer.base_->same_ring(*inner.ext_))
    fail(Errc::tower_mismatch, "outer scheme must live over the inner scheme's extension ring");
  RmfeScheme s;
  s.base_ = inner.base_;
  s.ext_ = outer.ext_;
  s.n_ = outer.n_ * inner.n_;
  s.m_ = outer.m_ * inner.m_;
  s.impl_ = Concat{std::make_shared<RmfeScheme>(outer), std::make_shared<RmfeScheme>(inner)};
  return s;
}

bool RmfeScheme::uses_infinity() const {
  if (const auto* in = std::get_if<Interp>(&impl_)) return in->use_infinity;
  const auto& c = std::get<Concat>(impl_);
  return c.outer->uses_infinity() || c.inner->uses_infinity();
}

const std::vector<Elem>& RmfeScheme::finite_points() const {
  if (const auto* in = std::get_if<Interp>(&impl_)) return in->points;
  fail(Errc::scheme_mismatch, "concatenated schemes have no single point set");
}

Elem RmfeScheme::phi(std::span<const Elem> xs) const {
  if (xs.size() != n_) fail(Errc::length_mismatch, "phi input width must equal n");
  const Ring& b = *base_;
  if (const auto* in = std::get_if<Interp>(&impl_)) {
    std::span<const Elem> finite_vals = xs.first(in->points.size());
    Poly f = interpolate(base_, in->points, finite_vals, EvalMode::naive);
    if (in->use_infinity) {
      // prescribed leading coefficient c at degree n-1: add c * prod(x - a_j),
      // which vanishes at every finite point
      const Elem& lead = xs[n_ - 1];
      Poly mono = Poly::constant(base_, b.one());
      for (const Elem& a : in->points) {
        std::vector<Elem> lin{b.neg(a), b.one()};
        mono = poly_mul(mono, Poly::from_coeffs(base_, lin));
      }
      std::vector<Elem> scaled;
      for (std::size_t k = 0; k < mono.length(); ++k) scaled.push_back(b.mul(lead, mono.coeff(k)));
      f = poly_add(f, Poly::from_coeffs(base_, scaled));
    }
    std::vector<Elem> coeffs = f.coeffs();
    return ext_->from_coeffs(coeffs);
  }
  const auto& c = std::get<Concat>(impl_);
  std::vector<Elem> mids;
  mids.reserve(c.outer->n());
  for (std::size_t i = 0; i < c.outer->n(); ++i)
    mids.push_back(c.inner->phi(xs.subspan(i * c.inner->n(), c.inner->n())));
  return c.outer->phi(mids);
}

std::vector<Elem> RmfeScheme::psi(const Elem& u) const {
  if (u.w.size() != ext_->width()) fail(Errc::params_mismatch, "psi input must belong to the extension ring");
  if (const auto* in = std::get_if<Interp>(&impl_)) {
    std::vector<Elem> chunks = ext_->coeff_view(u);
    Poly g = Poly::from_coeffs(base_, chunks);
    std::vector<Elem> out = eval_many(g, in->points, EvalMode::naive);
    if (in->use_infinity) out.push_back(g.coeff(2 * n_ - 2));
    return out;
  }
  const auto& c = std::get<Concat>(impl_);
  std::vector<Elem> mids = c.outer->psi(u);
  std::vector<Elem> out;
  out.reserve(n_);
  for (const Elem& mid : mids) {
    std::vector<Elem> part = c.inner->psi(mid);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

Matrix RmfeScheme::phi_matrix(std::span<const Matrix> mats) const {
  if (mats.size() != n_) fail(Errc::length_mismatch, "batch size must equal n");
  const std::size_t rows = mats[0].rows(), cols = mats[0].cols();
  for (const Matrix& m : mats) {
    if (m.rows() != rows || m.cols() != cols) fail(Errc::shape_mismatch, "batch matrices must share one shape");
    if (!m.ring()->same_ring(*base_)) fail(Errc::params_mismatch, "batch matrices must live over the base ring");
  }
  Matrix out(ext_, rows, cols);
  std::vector<Elem> xs(n_);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      for (std::size_t k = 0; k < n_; ++k) xs[k] = mats[k].get(i, j);
      out.set(i, j, phi(xs));
    }
  return out;
}

std::vector<Matrix> RmfeScheme::psi_matrix(const Matrix& m) const {
  if (!m.ring()->same_ring(*ext_)) fail(Errc::params_mismatch, "matrix must live over the extension ring");
  std::vector<Matrix> out;
  out.reserve(n_);
  for (std::size_t k = 0; k < n_; ++k) out.emplace_back(base_, m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      std::vector<Elem> comps = psi(m.get(i, j));
      for (std::size_t k = 0; k < n_; ++k) out[k].set(i, j, comps[k]);
    }
  return out;
}

Matrix RmfeScheme::psi_matrix_sum(const Matrix& m) const {
  if (!m.ring()->same_ring(*ext_)) fail(Errc::params_mismatch, "matrix must live over the extension ring");
  const Ring& b = *base_;
  Matrix out(base_, m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      Elem acc = b.zero();
      for (const Elem& c : psi(m.get(i, j))) acc = b.add(acc, c);
      out.set(i, j, acc);
    }
  return out;
}

}  // namespace grdmm
