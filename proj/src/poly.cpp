#include "grdmm/poly.hpp"

#include <algorithm>
#include <functional>

namespace grdmm {

namespace {
constexpr std::size_t kFastThreshold = 32;
}

EvalMode pick_mode(std::size_t n_points) {
  return n_points >= kFastThreshold ? EvalMode::fast : EvalMode::naive;
}

// --- Poly basics -------------------------------------------------------------

void Poly::normalize() {
  const std::size_t w = ring_->width();
  while (len_ > 0 && ring_->is_zero(std::span<const u64>(data_.data() + (len_ - 1) * w, w))) --len_;
  data_.resize(len_ * w);
}

Poly Poly::from_coeffs(const RingHandle& ring, std::span<const Elem> coeffs) {
  Poly p(ring);
  const std::size_t w = ring->width();
  p.len_ = coeffs.size();
  p.data_.resize(p.len_ * w);
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i].w.size() != w) fail(Errc::params_mismatch, "coefficient width does not match ring");
    std::copy(coeffs[i].w.begin(), coeffs[i].w.end(), p.data_.begin() + i * w);
  }
  p.normalize();
  return p;
}

Poly Poly::constant(const RingHandle& ring, const Elem& c) {
  return from_coeffs(ring, std::span<const Elem>(&c, 1));
}

Elem Poly::coeff(std::size_t k) const {
  if (k >= len_) return ring_->zero();
  auto s = coeff_span(k);
  return Elem(std::vector<u64>(s.begin(), s.end()));
}

std::vector<Elem> Poly::coeffs() const {
  std::vector<Elem> out;
  out.reserve(len_);
  for (std::size_t i = 0; i < len_; ++i) out.push_back(coeff(i));
  return out;
}

Poly poly_mul(const Poly& a, const Poly& b) {
  if (!a.ring_->same_ring(*b.ring_)) fail(Errc::params_mismatch, "operands live in different rings");
  const Ring& r = *a.ring_;
  const std::size_t w = r.width();
  Poly out(a.ring_);
  if (a.len_ == 0 || b.len_ == 0) return out;
  out.len_ = a.len_ + b.len_ - 1;
  out.data_.assign(out.len_ * w, 0);
  std::vector<u64> scratch(r.mul_scratch_words());
  std::vector<u64> tmp(w);
  for (std::size_t i = 0; i < a.len_; ++i) {
    std::span<const u64> ai{a.data_.data() + i * w, w};
    if (r.is_zero(ai)) continue;
    for (std::size_t j = 0; j < b.len_; ++j) {
      std::span<const u64> bj{b.data_.data() + j * w, w};
      if (r.is_zero(bj)) continue;
      r.mul(ai, bj, tmp, scratch.data());
      std::span<u64> dst{out.data_.data() + (i + j) * w, w};
      r.add(dst, tmp, dst);
    }
  }
  out.normalize();
  return out;
}

namespace {

Poly poly_add_sub(const Poly& a, const Poly& b, bool subtract);

}  // namespace

Poly poly_add(const Poly& a, const Poly& b) { return poly_add_sub(a, b, false); }
Poly poly_sub(const Poly& a, const Poly& b) { return poly_add_sub(a, b, true); }

namespace {

Poly poly_add_sub(const Poly& a, const Poly& b, bool subtract) {
  const RingHandle& ring = a.ring() ? a.ring() : b.ring();
  const Ring& r = *ring;
  std::size_t len = std::max(a.length(), b.length());
  std::vector<Elem> coeffs;
  coeffs.reserve(len);
  for (std::size_t i = 0; i < len; ++i) {
    Elem ai = i < a.length() ? a.coeff(i) : r.zero();
    Elem bi = i < b.length() ? b.coeff(i) : r.zero();
    coeffs.push_back(subtract ? r.sub(ai, bi) : r.add(ai, bi));
  }
  return Poly::from_coeffs(ring, coeffs);
}

}  // namespace

Poly derivative(const Poly& f) {
  const Ring& r = *f.ring_;
  std::vector<Elem> coeffs;
  for (std::size_t k = 1; k < f.len_; ++k) coeffs.push_back(r.mul(r.from_u64(k), f.coeff(k)));
  return Poly::from_coeffs(f.ring_, coeffs);
}

void poly_divmod(const Poly& f, const Poly& g, Poly& quot, Poly& rem) {
  if (g.len_ == 0) fail(Errc::params_mismatch, "division by the zero polynomial");
  const Ring& r = *f.ring_;
  const std::size_t w = r.width();
  Elem lead = g.coeff(g.len_ - 1);
  Elem lead_inv = r.invert(lead);
  std::vector<u64> rdata = f.data_;
  std::size_t rlen = f.len_;
  std::size_t qlen = f.len_ >= g.len_ ? f.len_ - g.len_ + 1 : 0;
  std::vector<Elem> q(qlen, r.zero());
  std::vector<u64> scratch(r.mul_scratch_words());
  std::vector<u64> tmp(w), factor(w);
  while (rlen >= g.len_ && rlen > 0) {
    std::span<const u64> top{rdata.data() + (rlen - 1) * w, w};
    if (!r.is_zero(top)) {
      r.mul(top, lead_inv.w, factor, scratch.data());
      std::size_t shift = rlen - g.len_;
      q[shift] = Elem(std::vector<u64>(factor.begin(), factor.end()));
      for (std::size_t j = 0; j < g.len_; ++j) {
        std::span<const u64> gj{g.data_.data() + j * w, w};
        if (r.is_zero(gj)) continue;
        r.mul(factor, gj, tmp, scratch.data());
        std::span<u64> dst{rdata.data() + (shift + j) * w, w};
        r.sub(dst, tmp, dst);
      }
    }
    --rlen;
  }
  quot = Poly::from_coeffs(f.ring_, q);
  std::vector<Elem> rc;
  for (std::size_t i = 0; i < rlen; ++i)
    rc.emplace_back(std::vector<u64>(rdata.begin() + i * w, rdata.begin() + (i + 1) * w));
  rem = Poly::from_coeffs(f.ring_, rc);
}

Elem eval_point(const Poly& f, const Elem& x) {
  const Ring& r = *f.ring_;
  Elem acc = r.zero();
  for (std::size_t k = f.len_; k-- > 0;) acc = r.add(r.mul(acc, x), f.coeff(k));
  return acc;
}

// --- product tree ------------------------------------------------------------

ProductTree build_product_tree(const RingHandle& ring, std::span<const Elem> points) {
  ProductTree tree;
  tree.ring = ring;
  if (points.empty()) return tree;
  const Ring& r = *ring;
  std::function<int(std::size_t, std::size_t)> build = [&](std::size_t lo, std::size_t hi) -> int {
    if (hi - lo == 1) {
      std::vector<Elem> c{r.neg(points[lo]), r.one()};
      tree.nodes.push_back({lo, hi, Poly::from_coeffs(ring, c), -1, -1});
      return static_cast<int>(tree.nodes.size() - 1);
    }
    std::size_t mid = lo + (hi - lo) / 2;
    int l = build(lo, mid);
    int r2 = build(mid, hi);
    tree.nodes.push_back({lo, hi, poly_mul(tree.nodes[l].poly, tree.nodes[r2].poly), l, r2});
    return static_cast<int>(tree.nodes.size() - 1);
  };
  tree.root = build(0, points.size());
  return tree;
}

// --- evaluation ---------------------------------------------------------------

namespace {

void fast_eval_rec(const ProductTree& tree, int node_id, const Poly& f, std::span<Elem> out) {
  const auto& node = tree.nodes[node_id];
  Poly rem = f;
  if (f.length() >= node.poly.length()) {
    Poly q;
    poly_divmod(f, node.poly, q, rem);
  }
  if (node.left < 0) {
    out[node.lo] = rem.is_zero() ? tree.ring->zero() : rem.coeff(0);
    return;
  }
  fast_eval_rec(tree, node.left, rem, out);
  fast_eval_rec(tree, node.right, rem, out);
}

}  // namespace

std::vector<Elem> eval_many(const Poly& f, std::span<const Elem> points, EvalMode mode) {
  if (points.empty()) return {};
  if (mode == EvalMode::naive) {
    std::vector<Elem> out;
    out.reserve(points.size());
    for (const Elem& x : points) out.push_back(eval_point(f, x));
    return out;
  }
  ProductTree tree = build_product_tree(f.ring(), points);
  std::vector<Elem> out(points.size());
  fast_eval_rec(tree, tree.root, f, out);
  return out;
}

// --- interpolation --------------------------------------------------------------

std::vector<Poly> lagrange_basis(const RingHandle& ring, std::span<const Elem> points) {
  const Ring& r = *ring;
  const std::size_t n = points.size();
  std::vector<Poly> basis;
  basis.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Elem denom = r.one();
    Poly numer = Poly::constant(ring, r.one());
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      Elem diff = r.sub(points[i], points[j]);
      if (!r.is_unit(diff))
        fail(Errc::non_exceptional_points, "pairwise difference of interpolation points is not a unit");
      denom = r.mul(denom, diff);
      std::vector<Elem> lin{r.neg(points[j]), r.one()};
      numer = poly_mul(numer, Poly::from_coeffs(ring, lin));
    }
    Elem lambda = r.invert(denom);
    std::vector<Elem> scaled;
    for (std::size_t k = 0; k < numer.length(); ++k) scaled.push_back(r.mul(lambda, numer.coeff(k)));
    basis.push_back(Poly::from_coeffs(ring, scaled));
  }
  return basis;
}

namespace {

// Interpolation weights for the fast path: inverse of M'(x_i) at every
// point; not a unit means the point set is not exceptional.
std::vector<Elem> fast_interp_weights(const ProductTree& tree, std::span<const Elem> points) {
  const Ring& r = *tree.ring;
  Poly dM = derivative(tree.root_poly());
  std::vector<Elem> at(points.size());
  fast_eval_rec(tree, tree.root, dM, at);
  std::vector<Elem> weights;
  weights.reserve(points.size());
  for (const Elem& v : at) {
    if (!r.is_unit(v))
      fail(Errc::non_exceptional_points, "pairwise difference of interpolation points is not a unit");
    weights.push_back(r.invert(v));
  }
  return weights;
}

Poly fast_combine(const ProductTree& tree, int node_id, std::span<const Poly> leaves) {
  const auto& node = tree.nodes[node_id];
  if (node.left < 0) return leaves[node.lo];
  Poly fl = fast_combine(tree, node.left, leaves);
  Poly fr = fast_combine(tree, node.right, leaves);
  return poly_add(poly_mul(fl, tree.nodes[node.right].poly), poly_mul(fr, tree.nodes[node.left].poly));
}

}  // namespace

Poly interpolate(const RingHandle& ring, std::span<const Elem> points, std::span<const Elem> values,
                 EvalMode mode) {
  if (points.size() != values.size()) fail(Errc::length_mismatch, "point and value counts differ");
  const Ring& r = *ring;
  if (points.empty()) return Poly(ring);
  if (mode == EvalMode::naive) {
    std::vector<Poly> basis = lagrange_basis(ring, points);
    Poly acc(ring);
    for (std::size_t i = 0; i < points.size(); ++i) {
      std::vector<Elem> scaled;
      for (std::size_t k = 0; k < basis[i].length(); ++k) scaled.push_back(r.mul(values[i], basis[i].coeff(k)));
      acc = poly_add(acc, Poly::from_coeffs(ring, scaled));
    }
    return acc;
  }
  ProductTree tree = build_product_tree(ring, points);
  std::vector<Elem> weights = fast_interp_weights(tree, points);
  std::vector<Poly> leaves;
  leaves.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i)
    leaves.push_back(Poly::constant(ring, r.mul(values[i], weights[i])));
  return fast_combine(tree, tree.root, leaves);
}

// --- matrix-coefficient polynomials -----------------------------------------------

MatrixPoly MatrixPoly::from_coeffs(std::span<const Matrix> coeffs) {
  if (coeffs.empty()) fail(Errc::length_mismatch, "matrix polynomial needs at least one coefficient");
  MatrixPoly p(coeffs[0].ring(), coeffs[0].rows(), coeffs[0].cols());
  for (const Matrix& m : coeffs) p.push_coeff(m);
  p.normalize();
  return p;
}

Matrix MatrixPoly::coeff(std::size_t k) const {
  if (k >= coeffs_.size()) return Matrix(ring_, rows_, cols_);
  return coeffs_[k];
}

void MatrixPoly::push_coeff(Matrix m) {
  if (m.rows() != rows_ || m.cols() != cols_) fail(Errc::shape_mismatch, "coefficient shapes differ");
  if (!m.ring()->same_ring(*ring_)) fail(Errc::params_mismatch, "coefficient rings differ");
  coeffs_.push_back(std::move(m));
}

void MatrixPoly::normalize() {
  while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

std::vector<Matrix> eval_many(const MatrixPoly& f, std::span<const Elem> points, EvalMode mode) {
  const RingHandle& ring = f.ring();
  const Ring& r = *ring;
  const std::size_t w = r.width();
  std::vector<Matrix> out;
  out.reserve(points.size());
  if (mode == EvalMode::naive) {
    // Horner on matrix coefficients
    std::vector<u64> scratch(r.mul_scratch_words());
    std::vector<u64> tmp(w);
    for (const Elem& x : points) {
      Matrix acc(ring, f.rows(), f.cols());
      for (std::size_t k = f.length(); k-- > 0;) {
        Matrix c = f.coeff(k);
        for (std::size_t i = 0; i < acc.rows(); ++i)
          for (std::size_t j = 0; j < acc.cols(); ++j) {
            r.mul(acc.at(i, j), x.w, tmp, scratch.data());
            r.add(tmp, c.at(i, j), acc.at(i, j));
          }
      }
      out.push_back(std::move(acc));
    }
    return out;
  }
  // fast: shared subproduct tree, entrywise scalar evaluation
  ProductTree tree = build_product_tree(ring, points);
  for (std::size_t p = 0; p < points.size(); ++p) out.emplace_back(ring, f.rows(), f.cols());
  std::vector<Elem> entry_vals(points.size());
  for (std::size_t i = 0; i < f.rows(); ++i)
    for (std::size_t j = 0; j < f.cols(); ++j) {
      std::vector<Elem> entry_coeffs;
      for (std::size_t k = 0; k < f.length(); ++k) entry_coeffs.push_back(f.coeff(k).get(i, j));
      Poly fp = Poly::from_coeffs(ring, entry_coeffs);
      fast_eval_rec(tree, tree.root, fp, entry_vals);
      for (std::size_t p = 0; p < points.size(); ++p) out[p].set(i, j, entry_vals[p]);
    }
  return out;
}

MatrixPoly interpolate_matrix(const RingHandle& ring, std::span<const Elem> points,
                              std::span<const Matrix> values, EvalMode mode) {
  if (points.size() != values.size()) fail(Errc::length_mismatch, "point and value counts differ");
  if (points.empty()) fail(Errc::length_mismatch, "no interpolation points");
  const Ring& r = *ring;
  const std::size_t n = points.size();
  const std::size_t rows = values[0].rows(), cols = values[0].cols();
  MatrixPoly out(ring, rows, cols);
  if (mode == EvalMode::naive) {
    std::vector<Poly> basis = lagrange_basis(ring, points);
    for (std::size_t k = 0; k < n; ++k) {
      Matrix ck(ring, rows, cols);
      for (std::size_t i = 0; i < n; ++i) {
        if (k >= basis[i].length()) continue;
        Elem lik = basis[i].coeff(k);
        if (r.is_zero(lik)) continue;
        mat_axpy(lik, values[i], ck);
      }
      out.push_coeff(std::move(ck));
    }
    out.normalize();
    return out;
  }
  // fast: shared tree and weights, entrywise combination
  ProductTree tree = build_product_tree(ring, points);
  std::vector<Elem> weights = fast_interp_weights(tree, points);
  for (std::size_t k = 0; k < n; ++k) out.push_coeff(Matrix(ring, rows, cols));
  std::vector<Poly> leaves(n);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      for (std::size_t p = 0; p < n; ++p)
        leaves[p] = Poly::constant(ring, r.mul(values[p].get(i, j), weights[p]));
      Poly entry = fast_combine(tree, tree.root, leaves);
      for (std::size_t k = 0; k < entry.length(); ++k) out.coeff_ref(k).set(i, j, entry.coeff(k));
    }
  out.normalize();
  return out;
}

}  // namespace grdmm
