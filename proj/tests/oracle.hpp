#pragma once

// Brute-force reference implementations used only by the test suites. These
// stay independent of the library code paths they check.

#include <cstdint>
#include <vector>

#include "grdmm/matrix.hpp"
#include "grdmm/ring.hpp"

namespace oracle {

using grdmm::u64;

// --- GF(p) polynomials, coefficients ascending, plain vectors ---

inline std::vector<u64> gfp_polymod(std::vector<u64> r, const std::vector<u64>& g, u64 p) {
  // g monic; all coefficients kept in [0, p)
  while (r.size() >= g.size()) {
    u64 c = r.back() % p;
    if (c) {
      std::size_t shift = r.size() - g.size();
      for (std::size_t i = 0; i + 1 < g.size(); ++i)
        r[shift + i] = (r[shift + i] + p - c * g[i] % p) % p;
    }
    r.pop_back();
  }
  while (!r.empty() && r.back() % p == 0) r.pop_back();
  return r;
}

// Does monic g divide monic f over GF(p)?
inline bool gfp_divides(const std::vector<u64>& g, const std::vector<u64>& f, u64 p) {
  return gfp_polymod(f, g, p).empty();
}

// Enumerate all monic polynomials of the given degree over GF(p) in
// ascending value order (constant coefficient varies fastest).
inline std::vector<std::vector<u64>> gfp_monics(u64 p, u64 deg) {
  std::vector<std::vector<u64>> out;
  std::vector<u64> digits(deg, 0);
  for (;;) {
    std::vector<u64> f(digits);
    f.push_back(1);
    out.push_back(f);
    std::size_t i = 0;
    while (i < deg) {
      if (++digits[i] < p) break;
      digits[i] = 0;
      ++i;
    }
    if (i == deg) break;
  }
  return out;
}

// Trial-division irreducibility over GF(p).
inline bool gfp_irreducible(const std::vector<u64>& f, u64 p) {
  u64 d = f.size() - 1;
  if (d == 1) return true;
  for (u64 g = 1; g <= d / 2; ++g)
    for (const auto& cand : gfp_monics(p, g))
      if (gfp_divides(cand, f, p)) return false;
  return true;
}

// First irreducible monic degree-d polynomial over GF(p) in value order.
inline std::vector<u64> gfp_first_irreducible(u64 p, u64 d) {
  for (const auto& f : gfp_monics(p, d))
    if (gfp_irreducible(f, p)) return f;
  return {};
}

// --- small-ring exhaustive enumeration ---

inline std::vector<grdmm::Elem> all_elements(const grdmm::RingHandle& ring) {
  u64 pe = ring->characteristic();
  std::size_t w = ring->width();
  std::vector<grdmm::Elem> out;
  std::vector<u64> words(w, 0);
  for (;;) {
    out.push_back(ring->from_words(words));
    std::size_t i = 0;
    while (i < w) {
      if (++words[i] < pe) break;
      words[i] = 0;
      ++i;
    }
    if (i == w) break;
  }
  return out;
}

// --- independent schoolbook matrix product ---

inline grdmm::Matrix naive_matmul(const grdmm::Matrix& a, const grdmm::Matrix& b) {
  const grdmm::Ring& r = *a.ring();
  grdmm::Matrix c(a.ring(), a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      grdmm::Elem acc = r.zero();
      for (std::size_t k = 0; k < a.cols(); ++k) acc = r.add(acc, r.mul(a.get(i, k), b.get(k, j)));
      c.set(i, j, acc);
    }
  return c;
}

}  // namespace oracle
