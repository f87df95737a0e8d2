#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "grdmm/errors.hpp"

namespace grdmm {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

class Ring;
using RingHandle = std::shared_ptr<const Ring>;

// An element is a flat coefficient vector over Z_{p^e}: innermost tower level
// first, ascending degree. The word count is fixed by the owning ring.
struct Elem {
  std::vector<u64> w;

  Elem() = default;
  explicit Elem(std::vector<u64> words) : w(std::move(words)) {}
  friend bool operator==(const Elem&, const Elem&) = default;
};

// Galois ring GR(p^e, d) or a tower extension of one. A Ring object is a
// single tower node; base() walks down toward GR(p^e, d). Residues live in
// 64-bit words; p^e == 2^64 uses natural word wraparound. Immutable after
// construction and freely shareable across threads.
class Ring : public std::enable_shared_from_this<Ring> {
 public:
  // GR(p^e, d) with the lexicographically smallest monic degree-d modulus
  // that is irreducible mod p (coefficients lifted unchanged). d == 1 gives
  // Z_{p^e} with modulus x.
  static RingHandle make(u64 p, u64 e, u64 d);

  // Degree-m tower extension; the level modulus is the lexicographically
  // smallest monic degree-m polynomial irreducible over the residue field.
  RingHandle extend(u64 m) const;

  u64 p() const { return p_; }
  u64 e() const { return e_; }
  // p^e, with 0 standing for 2^64.
  u64 characteristic() const { return pe_; }
  bool full_word() const { return full_word_; }

  const RingHandle& base() const { return base_; }  // null at GR(p^e, d)
  bool is_extension() const { return base_ != nullptr; }
  u64 level_degree() const { return degree_; }
  std::size_t width() const { return width_; }      // u64 words per element
  std::size_t sub_width() const { return sub_width_; }
  u64 total_degree() const { return width_; }       // degree over Z_{p^e}
  std::vector<u64> tower_degrees() const;           // [d, m1, m2, ...]
  // Monic level modulus, flattened: level_degree+1 coefficients of sub_width
  // words each, ascending degree.
  const std::vector<u64>& level_modulus() const { return modulus_; }

  bool same_ring(const Ring& other) const;

  // Residue field size p^total_degree, capped to avoid overflow.
  u64 residue_size_capped(u64 cap) const;

  Elem zero() const;
  Elem one() const;
  Elem from_u64(u64 c) const;
  Elem from_words(std::vector<u64> words) const;
  Elem random(std::mt19937_64& rng) const;

  // Span kernels over width()-sized ranges. add/sub/neg tolerate aliasing;
  // mul requires out disjoint from a and b and a caller-provided scratch of
  // mul_scratch_words() words.
  std::size_t mul_scratch_words() const { return scratch_words_; }
  void add(std::span<const u64> a, std::span<const u64> b, std::span<u64> out) const;
  void sub(std::span<const u64> a, std::span<const u64> b, std::span<u64> out) const;
  void neg(std::span<const u64> a, std::span<u64> out) const;
  void mul(std::span<const u64> a, std::span<const u64> b, std::span<u64> out, u64* scratch) const;
  bool is_zero(std::span<const u64> a) const;

  Elem add(const Elem& a, const Elem& b) const;
  Elem sub(const Elem& a, const Elem& b) const;
  Elem neg(const Elem& a) const;
  Elem mul(const Elem& a, const Elem& b) const;
  Elem pow(const Elem& a, u64 k) const;
  bool is_zero(const Elem& a) const { return is_zero(std::span<const u64>(a.w)); }

  // Unit test per the residue criterion: a mod p != 0.
  bool is_unit(const Elem& a) const;
  // Inverse of a unit: extended Euclid in the residue field, then Newton
  // lifting b <- b(2 - ab) up to precision p^e. Throws NonUnit.
  Elem invert(const Elem& a) const;

  // Tower views (extension nodes only).
  Elem embed(const Elem& base_elem) const;
  std::vector<Elem> coeff_view(const Elem& x) const;
  Elem from_coeffs(std::span<const Elem> coeffs) const;

  // Teichmuller lift of a residue representative (all words < p): iterate
  // z <- z^q to a fixed point, at most e rounds.
  Elem teichmuller(const Elem& rep) const;

  // Scalar helpers for Z_{p^e} words.
  u64 sadd(u64 a, u64 b) const;
  u64 ssub(u64 a, u64 b) const;
  u64 smul(u64 a, u64 b) const;
  u64 sneg(u64 a) const;

  std::string format(const Elem& a) const;
  std::string format_modulus() const;

 private:
  Ring() = default;
  void check_width(std::span<const u64> x) const;
  friend Elem residue_inverse(const Ring& ring, const Elem& canon);

  RingHandle base_;
  u64 p_ = 0;
  u64 e_ = 0;
  u64 pe_ = 0;  // 0 when full_word_
  bool full_word_ = false;
  u64 degree_ = 0;
  std::size_t width_ = 0;
  std::size_t sub_width_ = 0;
  std::vector<u64> modulus_;
  std::size_t scratch_words_ = 0;
  std::size_t tower_level_ = 0;  // 0 at GR(p^e, d)
};

struct ExceptionalSet {
  RingHandle ring;
  std::vector<Elem> elements;
};

// First `count` elements of the canonical exceptional set
// [0, 1, zeta, zeta^2, ...], zeta the Teichmuller lift of the smallest
// generator of the residue field's multiplicative group.
ExceptionalSet exceptional_set(const RingHandle& ring, std::size_t count);

// Wire format: each residue an 8-byte little-endian word, coefficients in
// ascending degree order, tower coefficients innermost first.
void append_u64_le(std::vector<std::uint8_t>& out, u64 v);
u64 read_u64_le(std::span<const std::uint8_t> in, std::size_t& off);
void append_element(std::vector<std::uint8_t>& out, const Ring& ring, const Elem& x);
Elem parse_element(const Ring& ring, std::span<const std::uint8_t> in, std::size_t& off);

// Ring descriptor: magic "GRNG", then p, e, d, the tower level count and one
// degree per tower level, all little-endian u64.
struct RingDescriptor {
  u64 p = 0;
  u64 e = 0;
  std::vector<u64> degrees;  // [d, m1, m2, ...]
};
void append_ring_descriptor(std::vector<std::uint8_t>& out, const Ring& ring);
RingDescriptor parse_ring_descriptor(std::span<const std::uint8_t> in, std::size_t& off);
RingHandle ring_from_descriptor(const RingDescriptor& desc);

}  // namespace grdmm
