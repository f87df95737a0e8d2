#include "grdmm/ring.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <sstream>

namespace grdmm {

Elem residue_inverse(const Ring& ring, const Elem& canon);

namespace {

u64 mulmod_u64(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod_u64(u64 a, u64 k, u64 m) {
  u64 r = 1 % m;
  a %= m;
  while (k) {
    if (k & 1) r = mulmod_u64(r, a, m);
    a = mulmod_u64(a, a, m);
    k >>= 1;
  }
  return r;
}

bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  for (u64 q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % q == 0) return n == q;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    u64 x = powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod_u64(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

// p^e with overflow detection; full-word flag set when p^e == 2^64.
u64 char_modulus(u64 p, u64 e, bool& full_word) {
  u128 acc = 1;
  const u128 limit = static_cast<u128>(1) << 64;
  for (u64 i = 0; i < e; ++i) {
    acc *= p;
    if (acc > limit) fail(Errc::word_overflow, "p^e exceeds the 64-bit word range");
  }
  full_word = (acc == limit);
  return full_word ? 0 : static_cast<u64>(acc);
}

std::vector<u64> prime_factors(u64 n) {
  std::vector<u64> out;
  for (u64 q = 2; q * q <= n; ++q) {
    if (n % q == 0) {
      out.push_back(q);
      while (n % q == 0) n /= q;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

// --- residue-field polynomial machinery -----------------------------------
//
// Coefficients are canonical residue representatives (all words < p): single
// GF(p) words when sub == nullptr, else elements of sub's residue field
// GF(p^D). Used by the modulus search and by inversion; never on hot paths.

struct SubOps {
  const Ring* sub = nullptr;
  u64 p = 0;
  std::size_t w = 1;

  void add(const u64* a, const u64* b, u64* out) const {
    for (std::size_t k = 0; k < w; ++k) out[k] = (a[k] + b[k]) % p;
  }
  void sub_(const u64* a, const u64* b, u64* out) const {
    for (std::size_t k = 0; k < w; ++k) out[k] = (a[k] + p - b[k]) % p;
  }
  void mul(const u64* a, const u64* b, u64* out) const {
    if (!sub) {
      out[0] = mulmod_u64(a[0], b[0], p);
      return;
    }
    std::vector<u64> scratch(sub->mul_scratch_words());
    std::vector<u64> tmp(w);
    sub->mul({a, w}, {b, w}, {tmp.data(), w}, scratch.data());
    for (std::size_t k = 0; k < w; ++k) out[k] = tmp[k] % p;
  }
  void inv(const u64* a, u64* out) const;
  bool is_zero(const u64* a) const {
    for (std::size_t k = 0; k < w; ++k)
      if (a[k]) return false;
    return true;
  }
  bool is_one(const u64* a) const {
    if (a[0] != 1) return false;
    for (std::size_t k = 1; k < w; ++k)
      if (a[k]) return false;
    return true;
  }
};

// Polynomial over SubOps coefficients, flat storage, normalized length.
struct RPoly {
  std::vector<u64> c;
  std::size_t len = 0;
};

RPoly rp_zero() { return {}; }

RPoly rp_make(const SubOps& s, std::vector<u64> flat, std::size_t len) {
  RPoly r{std::move(flat), len};
  while (r.len > 0 && s.is_zero(r.c.data() + (r.len - 1) * s.w)) --r.len;
  r.c.resize(r.len * s.w);
  return r;
}

RPoly rp_one(const SubOps& s) {
  std::vector<u64> flat(s.w, 0);
  flat[0] = 1;
  return {std::move(flat), 1};
}

RPoly rp_x(const SubOps& s) {
  std::vector<u64> flat(2 * s.w, 0);
  flat[s.w] = 1;
  return {std::move(flat), 2};
}

bool rp_equal(const RPoly& a, const RPoly& b) { return a.len == b.len && a.c == b.c; }

RPoly rp_sub(const SubOps& s, const RPoly& a, const RPoly& b) {
  std::size_t len = std::max(a.len, b.len);
  std::vector<u64> flat(len * s.w, 0);
  std::vector<u64> zero(s.w, 0);
  for (std::size_t i = 0; i < len; ++i) {
    const u64* ai = i < a.len ? a.c.data() + i * s.w : zero.data();
    const u64* bi = i < b.len ? b.c.data() + i * s.w : zero.data();
    s.sub_(ai, bi, flat.data() + i * s.w);
  }
  return rp_make(s, std::move(flat), len);
}

RPoly rp_mul(const SubOps& s, const RPoly& a, const RPoly& b) {
  if (a.len == 0 || b.len == 0) return rp_zero();
  std::size_t len = a.len + b.len - 1;
  std::vector<u64> flat(len * s.w, 0);
  std::vector<u64> t(s.w);
  for (std::size_t i = 0; i < a.len; ++i) {
    if (s.is_zero(a.c.data() + i * s.w)) continue;
    for (std::size_t j = 0; j < b.len; ++j) {
      if (s.is_zero(b.c.data() + j * s.w)) continue;
      s.mul(a.c.data() + i * s.w, b.c.data() + j * s.w, t.data());
      s.add(flat.data() + (i + j) * s.w, t.data(), flat.data() + (i + j) * s.w);
    }
  }
  return rp_make(s, std::move(flat), len);
}

// Division with remainder; the divisor's leading coefficient is inverted in
// the residue field.
void rp_divmod(const SubOps& s, const RPoly& a, const RPoly& b, RPoly& quot, RPoly& rem) {
  assert(b.len > 0);
  std::vector<u64> lead_inv(s.w);
  s.inv(b.c.data() + (b.len - 1) * s.w, lead_inv.data());
  std::vector<u64> r = a.c;
  std::size_t rlen = a.len;
  std::size_t qlen = a.len >= b.len ? a.len - b.len + 1 : 0;
  std::vector<u64> q(qlen * s.w, 0);
  std::vector<u64> t(s.w), m(s.w);
  while (rlen >= b.len) {
    const u64* top = r.data() + (rlen - 1) * s.w;
    if (!s.is_zero(top)) {
      s.mul(top, lead_inv.data(), t.data());
      std::size_t shift = rlen - b.len;
      std::copy(t.begin(), t.end(), q.begin() + shift * s.w);
      for (std::size_t j = 0; j < b.len; ++j) {
        s.mul(t.data(), b.c.data() + j * s.w, m.data());
        s.sub_(r.data() + (shift + j) * s.w, m.data(), r.data() + (shift + j) * s.w);
      }
    }
    --rlen;
  }
  quot = rp_make(s, std::move(q), qlen);
  r.resize(rlen * s.w);
  rem = rp_make(s, std::move(r), rlen);
}

RPoly rp_mod(const SubOps& s, const RPoly& a, const RPoly& f) {
  RPoly q, r;
  rp_divmod(s, a, f, q, r);
  return r;
}

RPoly rp_gcd(const SubOps& s, RPoly a, RPoly b) {
  while (b.len > 0) {
    RPoly r = rp_mod(s, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

RPoly rp_mulmod(const SubOps& s, const RPoly& a, const RPoly& b, const RPoly& f) {
  return rp_mod(s, rp_mul(s, a, b), f);
}

// g^p mod f
RPoly rp_powmod_p(const SubOps& s, RPoly g, u64 k, const RPoly& f) {
  RPoly r = rp_one(s);
  while (k) {
    if (k & 1) r = rp_mulmod(s, r, g, f);
    k >>= 1;
    if (k) g = rp_mulmod(s, g, g, f);
  }
  return r;
}

// Rabin's test: monic f of degree m over GF(p^D) is irreducible iff
// x^(q^m) = x mod f and gcd(x^(q^(m/l)) - x, f) = 1 for every prime l | m,
// with q = p^D. Powers of q are taken as D successive p-th powers.
bool rp_irreducible(const SubOps& s, const RPoly& f, u64 m, u64 sub_degree) {
  if (m == 1) return true;
  RPoly x = rp_x(s);
  std::vector<u64> check_at;
  for (u64 ell : prime_factors(m)) check_at.push_back(m / ell);
  RPoly cur = rp_mod(s, x, f);
  for (u64 k = 1; k <= m; ++k) {
    for (u64 i = 0; i < sub_degree; ++i) cur = rp_powmod_p(s, cur, s.p, f);
    if (std::find(check_at.begin(), check_at.end(), k) != check_at.end()) {
      RPoly g = rp_gcd(s, rp_sub(s, cur, rp_mod(s, x, f)), f);
      if (g.len > 1) return false;
    }
    if (k == m && !rp_equal(cur, rp_mod(s, x, f))) return false;
  }
  return true;
}

// Canonical residue representative with index `idx` (base-p digits, low word
// first).
std::vector<u64> residue_rep_words(u64 p, std::size_t w, u64 idx) {
  std::vector<u64> words(w, 0);
  for (std::size_t k = 0; k < w && idx; ++k) {
    words[k] = idx % p;
    idx /= p;
  }
  return words;
}

// Lexicographically smallest monic degree-m polynomial irreducible over the
// residue field described by s (GF(p^sub_degree)). Returns the flat monic
// coefficient list of length (m+1)*s.w.
std::vector<u64> find_irreducible(const SubOps& s, u64 m, u64 sub_degree, u64 q_capped) {
  std::vector<u64> digits(m, 0);
  for (;;) {
    std::vector<u64> flat((m + 1) * s.w, 0);
    for (u64 i = 0; i < m; ++i) {
      std::vector<u64> rep = residue_rep_words(s.p, s.w, digits[i]);
      std::copy(rep.begin(), rep.end(), flat.begin() + i * s.w);
    }
    flat[m * s.w] = 1;
    RPoly f{flat, static_cast<std::size_t>(m + 1)};
    if (rp_irreducible(s, f, m, sub_degree)) return flat;
    std::size_t i = 0;
    while (i < m) {
      if (++digits[i] < q_capped) break;
      digits[i] = 0;
      ++i;
    }
    if (i == m) fail(Errc::residue_field_too_large, "no irreducible polynomial found");
  }
}

void SubOps::inv(const u64* a, u64* out) const {
  if (!sub) {
    out[0] = powmod_u64(a[0], p - 2, p);
    return;
  }
  Elem r = residue_inverse(*sub, Elem(std::vector<u64>(a, a + w)));
  std::copy(r.w.begin(), r.w.end(), out);
}

}  // namespace

// Inverse in the residue field GF(p^total_degree): extended Euclid over the
// level modulus, recursing into the sub-structure for coefficient inverses.
Elem residue_inverse(const Ring& ring, const Elem& canon) {
  const u64 p = ring.p_;
  if (ring.width_ == 1) {
    if (canon.w[0] % p == 0) fail(Errc::non_unit, "zero residue has no inverse");
    return Elem({powmod_u64(canon.w[0] % p, p - 2, p)});
  }
  SubOps s{ring.base_.get(), p, ring.sub_width_};
  const std::size_t n = ring.degree_;
  std::vector<u64> mod_flat((n + 1) * s.w);
  for (std::size_t k = 0; k < mod_flat.size(); ++k) mod_flat[k] = ring.modulus_[k] % p;
  RPoly M = rp_make(s, std::move(mod_flat), n + 1);
  RPoly A = rp_make(s, canon.w, n);
  if (A.len == 0) fail(Errc::non_unit, "zero residue has no inverse");

  RPoly r0 = M, r1 = A;
  RPoly s0 = rp_zero(), s1 = rp_one(s);
  while (r1.len > 1) {
    RPoly q, rem;
    rp_divmod(s, r0, r1, q, rem);
    r0 = std::move(r1);
    r1 = std::move(rem);
    if (r1.len == 0) fail(Errc::non_unit, "element is not invertible modulo p");
    RPoly snew = rp_sub(s, s0, rp_mul(s, q, s1));
    s0 = std::move(s1);
    s1 = std::move(snew);
  }
  std::vector<u64> cinv(s.w);
  s.inv(r1.c.data(), cinv.data());
  std::vector<u64> flat(n * s.w, 0);
  std::vector<u64> t(s.w);
  for (std::size_t i = 0; i < s1.len; ++i) {
    s.mul(s1.c.data() + i * s.w, cinv.data(), t.data());
    std::copy(t.begin(), t.end(), flat.begin() + i * s.w);
  }
  return Elem(std::move(flat));
}

// --- construction ----------------------------------------------------------

RingHandle Ring::make(u64 p, u64 e, u64 d) {
  if (!is_prime_u64(p)) fail(Errc::not_prime, "p must be prime");
  if (e < 1 || d < 1) fail(Errc::params_mismatch, "e and d must be positive");
  auto r = std::shared_ptr<Ring>(new Ring());
  r->p_ = p;
  r->e_ = e;
  r->pe_ = char_modulus(p, e, r->full_word_);
  r->degree_ = d;
  r->width_ = d;
  r->sub_width_ = 1;
  SubOps s{nullptr, p, 1};
  r->modulus_ = find_irreducible(s, d, 1, p);
  r->scratch_words_ = d > 1 ? 2 * d - 1 : 0;
  r->tower_level_ = 0;
  return r;
}

RingHandle Ring::extend(u64 m) const {
  if (m < 1) fail(Errc::params_mismatch, "extension degree must be positive");
  SubOps s{this, p_, width_};
  u64 q_capped = residue_size_capped(u64(1) << 62);
  auto r = std::shared_ptr<Ring>(new Ring());
  r->base_ = shared_from_this();
  r->p_ = p_;
  r->e_ = e_;
  r->pe_ = pe_;
  r->full_word_ = full_word_;
  r->degree_ = m;
  r->width_ = m * width_;
  r->sub_width_ = width_;
  r->modulus_ = find_irreducible(s, m, width_, q_capped);
  r->scratch_words_ = 2 * m * width_ + scratch_words_;
  r->tower_level_ = tower_level_ + 1;
  return r;
}

std::vector<u64> Ring::tower_degrees() const {
  std::vector<u64> out;
  for (const Ring* node = this; node; node = node->base_.get()) out.push_back(node->degree_);
  std::reverse(out.begin(), out.end());
  return out;
}

bool Ring::same_ring(const Ring& other) const {
  if (this == &other) return true;
  if (p_ != other.p_ || e_ != other.e_ || degree_ != other.degree_ || width_ != other.width_ ||
      modulus_ != other.modulus_)
    return false;
  if (static_cast<bool>(base_) != static_cast<bool>(other.base_)) return false;
  return base_ ? base_->same_ring(*other.base_) : true;
}

u64 Ring::residue_size_capped(u64 cap) const {
  u64 acc = 1;
  for (std::size_t i = 0; i < width_; ++i) {
    if (acc > cap / p_) return cap;
    acc *= p_;
  }
  return std::min(acc, cap);
}

// --- scalar residue ops ----------------------------------------------------

u64 Ring::sadd(u64 a, u64 b) const {
  if (full_word_) return a + b;
  u64 s = a + b;
  if (s < a || s >= pe_) s -= pe_;
  return s;
}

u64 Ring::ssub(u64 a, u64 b) const {
  if (full_word_) return a - b;
  return a >= b ? a - b : a + (pe_ - b);
}

u64 Ring::smul(u64 a, u64 b) const {
  if (full_word_) return a * b;
  return mulmod_u64(a, b, pe_);
}

u64 Ring::sneg(u64 a) const {
  if (full_word_) return ~a + 1;
  return a ? pe_ - a : 0;
}

// --- element constructors ---------------------------------------------------

Elem Ring::zero() const { return Elem(std::vector<u64>(width_, 0)); }

Elem Ring::one() const {
  Elem r = zero();
  r.w[0] = 1;
  return r;
}

Elem Ring::from_u64(u64 c) const {
  Elem r = zero();
  r.w[0] = full_word_ ? c : c % pe_;
  return r;
}

Elem Ring::from_words(std::vector<u64> words) const {
  if (words.size() != width_) fail(Errc::params_mismatch, "coefficient count does not match ring width");
  if (!full_word_) {
    for (u64 w : words)
      if (w >= pe_) fail(Errc::params_mismatch, "residue out of range");
  }
  return Elem(std::move(words));
}

Elem Ring::random(std::mt19937_64& rng) const {
  Elem r = zero();
  for (auto& w : r.w) w = full_word_ ? rng() : rng() % pe_;
  return r;
}

// --- span kernels ------------------------------------------------------------

void Ring::check_width(std::span<const u64> x) const {
  if (x.size() != width_) fail(Errc::params_mismatch, "element width does not match ring");
}

bool Ring::is_zero(std::span<const u64> a) const {
  for (u64 w : a)
    if (w) return false;
  return true;
}

void Ring::add(std::span<const u64> a, std::span<const u64> b, std::span<u64> out) const {
  for (std::size_t k = 0; k < width_; ++k) out[k] = sadd(a[k], b[k]);
}

void Ring::sub(std::span<const u64> a, std::span<const u64> b, std::span<u64> out) const {
  for (std::size_t k = 0; k < width_; ++k) out[k] = ssub(a[k], b[k]);
}

void Ring::neg(std::span<const u64> a, std::span<u64> out) const {
  for (std::size_t k = 0; k < width_; ++k) out[k] = sneg(a[k]);
}

void Ring::mul(std::span<const u64> a, std::span<const u64> b, std::span<u64> out, u64* scratch) const {
  if (!base_) {
    const std::size_t d = degree_;
    if (d == 1) {
      out[0] = smul(a[0], b[0]);
      return;
    }
    u64* prod = scratch;
    std::fill(prod, prod + 2 * d - 1, 0);
    for (std::size_t i = 0; i < d; ++i) {
      const u64 ai = a[i];
      if (ai == 0) continue;
      for (std::size_t j = 0; j < d; ++j) {
        if (b[j] == 0) continue;
        prod[i + j] = sadd(prod[i + j], smul(ai, b[j]));
      }
    }
    for (std::size_t t = 2 * d - 2; t + 1 > d; --t) {
      const u64 c = prod[t];
      if (c == 0) continue;
      for (std::size_t j = 0; j < d; ++j) {
        const u64 fj = modulus_[j];
        if (fj == 0) continue;
        prod[t - d + j] = ssub(prod[t - d + j], smul(c, fj));
      }
    }
    std::copy(prod, prod + d, out.begin());
    return;
  }

  const std::size_t W = sub_width_;
  const std::size_t n = degree_;
  const Ring& B = *base_;
  u64* prod = scratch;                 // (2n-1)*W unreduced product
  u64* tmp = prod + (2 * n - 1) * W;   // one sub-element
  u64* sub_scratch = tmp + W;
  std::fill(prod, prod + (2 * n - 1) * W, 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::span<const u64> ai = a.subspan(i * W, W);
    if (B.is_zero(ai)) continue;
    for (std::size_t j = 0; j < n; ++j) {
      std::span<const u64> bj = b.subspan(j * W, W);
      if (B.is_zero(bj)) continue;
      B.mul(ai, bj, {tmp, W}, sub_scratch);
      u64* dst = prod + (i + j) * W;
      for (std::size_t k = 0; k < W; ++k) dst[k] = sadd(dst[k], tmp[k]);
    }
  }
  for (std::size_t t = 2 * n - 2; t + 1 > n; --t) {
    const u64* c = prod + t * W;
    if (B.is_zero({c, W})) continue;
    for (std::size_t j = 0; j < n; ++j) {
      std::span<const u64> fj{modulus_.data() + j * W, W};
      if (B.is_zero(fj)) continue;
      B.mul({c, W}, fj, {tmp, W}, sub_scratch);
      u64* dst = prod + (t - n + j) * W;
      for (std::size_t k = 0; k < W; ++k) dst[k] = ssub(dst[k], tmp[k]);
    }
  }
  std::copy(prod, prod + n * W, out.begin());
}

// --- value API ---------------------------------------------------------------

Elem Ring::add(const Elem& a, const Elem& b) const {
  check_width(a.w);
  check_width(b.w);
  Elem r = zero();
  add(a.w, b.w, r.w);
  return r;
}

Elem Ring::sub(const Elem& a, const Elem& b) const {
  check_width(a.w);
  check_width(b.w);
  Elem r = zero();
  sub(a.w, b.w, r.w);
  return r;
}

Elem Ring::neg(const Elem& a) const {
  check_width(a.w);
  Elem r = zero();
  neg(a.w, r.w);
  return r;
}

Elem Ring::mul(const Elem& a, const Elem& b) const {
  check_width(a.w);
  check_width(b.w);
  Elem r = zero();
  std::vector<u64> scratch(scratch_words_);
  mul(a.w, b.w, r.w, scratch.data());
  return r;
}

Elem Ring::pow(const Elem& a, u64 k) const {
  check_width(a.w);
  Elem result = one();
  Elem base_v = a;
  while (k) {
    if (k & 1) result = mul(result, base_v);
    k >>= 1;
    if (k) base_v = mul(base_v, base_v);
  }
  return result;
}

bool Ring::is_unit(const Elem& a) const {
  check_width(a.w);
  for (u64 w : a.w)
    if (w % p_) return true;
  return false;
}

Elem Ring::invert(const Elem& a) const {
  if (!is_unit(a)) fail(Errc::non_unit, "element is not a unit");
  Elem canon = zero();
  for (std::size_t k = 0; k < width_; ++k) canon.w[k] = a.w[k] % p_;
  Elem r = residue_inverse(*this, canon);
  if (e_ > 1) {
    Elem two = from_u64(2);
    for (u64 prec = 1; prec < e_; prec *= 2) r = mul(r, sub(two, mul(a, r)));
  }
  assert(mul(a, r) == one());
  return r;
}

// --- tower views ---------------------------------------------------------------

Elem Ring::embed(const Elem& base_elem) const {
  if (!base_) fail(Errc::params_mismatch, "embed requires an extension ring");
  if (base_elem.w.size() != sub_width_) fail(Errc::params_mismatch, "element does not belong to the base ring");
  Elem r = zero();
  std::copy(base_elem.w.begin(), base_elem.w.end(), r.w.begin());
  return r;
}

std::vector<Elem> Ring::coeff_view(const Elem& x) const {
  if (!base_) fail(Errc::params_mismatch, "coeff_view requires an extension ring");
  check_width(x.w);
  std::vector<Elem> out;
  out.reserve(degree_);
  for (std::size_t i = 0; i < degree_; ++i)
    out.emplace_back(std::vector<u64>(x.w.begin() + i * sub_width_, x.w.begin() + (i + 1) * sub_width_));
  return out;
}

Elem Ring::from_coeffs(std::span<const Elem> coeffs) const {
  if (!base_) fail(Errc::params_mismatch, "from_coeffs requires an extension ring");
  if (coeffs.size() > degree_) fail(Errc::length_mismatch, "too many tower coefficients");
  Elem r = zero();
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i].w.size() != sub_width_) fail(Errc::params_mismatch, "coefficient does not belong to the base ring");
    std::copy(coeffs[i].w.begin(), coeffs[i].w.end(), r.w.begin() + i * sub_width_);
  }
  return r;
}

Elem Ring::teichmuller(const Elem& rep) const {
  u64 q = residue_size_capped(u64(1) << 32);
  Elem z = rep;
  for (u64 it = 0; it < e_; ++it) {
    Elem zq = pow(z, q);
    if (zq == z) return z;
    z = zq;
  }
  if (pow(z, q) != z) throw std::logic_error("teichmuller iteration did not converge");
  return z;
}

// --- exceptional sets ------------------------------------------------------------

namespace {

Elem res_mul(const Ring& r, const Elem& a, const Elem& b) {
  Elem t = r.mul(a, b);
  for (auto& w : t.w) w %= r.p();
  return t;
}

Elem res_pow(const Ring& r, Elem a, u64 k) {
  Elem acc = r.one();
  while (k) {
    if (k & 1) acc = res_mul(r, acc, a);
    k >>= 1;
    if (k) a = res_mul(r, a, a);
  }
  return acc;
}

}  // namespace

ExceptionalSet exceptional_set(const RingHandle& ring, std::size_t count) {
  const Ring& r = *ring;
  u64 q = r.residue_size_capped(u64(1) << 62);
  if (count > q) fail(Errc::count_too_large, "exceptional set larger than the residue field");
  std::vector<Elem> out;
  out.reserve(count);
  if (count >= 1) out.push_back(r.zero());
  if (count >= 2) out.push_back(r.one());
  if (count > 2) {
    if (q > (u64(1) << 24))
      fail(Errc::residue_field_too_large, "generator search is limited to residue fields of size <= 2^24");
    std::vector<u64> primes = prime_factors(q - 1);
    Elem gen;
    bool found = false;
    for (u64 idx = 2; idx < q && !found; ++idx) {
      Elem cand(residue_rep_words(r.p(), r.width(), idx));
      bool ok = true;
      for (u64 ell : primes) {
        if (res_pow(r, cand, (q - 1) / ell) == r.one()) {
          ok = false;
          break;
        }
      }
      if (ok) {
        gen = cand;
        found = true;
      }
    }
    if (!found) throw std::logic_error("no multiplicative generator found");
    Elem zeta = r.teichmuller(gen);
    Elem cur = zeta;
    for (std::size_t k = 2; k < count; ++k) {
      out.push_back(cur);
      cur = r.mul(cur, zeta);
    }
  }
  return {ring, std::move(out)};
}

// --- formatting -----------------------------------------------------------------

namespace {

const char* kVarNames[] = {"x", "y", "z", "w", "v", "u"};

std::string format_chunk(const Ring* node, std::span<const u64> chunk);

// Formats a coefficient sequence as a polynomial in the variable of `level`,
// highest degree first.
std::string format_poly_chunks(const Ring* sub, std::size_t level, std::span<const u64> flat,
                               std::size_t chunk_w, std::size_t count) {
  std::string var = kVarNames[std::min<std::size_t>(level, 5)];
  std::ostringstream os;
  bool first = true;
  for (std::size_t ii = count; ii-- > 0;) {
    std::span<const u64> chunk = flat.subspan(ii * chunk_w, chunk_w);
    bool zero = true;
    for (u64 w : chunk)
      if (w) zero = false;
    if (zero) continue;
    std::string cs = format_chunk(sub, chunk);
    if (!first) os << "+";
    first = false;
    if (ii == 0) {
      os << cs;
    } else {
      if (cs != "1") {
        if (cs.find('+') != std::string::npos)
          os << "(" << cs << ")";
        else
          os << cs;
      }
      os << var;
      if (ii > 1) os << "^" << ii;
    }
  }
  if (first) return "0";
  return os.str();
}

std::string format_chunk(const Ring* node, std::span<const u64> chunk) {
  if (!node) return std::to_string(chunk[0]);
  std::size_t level = node->tower_degrees().size() - 1;
  return format_poly_chunks(node->base().get(), level, chunk, node->sub_width(), node->level_degree());
}

}  // namespace

std::string Ring::format(const Elem& a) const {
  check_width(a.w);
  return format_chunk(this, a.w);
}

std::string Ring::format_modulus() const {
  std::size_t level = tower_degrees().size() - 1;
  return format_poly_chunks(base_.get(), level, modulus_, sub_width_, degree_ + 1);
}

// --- serialization -----------------------------------------------------------------

void append_u64_le(std::vector<std::uint8_t>& out, u64 v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

u64 read_u64_le(std::span<const std::uint8_t> in, std::size_t& off) {
  if (off + 8 > in.size()) fail(Errc::io_error, "truncated input");
  u64 v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<u64>(in[off + i]) << (8 * i);
  off += 8;
  return v;
}

void append_element(std::vector<std::uint8_t>& out, const Ring& ring, const Elem& x) {
  if (x.w.size() != ring.width()) fail(Errc::params_mismatch, "element width does not match ring");
  for (u64 w : x.w) append_u64_le(out, w);
}

Elem parse_element(const Ring& ring, std::span<const std::uint8_t> in, std::size_t& off) {
  std::vector<u64> words(ring.width());
  for (auto& w : words) w = read_u64_le(in, off);
  if (!ring.full_word()) {
    for (u64 w : words)
      if (w >= ring.characteristic()) fail(Errc::io_error, "residue out of range");
  }
  return Elem(std::move(words));
}

void append_ring_descriptor(std::vector<std::uint8_t>& out, const Ring& ring) {
  out.insert(out.end(), {'G', 'R', 'N', 'G'});
  std::vector<u64> degrees = ring.tower_degrees();
  append_u64_le(out, ring.p());
  append_u64_le(out, ring.e());
  append_u64_le(out, degrees[0]);
  append_u64_le(out, degrees.size() - 1);
  for (std::size_t i = 1; i < degrees.size(); ++i) append_u64_le(out, degrees[i]);
}

RingDescriptor parse_ring_descriptor(std::span<const std::uint8_t> in, std::size_t& off) {
  if (off + 4 > in.size() || in[off] != 'G' || in[off + 1] != 'R' || in[off + 2] != 'N' || in[off + 3] != 'G')
    fail(Errc::io_error, "bad ring descriptor magic");
  off += 4;
  RingDescriptor d;
  d.p = read_u64_le(in, off);
  d.e = read_u64_le(in, off);
  d.degrees.push_back(read_u64_le(in, off));
  u64 levels = read_u64_le(in, off);
  for (u64 i = 0; i < levels; ++i) d.degrees.push_back(read_u64_le(in, off));
  return d;
}

RingHandle ring_from_descriptor(const RingDescriptor& desc) {
  if (desc.degrees.empty()) fail(Errc::io_error, "empty ring descriptor");
  RingHandle r = Ring::make(desc.p, desc.e, desc.degrees[0]);
  for (std::size_t i = 1; i < desc.degrees.size(); ++i) r = r->extend(desc.degrees[i]);
  return r;
}

}  // namespace grdmm
