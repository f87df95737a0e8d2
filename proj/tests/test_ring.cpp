#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "grdmm/ring.hpp"
#include "oracle.hpp"

using namespace grdmm;

namespace {

Elem E(const RingHandle& r, std::vector<u64> words) {
  words.resize(r->width(), 0);
  return r->from_words(std::move(words));
}

}  // namespace

TEST_CASE("modulus selection matches brute-force enumeration") {
  // (p, e, d) -> expected via exhaustive irreducibility search over GF(p)
  CHECK(Ring::make(2, 2, 1)->level_modulus() == std::vector<u64>{0, 1});
  CHECK(Ring::make(2, 2, 2)->level_modulus() == std::vector<u64>{1, 1, 1});  // x^2+x+1
  CHECK(Ring::make(3, 1, 2)->level_modulus() == std::vector<u64>{1, 0, 1});  // x^2+1

  for (auto [p, d] : std::vector<std::pair<u64, u64>>{{2, 2}, {2, 3}, {2, 4}, {3, 2}, {3, 3}, {5, 2}}) {
    auto ring = Ring::make(p, 1, d);
    CHECK(ring->level_modulus() == oracle::gfp_first_irreducible(p, d));
  }
}

TEST_CASE("make_ring validation") {
  CHECK_THROWS_WITH_AS(Ring::make(4, 2, 1), "p must be prime", Error);
  CHECK_THROWS_AS(Ring::make(2, 65, 1), Error);  // 2^65 overflows the word
  CHECK_NOTHROW(Ring::make(2, 64, 1));           // wraparound ring
  try {
    Ring::make(6, 1, 1);
  } catch (const Error& err) {
    CHECK(err.code() == Errc::not_prime);
  }
}

TEST_CASE("ring arithmetic on worked examples") {
  auto z4 = Ring::make(2, 2, 1);
  CHECK(z4->mul(E(z4, {3}), E(z4, {3})) == E(z4, {1}));

  auto gr42 = Ring::make(2, 2, 2);
  // xi * xi = 3xi + 3 modulo x^2+x+1 over Z_4
  CHECK(gr42->mul(E(gr42, {0, 1}), E(gr42, {0, 1})) == E(gr42, {3, 3}));
  // (2 + xi) + (3 + 3xi) = 1
  CHECK(gr42->add(E(gr42, {2, 1}), E(gr42, {3, 3})) == E(gr42, {1, 0}));
}

TEST_CASE("unit criterion and inverses") {
  auto z4 = Ring::make(2, 2, 1);
  CHECK_FALSE(z4->is_unit(E(z4, {2})));
  CHECK(z4->is_unit(E(z4, {3})));
  CHECK(z4->invert(E(z4, {3})) == E(z4, {3}));
  CHECK(z4->invert(E(z4, {1})) == E(z4, {1}));
  CHECK_THROWS_AS(z4->invert(E(z4, {2})), Error);

  auto gr42 = Ring::make(2, 2, 2);
  CHECK(gr42->is_unit(E(gr42, {0, 1})));
  CHECK(gr42->invert(E(gr42, {0, 1})) == E(gr42, {3, 3}));
  CHECK(gr42->mul(E(gr42, {0, 1}), E(gr42, {3, 3})) == gr42->one());
}

TEST_CASE("exhaustive unit scan on Z_4 and GR(4,2)") {
  for (auto ring : {Ring::make(2, 2, 1), Ring::make(2, 2, 2)}) {
    auto all = oracle::all_elements(ring);
    for (const auto& a : all) {
      // brute-force: a is a unit iff some b has a*b = 1
      bool unit_bf = false;
      for (const auto& b : all)
        if (ring->mul(a, b) == ring->one()) unit_bf = true;
      bool mod_p_nonzero = false;
      for (u64 w : a.w)
        if (w % ring->p()) mod_p_nonzero = true;
      CHECK(ring->is_unit(a) == unit_bf);
      CHECK(ring->is_unit(a) == mod_p_nonzero);
      if (unit_bf) CHECK(ring->mul(a, ring->invert(a)) == ring->one());
    }
  }
}

TEST_CASE("random units invert in GR(2^64, 1..4)") {
  std::mt19937_64 rng(7);
  for (u64 d : {1, 2, 3, 4}) {
    auto ring = Ring::make(2, 64, d);
    for (int trial = 0; trial < 20; ++trial) {
      Elem a = ring->random(rng);
      if (!ring->is_unit(a)) a.w[0] |= 1;
      CHECK(ring->mul(a, ring->invert(a)) == ring->one());
    }
  }
}

TEST_CASE("ring axioms hold on random samples") {
  std::mt19937_64 rng(11);
  std::vector<RingHandle> rings = {Ring::make(2, 2, 1), Ring::make(2, 2, 2), Ring::make(3, 2, 2),
                                   Ring::make(2, 64, 3), Ring::make(2, 2, 1)->extend(3)->extend(3)};
  for (const auto& ring : rings) {
    for (int trial = 0; trial < 50; ++trial) {
      Elem a = ring->random(rng), b = ring->random(rng), c = ring->random(rng);
      CHECK(ring->add(ring->add(a, b), c) == ring->add(a, ring->add(b, c)));
      CHECK(ring->mul(a, ring->add(b, c)) == ring->add(ring->mul(a, b), ring->mul(a, c)));
      CHECK(ring->mul(a, b) == ring->mul(b, a));
      CHECK(ring->mul(ring->one(), a) == a);
      CHECK(ring->mul(ring->mul(a, b), c) == ring->mul(a, ring->mul(b, c)));
      CHECK(ring->add(a, ring->neg(a)) == ring->zero());
      // characteristic: p^e * a = 0
      Elem acc = ring->zero();
      if (!ring->full_word()) {
        for (u64 k = 0; k < ring->characteristic(); ++k) acc = ring->add(acc, a);
        CHECK(acc == ring->zero());
      }
    }
  }
}

TEST_CASE("exceptional sets") {
  auto z4 = Ring::make(2, 2, 1);
  auto t2 = exceptional_set(z4, 2);
  CHECK(t2.elements == std::vector<Elem>{E(z4, {0}), E(z4, {1})});
  CHECK_THROWS_AS(exceptional_set(z4, 3), Error);

  auto gr42 = Ring::make(2, 2, 2);
  auto t4 = exceptional_set(gr42, 4);
  CHECK(t4.elements == std::vector<Elem>{E(gr42, {0, 0}), E(gr42, {1, 0}), E(gr42, {0, 1}), E(gr42, {3, 3})});

  auto gf4 = Ring::make(2, 1, 2);
  auto tf = exceptional_set(gf4, 4);
  CHECK(tf.elements.size() == 4);
  // over a field the exceptional set exhausts all elements
  auto all = oracle::all_elements(gf4);
  for (const auto& a : all) CHECK(std::count(tf.elements.begin(), tf.elements.end(), a) == 1);
}

TEST_CASE("exceptional set invariants") {
  std::vector<RingHandle> rings = {Ring::make(2, 2, 2), Ring::make(2, 1, 2), Ring::make(3, 2, 2),
                                   Ring::make(2, 64, 1)->extend(4)};
  for (const auto& ring : rings) {
    u64 q = ring->residue_size_capped(1u << 20);
    auto t = exceptional_set(ring, q);
    for (std::size_t i = 0; i < t.elements.size(); ++i) {
      for (std::size_t j = i + 1; j < t.elements.size(); ++j) {
        CHECK(ring->is_unit(ring->sub(t.elements[i], t.elements[j])));
        // pairwise distinct mod p
        bool distinct_mod_p = false;
        for (std::size_t k = 0; k < ring->width(); ++k)
          if (t.elements[i].w[k] % ring->p() != t.elements[j].w[k] % ring->p()) distinct_mod_p = true;
        CHECK(distinct_mod_p);
      }
      // Teichmuller property for the nonzero elements
      if (i >= 1) CHECK(ring->pow(t.elements[i], q) == t.elements[i]);
    }
  }
}

TEST_CASE("construction is deterministic") {
  auto a = Ring::make(2, 64, 1)->extend(3);
  auto b = Ring::make(2, 64, 1)->extend(3);
  CHECK(a->same_ring(*b));
  CHECK(a->level_modulus() == b->level_modulus());
  CHECK(exceptional_set(a, 8).elements == exceptional_set(b, 8).elements);
}

TEST_CASE("embed and coeff_view") {
  auto z4 = Ring::make(2, 2, 1);
  auto ext = z4->extend(3);
  Elem three = E(z4, {3});
  Elem up = ext->embed(three);
  CHECK(up.w == std::vector<u64>{3, 0, 0});
  auto view = ext->coeff_view(up);
  REQUIRE(view.size() == 3);
  CHECK(view[0] == three);
  CHECK(view[1] == z4->zero());
  CHECK(view[2] == z4->zero());
  CHECK(ext->embed(z4->zero()) == ext->zero());

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    Elem a = z4->random(rng);
    auto v = ext->coeff_view(ext->embed(a));
    CHECK(v[0] == a);
    CHECK(v[1] == z4->zero());
  }
  // roundtrip through from_coeffs
  Elem r = ext->random(rng);
  auto coeffs = ext->coeff_view(r);
  CHECK(ext->from_coeffs(coeffs) == r);
}

TEST_CASE("wraparound ring Z_2^64") {
  auto z = Ring::make(2, 64, 1);
  Elem a = E(z, {~0ull});
  CHECK(z->add(a, z->one()) == z->zero());
  CHECK(z->mul(a, a) == z->one());  // (-1)^2
  CHECK(z->is_unit(a));
  CHECK(z->invert(a) == a);
}

TEST_CASE("element and descriptor serialization") {
  auto ring = Ring::make(2, 2, 2)->extend(3);
  std::mt19937_64 rng(9);
  Elem a = ring->random(rng);
  std::vector<std::uint8_t> buf;
  append_ring_descriptor(buf, *ring);
  append_element(buf, *ring, a);
  std::size_t off = 0;
  auto desc = parse_ring_descriptor(buf, off);
  CHECK(desc.p == 2);
  CHECK(desc.e == 2);
  CHECK(desc.degrees == std::vector<u64>{2, 3});
  auto rebuilt = ring_from_descriptor(desc);
  CHECK(rebuilt->same_ring(*ring));
  Elem back = parse_element(*rebuilt, buf, off);
  CHECK(back == a);
  CHECK(off == buf.size());
}

TEST_CASE("format is readable") {
  auto gr42 = Ring::make(2, 2, 2);
  CHECK(gr42->format_modulus() == "x^2+x+1");
  CHECK(gr42->format(E(gr42, {3, 3})) == "3x+3");
  CHECK(gr42->format(E(gr42, {0, 1})) == "x");
  CHECK(gr42->format(gr42->zero()) == "0");
  auto z4 = Ring::make(2, 2, 1);
  CHECK(z4->format_modulus() == "x");
  CHECK(z4->format(E(z4, {3})) == "3");
}
