#include <doctest.h>

#include "opchain/error.hpp"
#include "opchain/order_iso.hpp"

using namespace opchain;

namespace {
ConvexSet ray_above(const Rational& a, bool closed = false) {
  return ConvexSet::make(ExtPoint::at(a), closed, ExtPoint::pos_inf(), false);
}
ConvexSet ray_below(const Rational& b, bool closed = false) {
  return ConvexSet::make(ExtPoint::neg_inf(), false, ExtPoint::at(b), closed);
}
}  // namespace

TEST_CASE("bounded-to-bounded isomorphisms are affine") {
  // (0,1/3) -> (2/3,1) is the translation x + 2/3
  MapAtom t = make_iso(ConvexSet::open(0, Rational(1) / 3),
                       ConvexSet::open(Rational(2) / 3, 1));
  CHECK(eval_atom(t, Rational(1) / 6) == Rational(5) / 6);
  CHECK(eval_atom(t, Rational(1) / 4) == Rational(11) / 12);
  // canonical integer coefficients: (3x + 2)/3
  CHECK(t.p == 3);
  CHECK(t.q == 2);
  CHECK(t.r == 0);
  CHECK(t.s == 3);

  MapAtom sq = make_iso(ConvexSet::closed(0, 1), ConvexSet::closed(4, 6));
  CHECK(eval_atom(sq, 0) == 4);
  CHECK(eval_atom(sq, 1) == 6);
  CHECK(eval_atom(sq, Rational(1) / 2) == 5);
}

TEST_CASE("bounded-to-unbounded uses the standard ray transform") {
  // (0,1) -> (0,+inf): x/(1-x); at 1/2 the value is 1
  MapAtom v = make_iso(ConvexSet::open(0, 1), ray_above(0));
  CHECK(eval_atom(v, Rational(1) / 2) == 1);
  CHECK(eval_atom(v, Rational(1) / 3) == Rational(1) / 2);
  CHECK(eval_atom(v, Rational(3) / 4) == 3);

  // (0,1) -> (1,+inf): 1 + x/(1-x)
  MapAtom nu = make_iso(ConvexSet::open(0, 1), ray_above(1));
  CHECK(eval_atom(nu, Rational(1) / 2) == 2);
  CHECK(eval_atom(nu, Rational(2) / 3) == 3);

  // the pole sits outside the source
  CHECK_THROWS_AS(eval_atom(nu, 1), Error);
  CHECK_THROWS_AS(eval_atom(nu, 2), Error);
}

TEST_CASE("attainment of endpoints must match") {
  // closed end mapped to an open end cannot be an order isomorphism
  CHECK_THROWS_AS(make_iso(ConvexSet::closed(0, 1), ConvexSet::open(0, 1)),
                  Error);
  CHECK_THROWS_AS(make_iso(ConvexSet::closed_open(0, 1), ConvexSet::open(0, 1)),
                  Error);
  // a closed endpoint cannot reach an infinite end
  CHECK_THROWS_AS(make_iso(ConvexSet::closed(0, 1), ray_above(0, true)),
                  Error);
  // half-open onto half-open with matching sides works
  MapAtom ok = make_iso(ConvexSet::closed_open(0, 1), ConvexSet::closed_open(2, 3));
  CHECK(eval_atom(ok, 0) == 2);
  // empty sets are rejected
  CHECK_THROWS_AS(make_iso(ConvexSet::empty(), ConvexSet::open(0, 1)), Error);
}

TEST_CASE("unbounded-to-unbounded isomorphisms") {
  MapAtom up = make_iso(ray_above(0), ray_above(5));  // translation
  CHECK(eval_atom(up, 1) == 6);

  MapAtom down = make_iso(ray_below(0), ray_below(-2));
  CHECK(eval_atom(down, -1) == -3);

  // (1,inf) -> (-inf,4) must be increasing, e.g. x -> 4 - 1/(x-1)
  MapAtom flip = make_iso(ray_above(1), ray_below(4));
  CHECK(eval_atom(flip, 2) == 3);
  CHECK(eval_atom(flip, 3) < 4);
  CHECK(eval_atom(flip, 2) < eval_atom(flip, 3));
}

TEST_CASE("inversion swaps source and destination exactly") {
  MapAtom nu = make_iso(ConvexSet::open(0, 1), ray_above(1));
  MapAtom nu_inv = invert_atom(nu);
  CHECK(nu_inv.src == nu.dst);
  CHECK(nu_inv.dst == nu.src);
  CHECK(eval_atom(nu_inv, 2) == Rational(1) / 2);
  for (int i = 1; i < 8; ++i) {
    Rational x(i, 9);
    CHECK(eval_atom(nu_inv, eval_atom(nu, x)) == x);
  }
  // inverting a constant is not possible
  CHECK_THROWS_AS(invert_atom(MapAtom::constant(3)), Error);
}

TEST_CASE("composition of atoms multiplies the rules") {
  MapAtom f = make_iso(ConvexSet::open(0, 1), ConvexSet::open(2, 4));
  MapAtom g = make_iso(ConvexSet::open(2, 4), ConvexSet::open(0, 1));
  MapAtom gf = compose_atoms(f, g);  // f first, then g
  CHECK(gf.src == f.src);
  CHECK(gf.dst == ConvexSet::open(0, 1));
  Rational x(1, 3);
  CHECK(eval_atom(gf, x) == eval_atom(g, eval_atom(f, x)));

  // g must accept everything f produces
  MapAtom narrow = make_iso(ConvexSet::open(2, 3), ConvexSet::open(0, 1));
  CHECK_THROWS_AS(compose_atoms(f, narrow), Error);

  // composing with a constant collapses
  MapAtom c = compose_atoms(f, MapAtom::constant(9));
  CHECK(c.is_constant());
  CHECK(c.value == 9);
}

TEST_CASE("identity atoms") {
  MapAtom id = MapAtom::identity_on(ConvexSet::closed(0, 1));
  CHECK(id.is_identity());
  CHECK(eval_atom(id, Rational(1) / 7) == Rational(1) / 7);
  MapAtom shifted = make_iso(ConvexSet::open(0, 1), ConvexSet::open(1, 2));
  CHECK_FALSE(shifted.is_identity());
}

TEST_CASE("images and preimages of subsets") {
  MapAtom t = make_iso(ConvexSet::open(0, 1), ConvexSet::open(0, 2));  // 2x
  CHECK(image_of(t, ConvexSet::closed(Rational(1) / 4, Rational(1) / 2)) ==
        ConvexSet::closed(Rational(1) / 2, 1));
  CHECK(preimage_of(t, ConvexSet::open(1, 2)) ==
        ConvexSet::open(Rational(1) / 2, 1));
  // preimages clip to the destination; images demand containment
  CHECK(preimage_of(t, ConvexSet::closed(1, 5)) ==
        ConvexSet::closed_open(Rational(1) / 2, 1));
  CHECK_THROWS_AS(image_of(t, ConvexSet::closed(-5, 5)), Error);

  MapAtom nu = make_iso(ConvexSet::open(0, 1), ray_above(1));
  CHECK(image_of(nu, ConvexSet::open(0, Rational(1) / 2)) ==
        ConvexSet::open(1, 2));
  CHECK(preimage_of(nu, ConvexSet::open(2, 3)) ==
        ConvexSet::open(Rational(1) / 2, Rational(2) / 3));
}

TEST_CASE("extended evaluation tracks limits at open ends") {
  MapAtom nu = make_iso(ConvexSet::open(0, 1), ray_above(1));
  CHECK(eval_atom_ext(nu, ExtPoint::at(Rational(1) / 2)) == ExtPoint::at(2));
  CHECK(eval_atom_ext(nu, ExtPoint::at(1)) == ExtPoint::pos_inf());
  CHECK(eval_atom_ext(nu, ExtPoint::at(0)) == ExtPoint::at(1));
}

TEST_CASE("eval outside the source is an error") {
  MapAtom t = make_iso(ConvexSet::open(0, 1), ConvexSet::open(2, 3));
  CHECK_THROWS_AS(eval_atom(t, 0), Error);
  CHECK_THROWS_AS(eval_atom(t, 1), Error);
  CHECK_THROWS_AS(eval_atom(t, 5), Error);
}
