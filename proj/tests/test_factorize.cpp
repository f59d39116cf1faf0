#include <doctest.h>

#include <string>
#include <vector>

#include "opchain/classify.hpp"
#include "opchain/error.hpp"
#include "opchain/factorize.hpp"
#include "opchain/json_io.hpp"
#include "opchain/random_maps.hpp"

using namespace opchain;

namespace {

ResolvedParams default_params(const ChainModel& m) {
  return resolve_params(m, GeneratorParams{});
}

PiecewiseMap compose_factors(const FactorizationWitness& w) {
  PiecewiseMap acc = w.factors.front().map;
  for (size_t i = 1; i < w.factors.size(); ++i)
    acc = compose(acc, w.factors[i].map);
  return acc;
}

int generator_count(const FactorizationWitness& w) {
  int n = 0;
  for (const Factor& f : w.factors)
    if (f.tag == FactorTag::generator) ++n;
  return n;
}

void check_witness_sound(const FactorizationWitness& w, const PiecewiseMap& f) {
  CHECK(equal_pointwise(compose_factors(w), f, 24, 99));
  for (const Factor& fac : w.factors)
    if (fac.tag == FactorTag::order_preserving)
      CHECK(is_order_preserving(fac.map));
  VerifyReport rep = verify_witness(w, 400, 7);
  CHECK(rep.composition_matches);
  CHECK(rep.order_factors_order_preserving);
  CHECK(rep.generator_factors_match);
  CHECK(rep.generator_present_when_needed);
  CHECK(rep.ok());
}

}  // namespace

TEST_CASE("parameter resolution fills model-appropriate defaults") {
  ChainModel mm = ChainModel::min_max(0, 1);
  ResolvedParams p = default_params(mm);
  CHECK(p.c == Rational(1) / 3);
  CHECK(p.d == Rational(2) / 3);
  CHECK(p.c_prime == Rational(1) / 6);

  ChainModel mo = ChainModel::min_only(5);
  ResolvedParams q = default_params(mo);
  CHECK(q.c == 6);
  CHECK(q.d == 7);
  CHECK(q.c_prime == Rational(11) / 2);

  ChainModel xo = ChainModel::max_only(0);
  ResolvedParams r = default_params(xo);
  CHECK(r.c == -1);
  CHECK(r.d == -2);
  CHECK(r.c_prime == Rational(-1) / 2);

  // explicit values are respected and validated
  GeneratorParams user;
  user.c = Rational(1) / 2;
  user.d = Rational(1) / 4;  // d < c is out of order for min_max
  CHECK_THROWS_AS(resolve_params(mm, user), Error);
  user.d = Rational(3) / 4;
  CHECK(resolve_params(mm, user).c == Rational(1) / 2);

  GeneratorParams outside;
  outside.c = 7;  // not inside [0,1]
  CHECK_THROWS_AS(resolve_params(mm, outside), Error);
}

TEST_CASE("parameter resolution straddles a removed decomposition point") {
  // defaults c=1/3, d=2/3 do not straddle a cut at 1/6; re-resolution must
  ChainModel m = ChainModel::min_max(0, 1, {Rational(1) / 6});
  ResolvedParams p = default_params(m);
  CHECK(p.c < Rational(1) / 6);
  CHECK(p.d > Rational(1) / 6);
  CHECK(p.c > 0);
  CHECK(p.d < 1);
  // pinning c on the wrong side of the cut is rejected
  GeneratorParams user;
  user.c = Rational(1) / 4;
  user.d = Rational(1) / 2;
  CHECK_THROWS_AS(resolve_params(m, user), Error);
}

TEST_CASE("the bounded block swap hits its case table exactly") {
  ChainModel m = ChainModel::min_max(0, 1);
  PiecewiseMap g = make_generator(m, default_params(m));
  CHECK(g.evaluate(0) == Rational(2) / 3);
  CHECK(g.evaluate(Rational(1) / 3) == 0);
  CHECK(g.evaluate(1) == Rational(1) / 3);
  CHECK(g.evaluate(Rational(1) / 6) == Rational(5) / 6);
  CHECK(g.evaluate(Rational(1) / 2) == Rational(1) / 12);
  CHECK_FALSE(is_order_preserving(g));
  FindIdealResult dec = find_ideal(g);
  REQUIRE(dec.kind == FindIdealResult::Kind::proper);
  CHECK(dec.x1 == ConvexSet::closed_open(0, Rational(1) / 3));
}

TEST_CASE("the unbounded tail trade hits its case table exactly") {
  ChainModel mo = ChainModel::min_only(0);
  GeneratorParams user;
  user.c = 1;
  PiecewiseMap g = make_generator(mo, resolve_params(mo, user));
  // nu: (0,1) -> (1,inf) is 1 + x/(1-x); the map swaps [0,1) with [1,inf)
  CHECK(g.evaluate(0) == 1);
  CHECK(g.evaluate(1) == 0);
  CHECK(g.evaluate(Rational(1) / 2) == 2);
  CHECK(g.evaluate(2) == Rational(1) / 2);
  CHECK(g.evaluate(Rational(2) / 3) == 3);
  CHECK_FALSE(is_order_preserving(g));

  // the mirrored generator on a max-only chain behaves dually
  ChainModel xo = ChainModel::max_only(0);
  GeneratorParams muser;
  muser.c = -1;
  PiecewiseMap h = make_generator(xo, resolve_params(xo, muser));
  CHECK(h.evaluate(0) == -1);
  CHECK(h.evaluate(-1) == 0);
  CHECK(h.evaluate(Rational(-1) / 2) == -2);
  CHECK(h.evaluate(-2) == Rational(-1) / 2);
  CHECK_FALSE(is_order_preserving(h));
}

TEST_CASE("generator construction validates its boundaries") {
  ChainModel m = ChainModel::min_max(0, 1);
  CHECK_THROWS_AS(make_generator(m, ResolvedParams{Rational(2) / 3, Rational(1) / 3,
                                                   Rational(1) / 6, {}}),
                  Error);
  CHECK_THROWS_AS(make_generator(m, ResolvedParams{0, Rational(1) / 2, Rational(1) / 6, {}}),
                  Error);
  CHECK_THROWS_AS(make_generator(m, ResolvedParams{Rational(1) / 3, 1, Rational(1) / 6, {}}),
                  Error);
}

TEST_CASE("factorization: half-open bounded ideals need three factors") {
  ChainModel m = ChainModel::min_max(0, 1);
  PiecewiseMap g = make_generator(m, default_params(m));
  FactorizationWitness w = factor(g, GeneratorParams{});
  CHECK(w.path == "two_sided_halfopen");
  CHECK(w.factors.size() == 3);
  CHECK(generator_count(w) == 1);
  CHECK(w.factors[0].tag == FactorTag::order_preserving);
  CHECK(w.factors[1].tag == FactorTag::generator);
  CHECK(w.factors[2].tag == FactorTag::order_preserving);
  check_witness_sound(w, g);
}

TEST_CASE("factorization: random maps per bounded dispatch path") {
  ChainModel m = ChainModel::min_max(0, 1);
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    RandomMapOptions opts;
    opts.shape = IdealShape::half_open;
    PiecewiseMap f = random_op_map(m, seed, opts);
    FactorizationWitness w = factor(f, GeneratorParams{});
    CHECK(w.path == "two_sided_halfopen");
    CHECK(generator_count(w) == 1);
    check_witness_sound(w, f);

    opts.shape = IdealShape::closed;
    PiecewiseMap fc = random_op_map(m, seed, opts);
    FactorizationWitness wc = factor(fc, GeneratorParams{});
    CHECK(wc.path == "two_sided_closed");
    CHECK(wc.factors.size() == 5);
    CHECK(generator_count(wc) == 1);
    check_witness_sound(wc, fc);
  }
}

TEST_CASE("factorization: removed-point ideals route through the gap table") {
  ChainModel m = ChainModel::min_max(0, 1, {Rational(2) / 5});
  RandomMapOptions opts;
  opts.shape = IdealShape::gap;
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    PiecewiseMap f = random_op_map(m, seed, opts);
    FindIdealResult dec = find_ideal(f);
    REQUIRE(dec.kind == FindIdealResult::Kind::proper);
    CHECK(dec.x1.hi == ExtPoint::at(Rational(2) / 5));
    FactorizationWitness w = factor(f, GeneratorParams{});
    CHECK(w.path == "two_sided_gap");
    CHECK(w.factors.size() == 3);
    CHECK(generator_count(w) == 1);
    check_witness_sound(w, f);
  }
}

TEST_CASE("factorization: edge splits at the carrier ends") {
  ChainModel m = ChainModel::min_max(0, 1);

  // ideal [0,1): the complement is the single point {1}
  ConvexSet lo = ConvexSet::closed_open(0, 1);
  PiecewiseMap edge_hi(
      m, {Piece{lo, make_iso(lo, ConvexSet::closed_open(Rational(1) / 2, 1))},
          Piece{ConvexSet::singleton(1), MapAtom::constant(0)}});
  FactorizationWitness w1 = factor(edge_hi, GeneratorParams{});
  CHECK(w1.path == "two_sided_halfopen");
  check_witness_sound(w1, edge_hi);

  // ideal {0}: the low block is the single point at the bottom
  ConvexSet hi = ConvexSet::open_closed(0, 1);
  PiecewiseMap edge_lo(
      m, {Piece{ConvexSet::singleton(0), MapAtom::constant(1)},
          Piece{hi, make_iso(hi, ConvexSet::open_closed(0, Rational(1) / 2))}});
  FactorizationWitness w2 = factor(edge_lo, GeneratorParams{});
  CHECK(w2.path == "two_sided_closed");
  check_witness_sound(w2, edge_lo);
}

TEST_CASE("factorization: min-only chains, bounded and unbounded images") {
  ChainModel mo = ChainModel::min_only(0);
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    RandomMapOptions opts;
    opts.shape = (seed % 2) ? IdealShape::half_open : IdealShape::closed;

    PiecewiseMap f = random_op_map(mo, seed, opts);
    FactorizationWitness w = factor(f, GeneratorParams{});
    CHECK(w.path.rfind("one_sided_min_bounded_image/", 0) == 0);
    CHECK(generator_count(w) == 1);
    check_witness_sound(w, f);

    opts.unbounded_low_image = true;
    opts.shape = IdealShape::half_open;
    PiecewiseMap g = random_op_map(mo, seed, opts);
    FactorizationWitness wu = factor(g, GeneratorParams{});
    CHECK(wu.path.rfind("one_sided_min_unbounded_image/", 0) == 0);
    CHECK(generator_count(wu) == 2);
    check_witness_sound(wu, g);
  }
}

TEST_CASE("factorization: max-only chains go through the mirror") {
  ChainModel xo = ChainModel::max_only(3);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    RandomMapOptions opts;
    opts.shape = (seed % 2) ? IdealShape::half_open : IdealShape::closed;
    PiecewiseMap f = random_op_map(xo, seed, opts);
    FactorizationWitness w = factor(f, GeneratorParams{});
    CHECK(w.path.rfind("one_sided_max_mirror/", 0) == 0);
    check_witness_sound(w, f);
  }
}

TEST_CASE("factorization: the generators themselves round-trip") {
  ChainModel mo = ChainModel::min_only(0);
  PiecewiseMap gs = make_generator(mo, default_params(mo));
  FactorizationWitness w = factor(gs, GeneratorParams{});
  check_witness_sound(w, gs);

  ChainModel xo = ChainModel::max_only(0);
  PiecewiseMap gm = make_generator(xo, default_params(xo));
  FactorizationWitness wm = factor(gm, GeneratorParams{});
  check_witness_sound(wm, gm);
}

TEST_CASE("factorization: order-preserving and constant inputs are one factor") {
  ChainModel m = ChainModel::min_max(0, 1);
  FactorizationWitness w = factor(identity_map(m), GeneratorParams{});
  CHECK(w.path == "order_preserving");
  CHECK(w.factors.size() == 1);
  CHECK(generator_count(w) == 0);
  CHECK(verify_witness(w, 100, 3).ok());

  FactorizationWitness wc = factor(constant_map(m, Rational(1) / 3), GeneratorParams{});
  CHECK(wc.path == "constant");
  CHECK(wc.factors.size() == 1);
  CHECK(verify_witness(wc, 100, 3).ok());
}

TEST_CASE("factorization refuses impossible or unsupported inputs") {
  ChainModel m = ChainModel::min_max(0, 1);
  ConvexSet d1 = ConvexSet::closed_open(0, Rational(1) / 3);
  ConvexSet d2 = ConvexSet::closed_open(Rational(1) / 3, Rational(2) / 3);
  ConvexSet d3 = ConvexSet::closed(Rational(2) / 3, 1);
  PiecewiseMap not_op(
      m, {Piece{d1, make_iso(d1, ConvexSet::closed_open(Rational(2) / 3, 1))},
          Piece{d2, make_iso(d2, ConvexSet::closed_open(0, Rational(1) / 3))},
          Piece{d3, make_iso(d3, ConvexSet::closed(0, Rational(1) / 3))}});
  try {
    factor(not_op, GeneratorParams{});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::not_orientation_preserving);
  }

  // punctured carrier whose decomposition boundary is a genuine carrier point
  Rational q(1, 2);
  ChainModel mq = ChainModel::min_max(0, 1, {q});
  ConvexSet l = ConvexSet::closed_open(0, Rational(1) / 4);
  ConvexSet r1 = ConvexSet::closed_open(Rational(1) / 4, q);
  ConvexSet r2 = ConvexSet::open_closed(q, 1);
  PiecewiseMap off_cut(
      mq, {Piece{l, make_iso(l, ConvexSet::closed_open(Rational(3) / 4, 1))},
           Piece{r1, make_iso(r1, ConvexSet::closed_open(0, Rational(1) / 8))},
           Piece{r2, make_iso(r2, ConvexSet::open_closed(Rational(1) / 8, Rational(1) / 4))}});
  REQUIRE(find_ideal(off_cut).kind == FindIdealResult::Kind::proper);
  try {
    factor(off_cut, GeneratorParams{});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::unsupported);
  }
}

TEST_CASE("verification catches tampered witnesses") {
  ChainModel m = ChainModel::min_max(0, 1);
  PiecewiseMap g = make_generator(m, default_params(m));
  FactorizationWitness w = factor(g, GeneratorParams{});
  REQUIRE(verify_witness(w, 200, 5).ok());

  // retag the generator as order-preserving: two checks must trip
  FactorizationWitness retag = w;
  for (Factor& f : retag.factors)
    if (f.tag == FactorTag::generator) f.tag = FactorTag::order_preserving;
  VerifyReport r1 = verify_witness(retag, 200, 5);
  CHECK_FALSE(r1.ok());
  CHECK_FALSE(r1.order_factors_order_preserving);
  CHECK_FALSE(r1.generator_present_when_needed);

  // flatten a factor to a constant: the composition no longer matches
  FactorizationWitness clobber = w;
  clobber.factors[0].map = constant_map(m, Rational(1) / 2);
  VerifyReport r2 = verify_witness(clobber, 200, 5);
  CHECK_FALSE(r2.composition_matches);
  CHECK_FALSE(r2.ok());

  // perturb the recorded parameters: the generator factor stops matching
  FactorizationWitness repar = w;
  repar.params.c = Rational(1) / 4;
  repar.params.d = Rational(3) / 4;
  VerifyReport r3 = verify_witness(repar, 200, 5);
  CHECK_FALSE(r3.generator_factors_match);
  CHECK_FALSE(r3.ok());
}

TEST_CASE("dualization is an exact involution") {
  ChainModel mo = ChainModel::min_only(0);
  ChainModel xo = dualize(mo);
  CHECK(xo.kind == ChainModel::Kind::max_only);
  CHECK(xo.b == 0);
  CHECK(dualize(xo) == mo);

  ChainModel mq = ChainModel::min_max(-1, 2, {Rational(1) / 3});
  CHECK(dualize(mq).a == -2);
  CHECK(dualize(mq).b == 1);
  CHECK(dualize(mq).cuts == std::vector<Rational>{Rational(-1) / 3});
  CHECK(dualize(dualize(mq)) == mq);

  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    PiecewiseMap f = random_op_map(mo, seed, RandomMapOptions{});
    PiecewiseMap fd = dualize(f);
    CHECK(fd.model() == xo);
    CHECK(equal_structural(dualize(fd), f));
    // values mirror: fd(-x) == -f(x)
    DetRng rng(seed);
    for (int i = 0; i < 20; ++i) {
      Rational x = sample_in(mo.carrier(), mo, rng);
      CHECK(fd.evaluate(-x) == -f.evaluate(x));
    }
  }
}

TEST_CASE("the window embedding respects composition") {
  ChainModel mo = ChainModel::min_only(0);
  ChainModel window = ChainModel::min_max(0, 3);
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    RandomMapOptions opts;
    opts.shape = (seed % 3 == 0) ? IdealShape::whole
                 : (seed % 3 == 1) ? IdealShape::half_open
                                   : IdealShape::closed;
    PiecewiseMap alpha = random_op_map(window, seed, opts);
    PiecewiseMap beta = random_op_map(window, seed + 500, RandomMapOptions{});
    PiecewiseMap lhs = embed_window_map(compose(alpha, beta), mo);
    PiecewiseMap rhs = compose(embed_window_map(alpha, mo), embed_window_map(beta, mo));
    CHECK(equal_pointwise(lhs, rhs, 24, seed));
  }

  // model mismatch is rejected: the window must share the minimum
  PiecewiseMap alpha = identity_map(ChainModel::min_max(1, 2));
  CHECK_THROWS_AS(embed_window_map(alpha, mo), Error);
}

TEST_CASE("the embedded window swap expands into generator times cleanup") {
  ChainModel mo = ChainModel::min_only(0);
  ResolvedParams p = default_params(mo);  // c=1, d=2, window top 3
  WindowSwapExpansion ex = expand_window_swap(mo, p);
  CHECK_FALSE(is_order_preserving(ex.generator));
  CHECK(is_order_preserving(ex.cleanup));

  ChainModel window = ChainModel::min_max(0, 3);
  PiecewiseMap window_swap =
      make_generator(window, ResolvedParams{p.c, p.d, p.c_prime, {}});
  PiecewiseMap embedded = embed_window_map(window_swap, mo);
  CHECK(equal_pointwise(compose(ex.generator, ex.cleanup), embedded, 64, 13));
}

TEST_CASE("witness files reproduce byte-for-byte") {
  ChainModel m = ChainModel::min_max(0, 1);
  PiecewiseMap f = random_op_map(m, 321, RandomMapOptions{});
  FactorizationWitness w1 = factor(f, GeneratorParams{});
  FactorizationWitness w2 = factor(f, GeneratorParams{});
  CHECK(dump_json(to_json(w1)) == dump_json(to_json(w2)));
}
