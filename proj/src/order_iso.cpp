#include "opchain/order_iso.hpp"

#include <array>

namespace opchain {

namespace {

// Scale (p,q,r,s) to coprime integers with the first nonzero entry positive.
void canonicalize(Rational& p, Rational& q, Rational& r, Rational& s) {
  std::array<Rational*, 4> cs{&p, &q, &r, &s};
  BigInt mult{1};
  for (auto* c : cs) mult = lcm(mult, denominator(*c));
  BigInt g{0};
  for (auto* c : cs) {
    *c *= mult;
    g = gcd(g, numerator(*c));
  }
  if (g == 0) return;
  for (auto* c : cs)
    if (*c != 0) {
      if (*c < 0) g = -g;
      break;
    }
  for (auto* c : cs) *c /= Rational(g);
}

Rational det_of(const MapAtom& a) { return a.p * a.s - a.q * a.r; }

bool has_pole(const MapAtom& a) { return a.r != 0; }
Rational pole_of(const MapAtom& a) { return -a.s / a.r; }

}  // namespace

MapAtom MapAtom::constant(Rational v) {
  MapAtom a;
  a.kind = Kind::constant;
  a.value = std::move(v);
  return a;
}

ExtPoint eval_atom_ext(const MapAtom& a, const ExtPoint& x) {
  require(!a.is_constant(), Errc::precondition, "extended eval needs a fractional linear rule");
  if (!x.is_finite()) {
    if (a.r != 0) return ExtPoint::at(a.p / a.r);  // horizontal asymptote
    // Affine with positive slope: preserves the infinity.
    return x;
  }
  Rational den = a.r * x.value + a.s;
  if (den == 0) {
    // Increasing branch: approaching the pole from above gives -inf, from
    // below gives +inf. The domain sits on one side of the pole.
    if (a.src.lo >= x) return ExtPoint::neg_inf();
    return ExtPoint::pos_inf();
  }
  return ExtPoint::at((a.p * x.value + a.q) / den);
}

ConvexSet image_of(const MapAtom& a, const ConvexSet& sub) {
  if (sub.is_empty()) return ConvexSet::empty();
  if (a.is_constant()) return ConvexSet::singleton(a.value);
  require(a.src.contains_set(sub), Errc::domain_mismatch, "image_of: subset outside src");
  return ConvexSet::make(eval_atom_ext(a, sub.lo), sub.lo_closed, eval_atom_ext(a, sub.hi),
                         sub.hi_closed);
}

MapAtom MapAtom::frac(Rational p, Rational q, Rational r, Rational s, ConvexSet src) {
  canonicalize(p, q, r, s);
  MapAtom a;
  a.kind = Kind::frac_linear;
  a.p = std::move(p);
  a.q = std::move(q);
  a.r = std::move(r);
  a.s = std::move(s);
  require(det_of(a) > 0, Errc::bad_params, "fractional linear rule must be increasing (det > 0)");
  require(!src.is_empty(), Errc::empty_set, "fractional linear rule needs a nonempty domain");
  if (has_pole(a))
    require(!src.contains(pole_of(a)), Errc::bad_params, "pole inside the domain");
  a.src = src;
  a.dst = image_of(a, src);
  return a;
}

MapAtom MapAtom::identity_on(ConvexSet src) {
  return frac(Rational(1), Rational(0), Rational(0), Rational(1), std::move(src));
}

bool MapAtom::is_identity() const {
  return kind == Kind::frac_linear && p == 1 && q == 0 && r == 0 && s == 1;
}

std::string atom_to_string(const MapAtom& a) {
  if (a.is_constant()) return "const " + rat_to_string(a.value);
  return "(" + rat_to_string(a.p) + "x + " + rat_to_string(a.q) + ")/(" + rat_to_string(a.r) +
         "x + " + rat_to_string(a.s) + ") : " + set_to_string(a.src) + " -> " +
         set_to_string(a.dst);
}

namespace {

bool attained_lo(const ConvexSet& s) { return s.lo.is_finite() && s.lo_closed; }
bool attained_hi(const ConvexSet& s) { return s.hi.is_finite() && s.hi_closed; }

// Affine map src -> dst for bounded nondegenerate intervals.
MapAtom affine_iso(const ConvexSet& src, const ConvexSet& dst) {
  const Rational &u1 = src.lo.value, &v1 = src.hi.value;
  const Rational &u2 = dst.lo.value, &v2 = dst.hi.value;
  Rational slope = (v2 - u2) / (v1 - u1);
  return MapAtom::frac(slope, u2 - slope * u1, Rational(0), Rational(1), src);
}

// Increasing bijection of a bounded interval onto one unbounded above:
// x -> lo_dst + (x - lo_src)/(hi_src - x), pole at the open upper end of src.
MapAtom bounded_to_upper_unbounded(const ConvexSet& src, const ConvexSet& dst) {
  const Rational &u1 = src.lo.value, &v1 = src.hi.value, &u2 = dst.lo.value;
  // lo_dst + (x-u1)/(v1-x) = ((1-u2)... expanded: ((1+... ) keep symbolic:
  // numerator: u2*(v1 - x) + (x - u1) = (1-u2)x + u2*v1 - u1
  // denominator: v1 - x
  return MapAtom::frac(Rational(1) - u2, u2 * v1 - u1, Rational(-1), v1, src);
}

// Increasing bijection of a bounded interval onto one unbounded below:
// x -> hi_dst - (hi_src - x)/(x - lo_src), pole at the open lower end of src.
MapAtom bounded_to_lower_unbounded(const ConvexSet& src, const ConvexSet& dst) {
  const Rational &u1 = src.lo.value, &v1 = src.hi.value, &v2 = dst.hi.value;
  // numerator: v2*(x - u1) - (v1 - x) = (v2+1)x - v2*u1 - v1
  return MapAtom::frac(v2 + 1, -v2 * u1 - v1, Rational(1), -u1, src);
}

// Increasing bijection (-inf, v1) -> (u2, +inf): x -> u2 + 1/(v1 - x).
MapAtom lower_to_upper_unbounded(const ConvexSet& src, const ConvexSet& dst) {
  const Rational &v1 = src.hi.value, &u2 = dst.lo.value;
  return MapAtom::frac(-u2, u2 * v1 + 1, Rational(-1), v1, src);
}

}  // namespace

MapAtom make_iso(const ConvexSet& src, const ConvexSet& dst) {
  require(!src.is_empty() && !dst.is_empty(), Errc::empty_set, "make_iso on empty set");
  require(attained_lo(src) == attained_lo(dst) && attained_hi(src) == attained_hi(dst),
          Errc::boundary_mismatch,
          "make_iso boundary attainment mismatch: " + set_to_string(src) + " vs " +
              set_to_string(dst));
  require(src.is_singleton() == dst.is_singleton(), Errc::boundary_mismatch,
          "make_iso cannot match a singleton with a nondegenerate interval");
  if (src.is_singleton()) {  // translation between one-point sets
    return MapAtom::frac(Rational(1), dst.lo.value - src.lo.value, Rational(0), Rational(1), src);
  }

  const bool src_lo_inf = src.lo.is_neg_inf(), src_hi_inf = src.hi.is_pos_inf();
  const bool dst_lo_inf = dst.lo.is_neg_inf(), dst_hi_inf = dst.hi.is_pos_inf();

  if (!src_lo_inf && !src_hi_inf && !dst_lo_inf && !dst_hi_inf) return affine_iso(src, dst);
  if (src_lo_inf && src_hi_inf && dst_lo_inf && dst_hi_inf)
    return MapAtom::identity_on(src);

  if (!src_lo_inf && !src_hi_inf && !dst_lo_inf && dst_hi_inf)
    return bounded_to_upper_unbounded(src, dst);
  if (!src_lo_inf && src_hi_inf && !dst_lo_inf && !dst_hi_inf)
    return invert_atom(bounded_to_upper_unbounded(dst, src));
  if (!src_lo_inf && src_hi_inf && !dst_lo_inf && dst_hi_inf)  // translation
    return MapAtom::frac(Rational(1), dst.lo.value - src.lo.value, Rational(0), Rational(1), src);

  if (!src_lo_inf && !src_hi_inf && dst_lo_inf && !dst_hi_inf)
    return bounded_to_lower_unbounded(src, dst);
  if (src_lo_inf && !src_hi_inf && !dst_lo_inf && !dst_hi_inf)
    return invert_atom(bounded_to_lower_unbounded(dst, src));
  if (src_lo_inf && !src_hi_inf && dst_lo_inf && !dst_hi_inf)  // translation
    return MapAtom::frac(Rational(1), dst.hi.value - src.hi.value, Rational(0), Rational(1), src);

  if (src_lo_inf && !src_hi_inf && !dst_lo_inf && dst_hi_inf)
    return lower_to_upper_unbounded(src, dst);
  if (!src_lo_inf && src_hi_inf && dst_lo_inf && !dst_hi_inf)
    return invert_atom(lower_to_upper_unbounded(dst, src));

  fail(Errc::unsupported, "make_iso: unsupported boundary pattern " + set_to_string(src) +
                              " -> " + set_to_string(dst));
}

MapAtom invert_atom(const MapAtom& a) {
  require(!a.is_constant(), Errc::not_invertible, "constant rules are not invertible");
  MapAtom inv = MapAtom::frac(a.s, -a.q, -a.r, a.p, a.dst);
  // The exact image of dst under the inverse is src by construction.
  inv.dst = a.src;
  return inv;
}

MapAtom compose_atoms(const MapAtom& f, const MapAtom& g) {
  if (g.is_constant()) return g;
  if (f.is_constant()) {
    require(g.src.contains(f.value), Errc::domain_mismatch,
            "compose_atoms: constant value outside the next domain");
    return MapAtom::constant(eval_atom(g, f.value));
  }
  require(g.src.contains_set(f.dst), Errc::domain_mismatch,
          "compose_atoms: image " + set_to_string(f.dst) + " not within next domain " +
              set_to_string(g.src));
  MapAtom out = MapAtom::frac(g.p * f.p + g.q * f.r, g.p * f.q + g.q * f.s,
                              g.r * f.p + g.s * f.r, g.r * f.q + g.s * f.s, f.src);
  return out;
}

Rational eval_atom(const MapAtom& a, const Rational& x) {
  if (a.is_constant()) return a.value;
  // Message strings are built only on failure: this is the evaluation hot path.
  if (!a.src.contains(x))
    fail(Errc::out_of_domain,
         "eval_atom: " + rat_to_string(x) + " outside " + set_to_string(a.src));
  // Canonical coefficients are coprime integers, so the value assembles from
  // integer cross-multiplication with a single reduction at the end.
  if (denominator(a.p) == 1 && denominator(a.q) == 1 && denominator(a.r) == 1 &&
      denominator(a.s) == 1) {
    const BigInt xn = numerator(x), xd = denominator(x);
    Rational num(numerator(a.p) * xn + numerator(a.q) * xd);
    Rational den(numerator(a.r) * xn + numerator(a.s) * xd);
    return num / den;
  }
  return (a.p * x + a.q) / (a.r * x + a.s);
}

ConvexSet preimage_of(const MapAtom& a, const ConvexSet& sub) {
  require(!a.is_constant(), Errc::precondition, "preimage_of needs a fractional linear rule");
  ConvexSet clipped = intersect(sub, a.dst);
  if (clipped.is_empty()) return ConvexSet::empty();
  return image_of(invert_atom(a), clipped);
}

}  // namespace opchain
