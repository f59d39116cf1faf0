#pragma once

#include "opchain/chain.hpp"

namespace opchain {

// One rule of a piecewise map: either a constant, or an increasing fractional
// linear map x -> (p*x + q)/(r*x + s) with det = p*s - q*r > 0, acting as an
// order isomorphism from src onto dst. Coefficients are kept in a canonical
// integer form (coprime, first nonzero positive) so structural equality of
// rules is plain field equality.
struct MapAtom {
  enum class Kind { constant, frac_linear };

  Kind kind = Kind::constant;
  Rational value;        // constant only
  Rational p, q, r, s;   // frac_linear only
  ConvexSet src, dst;    // frac_linear only

  static MapAtom constant(Rational v);
  // Computes dst as the exact image of src. Requires det > 0 and the pole
  // (if any) outside src.
  static MapAtom frac(Rational p, Rational q, Rational r, Rational s, ConvexSet src);
  static MapAtom identity_on(ConvexSet src);

  bool is_constant() const { return kind == Kind::constant; }
  bool is_identity() const;

  friend bool operator==(const MapAtom&, const MapAtom&) = default;
};

std::string atom_to_string(const MapAtom& a);

// Canonical order isomorphism src -> dst. Boundary attainment must match on
// both ends (closed-with-closed, unattained-with-unattained). Deterministic:
// equal inputs yield structurally identical atoms.
//   bounded -> bounded            affine
//   bounded -> unbounded above    x -> lo_dst + (x - lo_src)/(hi_src - x)
//   unbounded above -> bounded    inverse of the previous rule
//   unbounded -> unbounded (same side)  translation
//   bounded -> unbounded below / mixed-side cases: mirrored analogues
MapAtom make_iso(const ConvexSet& src, const ConvexSet& dst);

// Inverse isomorphism dst -> src; coefficients (s, -q, -r, p). Constants are
// not invertible.
MapAtom invert_atom(const MapAtom& a);

// Left-to-right composition: apply f, then g. Requires dst(f) within src(g)
// when both are fractional linear.
MapAtom compose_atoms(const MapAtom& f, const MapAtom& g);

// Value at a rational point of src.
Rational eval_atom(const MapAtom& a, const Rational& x);

// Evaluation extended to endpoints: limits at open/infinite endpoints,
// including the pole (which maps to -inf or +inf depending on the side the
// domain lies on).
ExtPoint eval_atom_ext(const MapAtom& a, const ExtPoint& x);

// Exact image of a convex subset of src.
ConvexSet image_of(const MapAtom& a, const ConvexSet& sub);

// Exact preimage within src of a convex subset (fractional linear only).
ConvexSet preimage_of(const MapAtom& a, const ConvexSet& sub);

}  // namespace opchain
