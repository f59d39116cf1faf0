#pragma once

#include <cstdint>
#include <vector>

#include "opchain/order_iso.hpp"

namespace opchain {

struct Piece {
  ConvexSet domain;
  MapAtom atom;

  friend bool operator==(const Piece&, const Piece&) = default;
};

// A total transformation of the carrier given by finitely many convex pieces
// in increasing order, each with a constant or increasing fractional linear
// rule. Construction validates:
//   * the domains partition the carrier (adjacent pieces meet at a shared
//     finite value with exactly one closed side, or both open at a cut),
//   * each fractional rule's src equals its domain,
//   * every value lands in the carrier (constants are carrier points; a cut
//     inside a piece's image must be the image of a cut).
class PiecewiseMap {
public:
  // Empty placeholder; the only valid operations on it are assignment and
  // equality. Every real map comes from the validating constructor.
  PiecewiseMap() = default;

  PiecewiseMap(ChainModel model, std::vector<Piece> pieces);

  const ChainModel& model() const { return model_; }
  const std::vector<Piece>& pieces() const { return pieces_; }
  size_t size() const { return pieces_.size(); }

  const Piece& piece_at(const Rational& x) const;
  Rational evaluate(const Rational& x) const;

  friend bool operator==(const PiecewiseMap&, const PiecewiseMap&) = default;

private:
  ChainModel model_;
  std::vector<Piece> pieces_;
};

PiecewiseMap identity_map(const ChainModel& model);
PiecewiseMap constant_map(const ChainModel& model, const Rational& v);

// Apply f, then g. Pieces of the result refine f's pieces against the
// g-pieces their images meet. Models must be equal.
PiecewiseMap compose(const PiecewiseMap& f, const PiecewiseMap& g);

// Canonical form: singleton fractional pieces become constants; adjacent
// pieces with the same rule (or matching constant value) are merged.
// Idempotent; pointwise equal to the input.
PiecewiseMap normalize(const PiecewiseMap& f);

// Per-piece images, in piece order.
std::vector<ConvexSet> image_components(const PiecewiseMap& f);

struct ImageHull {
  ConvexSet hull;  // endpoint flags record attainment
  bool min_attained = false;
  bool max_attained = false;
};

ImageHull image_hull(const PiecewiseMap& f);
ImageHull hull_of_components(const std::vector<ConvexSet>& components);

// Finite piece-boundary values of f that are carrier points, sorted, unique.
std::vector<Rational> breakpoints(const PiecewiseMap& f);

// Deterministic sampling check: agree on all breakpoints of both maps plus
// `samples_per_gap` seeded pseudo-random carrier points inside every gap of
// the refined breakpoint partition.
bool equal_pointwise(const PiecewiseMap& f, const PiecewiseMap& g, int samples_per_gap,
                     uint64_t seed);

// normalize-then-compare. Sound and complete for this representation class.
bool equal_structural(const PiecewiseMap& f, const PiecewiseMap& g);

// Deterministic pseudo-random helpers (raw engine output, no std
// distributions, so byte-stable across platforms).
class DetRng {
public:
  explicit DetRng(uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}
  uint64_t next();
  uint64_t below(uint64_t n);  // in [0, n)

private:
  uint64_t state_;
};

// A carrier point strictly between lo and hi (extended endpoints allowed,
// lo < hi required); avoids cuts.
Rational sample_between(const ExtPoint& lo, const ExtPoint& hi, const ChainModel& model,
                        DetRng& rng);
// A carrier point inside a nonempty convex set.
Rational sample_in(const ConvexSet& s, const ChainModel& model, DetRng& rng);

}  // namespace opchain
