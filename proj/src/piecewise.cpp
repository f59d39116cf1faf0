#include "opchain/piecewise.hpp"

#include <algorithm>
#include <optional>

namespace opchain {

namespace {

// Do two sets meeting at left.hi == right.lo form a convex union in the
// carrier? Yes when exactly one side owns the shared point, or when both are
// open and the shared value falls outside the carrier (a cut).
bool touch_compatible(const ConvexSet& left, const ConvexSet& right, const ChainModel& model) {
  if (!left.hi.is_finite() || left.hi != right.lo) return false;
  if (left.hi_closed && right.lo_closed) return false;
  if (!left.hi_closed && !right.lo_closed) return model.is_cut(left.hi.value);
  return true;
}

void check_piece_valid(const ChainModel& model, const Piece& piece, size_t index) {
  const ConvexSet& d = piece.domain;
  auto where = [&] { return " (piece " + std::to_string(index) + " on " + set_to_string(d) + ")"; };
  require(model.carrier_nonempty(d), Errc::precondition, "empty piece domain" + where());
  require(model.carrier().contains_set(d), Errc::precondition,
          "piece domain outside the carrier" + where());
  if (d.lo_closed) require(!model.is_cut(d.lo.value), Errc::precondition,
                           "closed domain endpoint at an excluded point" + where());
  if (d.hi_closed) require(!model.is_cut(d.hi.value), Errc::precondition,
                           "closed domain endpoint at an excluded point" + where());

  if (piece.atom.is_constant()) {
    require(model.in_carrier(piece.atom.value), Errc::precondition,
            "constant value outside the carrier" + where());
    return;
  }
  require(piece.atom.src == d, Errc::domain_mismatch, "rule src differs from domain" + where());
  require(model.carrier().contains_set(piece.atom.dst), Errc::precondition,
          "image " + set_to_string(piece.atom.dst) + " leaves the carrier" + where());
  // A cut inside the image must be hit only from outside the carrier.
  for (const Rational& z : model.cuts) {
    if (!piece.atom.dst.contains(z)) continue;
    Rational w = eval_atom(invert_atom(piece.atom), z);
    require(!d.contains(w) || model.is_cut(w), Errc::precondition,
            "carrier point " + rat_to_string(w) + " would map onto excluded point " +
                rat_to_string(z) + where());
  }
  if (piece.atom.dst.lo_closed)
    require(!model.is_cut(piece.atom.dst.lo.value), Errc::precondition,
            "attained image endpoint at an excluded point" + where());
  if (piece.atom.dst.hi_closed)
    require(!model.is_cut(piece.atom.dst.hi.value), Errc::precondition,
            "attained image endpoint at an excluded point" + where());
}

}  // namespace

PiecewiseMap::PiecewiseMap(ChainModel model, std::vector<Piece> pieces)
    : model_(std::move(model)), pieces_(std::move(pieces)) {
  require(!pieces_.empty(), Errc::precondition, "a map needs at least one piece");
  for (size_t i = 0; i < pieces_.size(); ++i) check_piece_valid(model_, pieces_[i], i);

  const ConvexSet& first = pieces_.front().domain;
  require(first.lo == model_.bottom() && first.lo_closed == model_.has_min(),
          Errc::precondition, "first piece must start at the carrier bottom, got " +
                                  set_to_string(first));
  const ConvexSet& last = pieces_.back().domain;
  require(last.hi == model_.top() && last.hi_closed == model_.has_max(), Errc::precondition,
          "last piece must end at the carrier top, got " + set_to_string(last));
  for (size_t i = 0; i + 1 < pieces_.size(); ++i) {
    require(touch_compatible(pieces_[i].domain, pieces_[i + 1].domain, model_),
            Errc::precondition,
            "pieces " + std::to_string(i) + " and " + std::to_string(i + 1) +
                " do not tile the carrier: " + set_to_string(pieces_[i].domain) + " then " +
                set_to_string(pieces_[i + 1].domain));
  }
}

const Piece& PiecewiseMap::piece_at(const Rational& x) const {
  // Message strings are built only on failure: this is the evaluation hot path.
  if (!model_.in_carrier(x))
    fail(Errc::out_of_domain,
         rat_to_string(x) + " is not a carrier point of " + model_to_string(model_));
  // Last piece whose lower edge starts at or before x.
  size_t lo = 0, hi = pieces_.size();
  while (hi - lo > 1) {
    size_t mid = lo + (hi - lo) / 2;
    const ConvexSet& d = pieces_[mid].domain;
    bool starts_at_or_before;
    if (d.lo.is_finite()) {
      int c = d.lo.value.compare(x);
      starts_at_or_before = c < 0 || (c == 0 && d.lo_closed);
    } else {
      starts_at_or_before = d.lo.is_neg_inf();
    }
    if (starts_at_or_before)
      lo = mid;
    else
      hi = mid;
  }
  if (!pieces_[lo].domain.contains(x))
    fail(Errc::out_of_domain, "no piece covers " + rat_to_string(x));
  return pieces_[lo];
}

Rational PiecewiseMap::evaluate(const Rational& x) const {
  const Piece& piece = piece_at(x);
  if (piece.atom.is_constant()) return piece.atom.value;
  return eval_atom(piece.atom, x);
}

PiecewiseMap identity_map(const ChainModel& model) {
  return PiecewiseMap(model, {Piece{model.carrier(), MapAtom::identity_on(model.carrier())}});
}

PiecewiseMap constant_map(const ChainModel& model, const Rational& v) {
  return PiecewiseMap(model, {Piece{model.carrier(), MapAtom::constant(v)}});
}

PiecewiseMap compose(const PiecewiseMap& f, const PiecewiseMap& g) {
  require(f.model() == g.model(), Errc::model_mismatch, "compose needs equal models");
  std::vector<Piece> out;
  for (const Piece& fp : f.pieces()) {
    if (fp.atom.is_constant()) {
      out.push_back({fp.domain, MapAtom::constant(g.evaluate(fp.atom.value))});
      continue;
    }
    for (const Piece& gp : g.pieces()) {
      ConvexSet overlap = intersect(fp.atom.dst, gp.domain);
      if (overlap.is_empty()) continue;
      ConvexSet part = preimage_of(fp.atom, overlap);
      if (!f.model().carrier_nonempty(part)) continue;
      MapAtom restricted = MapAtom::frac(fp.atom.p, fp.atom.q, fp.atom.r, fp.atom.s, part);
      out.push_back({part, compose_atoms(restricted, gp.atom)});
    }
  }
  return PiecewiseMap(f.model(), std::move(out));
}

namespace {

bool same_frac_rule(const MapAtom& a, const MapAtom& b) {
  return !a.is_constant() && !b.is_constant() && a.p == b.p && a.q == b.q && a.r == b.r &&
         a.s == b.s;
}

ConvexSet join_domains(const ConvexSet& left, const ConvexSet& right) {
  return ConvexSet::make(left.lo, left.lo_closed, right.hi, right.hi_closed);
}

// Formula value of a fractional-linear rule at x, ignoring the recorded
// domain; empty at the pole. Used to test extension by continuity onto an
// adjacent singleton.
std::optional<Rational> frac_value_at(const MapAtom& atom, const Rational& x) {
  Rational den = atom.r * x + atom.s;
  if (den == 0) return std::nullopt;
  return (atom.p * x + atom.q) / den;
}

}  // namespace

PiecewiseMap normalize(const PiecewiseMap& f) {
  const ChainModel& model = f.model();
  std::vector<Piece> ps;
  ps.reserve(f.size());
  for (const Piece& piece : f.pieces()) {
    if (!piece.atom.is_constant() && piece.domain.is_singleton())
      ps.push_back({piece.domain, MapAtom::constant(eval_atom(piece.atom, piece.domain.lo.value))});
    else
      ps.push_back(piece);
  }

  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<Piece> merged;
    merged.reserve(ps.size());
    for (Piece& piece : ps) {
      if (merged.empty() || !touch_compatible(merged.back().domain, piece.domain, model)) {
        merged.push_back(std::move(piece));
        continue;
      }
      Piece& prev = merged.back();
      ConvexSet joined = join_domains(prev.domain, piece.domain);
      if (same_frac_rule(prev.atom, piece.atom)) {
        prev = {joined, MapAtom::frac(piece.atom.p, piece.atom.q, piece.atom.r, piece.atom.s,
                                      joined)};
        changed = true;
      } else if (prev.atom.is_constant() && piece.atom.is_constant() &&
                 prev.atom.value == piece.atom.value) {
        prev = {joined, prev.atom};
        changed = true;
      } else if (prev.atom.is_constant() && prev.domain.is_singleton() &&
                 !piece.atom.is_constant() &&
                 frac_value_at(piece.atom, prev.domain.lo.value) ==
                     std::optional<Rational>(prev.atom.value)) {
        prev = {joined, MapAtom::frac(piece.atom.p, piece.atom.q, piece.atom.r, piece.atom.s,
                                      joined)};
        changed = true;
      } else if (piece.atom.is_constant() && piece.domain.is_singleton() &&
                 !prev.atom.is_constant() &&
                 frac_value_at(prev.atom, piece.domain.lo.value) ==
                     std::optional<Rational>(piece.atom.value)) {
        prev = {joined,
                MapAtom::frac(prev.atom.p, prev.atom.q, prev.atom.r, prev.atom.s, joined)};
        changed = true;
      } else {
        merged.push_back(std::move(piece));
      }
    }
    ps = std::move(merged);
  }
  return PiecewiseMap(model, std::move(ps));
}

std::vector<ConvexSet> image_components(const PiecewiseMap& f) {
  std::vector<ConvexSet> out;
  out.reserve(f.size());
  for (const Piece& piece : f.pieces())
    out.push_back(piece.atom.is_constant() ? ConvexSet::singleton(piece.atom.value)
                                           : piece.atom.dst);
  return out;
}

ImageHull hull_of_components(const std::vector<ConvexSet>& components) {
  require(!components.empty(), Errc::empty_set, "hull of no components");
  ImageHull h;
  h.hull = components.front();
  for (size_t i = 1; i < components.size(); ++i) {
    const ConvexSet& c = components[i];
    if (c.lo < h.hull.lo)
      h.hull.lo = c.lo, h.hull.lo_closed = c.lo_closed;
    else if (c.lo == h.hull.lo)
      h.hull.lo_closed = h.hull.lo_closed || c.lo_closed;
    if (c.hi > h.hull.hi)
      h.hull.hi = c.hi, h.hull.hi_closed = c.hi_closed;
    else if (c.hi == h.hull.hi)
      h.hull.hi_closed = h.hull.hi_closed || c.hi_closed;
  }
  h.min_attained = h.hull.lo.is_finite() && h.hull.lo_closed;
  h.max_attained = h.hull.hi.is_finite() && h.hull.hi_closed;
  return h;
}

ImageHull image_hull(const PiecewiseMap& f) { return hull_of_components(image_components(f)); }

std::vector<Rational> breakpoints(const PiecewiseMap& f) {
  std::vector<Rational> out;
  for (const Piece& piece : f.pieces()) {
    if (piece.domain.lo.is_finite() && f.model().in_carrier(piece.domain.lo.value))
      out.push_back(piece.domain.lo.value);
    if (piece.domain.hi.is_finite() && f.model().in_carrier(piece.domain.hi.value))
      out.push_back(piece.domain.hi.value);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

uint64_t DetRng::next() {  // splitmix64
  uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

uint64_t DetRng::below(uint64_t n) { return n ? next() % n : 0; }

Rational sample_between(const ExtPoint& lo, const ExtPoint& hi, const ChainModel& model,
                        DetRng& rng) {
  if (!(lo < hi)) fail(Errc::precondition, "sample_between needs lo < hi");
  for (int attempt = 0; attempt < 64; ++attempt) {
    Rational x;
    if (lo.is_finite() && hi.is_finite()) {
      uint64_t den = 2 + rng.below(96);
      uint64_t num = 1 + rng.below(den - 1);
      x = lo.value + (hi.value - lo.value) * Rational(num, den);
    } else if (lo.is_finite()) {
      x = lo.value + Rational(1 + rng.below(8)) + Rational(1 + rng.below(7), 8);
    } else if (hi.is_finite()) {
      x = hi.value - Rational(1 + rng.below(8)) - Rational(1 + rng.below(7), 8);
    } else {
      x = Rational(int64_t(rng.below(33)) - 16) + Rational(1 + rng.below(7), 8);
    }
    if (model.in_carrier(x)) return x;
  }
  fail(Errc::precondition, "sample_between could not avoid the excluded points");
}

Rational sample_in(const ConvexSet& s, const ChainModel& model, DetRng& rng) {
  if (!model.carrier_nonempty(s)) fail(Errc::empty_set, "sample_in on an empty carrier set");
  if (s.is_singleton()) return s.lo.value;
  // Occasionally return an attained endpoint so boundary behavior is probed.
  if (s.lo_closed && rng.below(8) == 0) return s.lo.value;
  if (s.hi_closed && rng.below(8) == 0) return s.hi.value;
  return sample_between(s.lo, s.hi, model, rng);
}

bool equal_pointwise(const PiecewiseMap& f, const PiecewiseMap& g, int samples_per_gap,
                     uint64_t seed) {
  require(f.model() == g.model(), Errc::model_mismatch, "equal_pointwise needs equal models");
  const ChainModel& model = f.model();
  std::vector<Rational> pts = breakpoints(f);
  for (const Rational& x : breakpoints(g)) pts.push_back(x);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  for (const Rational& x : pts)
    if (f.evaluate(x) != g.evaluate(x)) return false;

  DetRng rng(seed);
  auto probe_gap = [&](const ExtPoint& lo, const ExtPoint& hi) {
    if (!(lo < hi)) return true;
    for (int i = 0; i < samples_per_gap; ++i) {
      Rational x = sample_between(lo, hi, model, rng);
      if (f.evaluate(x) != g.evaluate(x)) return false;
    }
    return true;
  };

  ExtPoint prev = model.bottom();
  for (const Rational& x : pts) {
    if (!probe_gap(prev, ExtPoint::at(x))) return false;
    prev = ExtPoint::at(x);
  }
  return probe_gap(prev, model.top());
}

bool equal_structural(const PiecewiseMap& f, const PiecewiseMap& g) {
  return normalize(f) == normalize(g);
}

}  // namespace opchain
