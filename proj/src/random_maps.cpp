#include "opchain/random_maps.hpp"

#include <algorithm>
#include <set>
#include <vector>

#include "opchain/classify.hpp"
#include "opchain/error.hpp"

namespace opchain {

namespace {

// Distinct carrier points strictly between lo and hi, ascending.
std::vector<Rational> distinct_between(const ExtPoint& lo, const ExtPoint& hi,
                                       const ChainModel& model, DetRng& rng,
                                       std::size_t count) {
  std::set<Rational> got;
  int guard = 0;
  while (got.size() < count) {
    require(++guard < 4096, Errc::precondition,
            "could not sample enough distinct points");
    got.insert(sample_between(lo, hi, model, rng));
  }
  return {got.begin(), got.end()};
}

// Tile `dom` into `k` consecutive sub-domains, interior boundaries
// left-closed.
std::vector<ConvexSet> tile(const ConvexSet& dom, const ChainModel& model,
                            DetRng& rng, std::size_t k) {
  std::vector<Rational> bps = distinct_between(dom.lo, dom.hi, model, rng, k - 1);
  std::vector<ConvexSet> out;
  for (std::size_t i = 0; i < k; ++i) {
    ExtPoint lo = i == 0 ? dom.lo : ExtPoint::at(bps[i - 1]);
    bool lo_closed = i == 0 ? dom.lo_closed : true;
    ExtPoint hi = i + 1 == k ? dom.hi : ExtPoint::at(bps[i]);
    bool hi_closed = i + 1 == k ? dom.hi_closed : false;
    out.push_back(ConvexSet::make(lo, lo_closed, hi, hi_closed));
  }
  return out;
}

// Order-preserving pieces tiling `dom` with values inside (vlo, vhi); when
// `unbounded_last` is set the final piece maps onto an upward ray instead.
std::vector<Piece> build_side(const ConvexSet& dom, const Rational& vlo,
                              const Rational& vhi, const ChainModel& model,
                              DetRng& rng, bool unbounded_last) {
  std::vector<Piece> out;
  if (dom.is_singleton()) {
    Rational v =
        sample_between(ExtPoint::at(vlo), ExtPoint::at(vhi), model, rng);
    out.push_back({dom, MapAtom::constant(v)});
    return out;
  }
  std::size_t k = 1 + rng.below(3);
  std::vector<ConvexSet> doms = tile(dom, model, rng, k);
  std::vector<Rational> ladder = distinct_between(
      ExtPoint::at(vlo), ExtPoint::at(vhi), model, rng, 2 * k);
  for (std::size_t i = 0; i < k; ++i) {
    const ConvexSet& d = doms[i];
    const Rational &u = ladder[2 * i], &u2 = ladder[2 * i + 1];
    bool bounded = d.lo.is_finite() && d.hi.is_finite();
    if (unbounded_last && i + 1 == k) {
      ConvexSet ray =
          ConvexSet::make(ExtPoint::at(u), d.lo_closed, ExtPoint::pos_inf(),
                          false);
      out.push_back({d, make_iso(d, ray)});
      continue;
    }
    std::uint64_t t = rng.below(3);
    if (t == 0) {
      out.push_back({d, MapAtom::constant(u)});
      continue;
    }
    ConvexSet target = ConvexSet::make(ExtPoint::at(u), d.lo_closed,
                                       ExtPoint::at(u2), d.hi_closed);
    if (t == 1 || !bounded || (d.lo_closed && d.hi_closed)) {
      out.push_back({d, make_iso(d, target)});
      continue;
    }
    // Genuinely fractional rule on a bounded piece: route through a ray on
    // whichever side of the piece is unattained.
    ConvexSet mid = d.hi_closed
                        ? ConvexSet::make(ExtPoint::neg_inf(), false,
                                          ExtPoint::at(u2), true)
                        : ConvexSet::make(ExtPoint::at(u), d.lo_closed,
                                          ExtPoint::pos_inf(), false);
    MapAtom up = make_iso(d, mid);
    MapAtom down = make_iso(mid, target);
    out.push_back({d, compose_atoms(up, down)});
  }
  return out;
}

struct ValueZones {
  Rational z1, z2, z3, z4;  // z1 < z2 < z3 < z4, all carrier
};

ValueZones pick_zones(const ChainModel& model, DetRng& rng,
                      const std::optional<Rational>& cap_hi) {
  ExtPoint lo, hi;
  switch (model.kind) {
    case ChainModel::Kind::min_max:
      lo = ExtPoint::at(model.a);
      hi = ExtPoint::at(cap_hi.value_or(model.b));
      break;
    case ChainModel::Kind::min_only:
      lo = ExtPoint::at(model.a);
      hi = ExtPoint::at(cap_hi.value_or(model.a + 32));
      break;
    case ChainModel::Kind::max_only:
      lo = ExtPoint::at(model.b - 32);
      hi = ExtPoint::at(model.b);
      break;
  }
  std::vector<Rational> zs = distinct_between(lo, hi, model, rng, 4);
  return {zs[0], zs[1], zs[2], zs[3]};
}

}  // namespace

PiecewiseMap random_op_map(const ChainModel& model, std::uint64_t seed,
                           const RandomMapOptions& opts) {
  DetRng rng(seed);
  if (opts.shape == IdealShape::gap) {
    require(model.kind == ChainModel::Kind::min_max &&
                model.cuts.size() == 1,
            Errc::bad_params,
            "gap shape needs a two-ended model with one removed point");
  } else {
    require(model.cuts.empty(), Errc::bad_params,
            "random generation supports removed points only for gap shape");
  }
  require(opts.shape == IdealShape::half_open || !opts.unbounded_low_image,
          Errc::bad_params,
          "an unbounded low image needs a half-open low block");
  require(!opts.unbounded_low_image ||
              model.kind == ChainModel::Kind::min_only,
          Errc::bad_params,
          "an unbounded low image needs an upward-unbounded chain");

  if (opts.shape == IdealShape::whole)
    return random_order_preserving_map(model, seed);

  // Value zones; for the gap shape everything stays below the removed point.
  std::optional<Rational> cap;
  if (opts.shape == IdealShape::gap) cap = model.cuts.front();
  ValueZones z = pick_zones(model, rng, cap);

  // Split point and the two blocks.
  ConvexSet x1, x2;
  if (opts.shape == IdealShape::gap) {
    const Rational& q = model.cuts.front();
    x1 = ConvexSet::make(ExtPoint::at(model.a), true, ExtPoint::at(q), false);
    x2 = ConvexSet::make(ExtPoint::at(q), false, ExtPoint::at(model.b), true);
  } else {
    Rational m;
    bool closed = opts.shape == IdealShape::closed;
    if (closed && model.has_min() && rng.below(8) == 0) {
      m = model.a;  // low block collapses to the least element
    } else {
      ExtPoint lo = model.bottom(), hi = model.top();
      m = sample_between(lo, hi, model, rng);
    }
    x1 = ConvexSet::make(model.bottom(), model.has_min(), ExtPoint::at(m),
                         closed);
    x2 = ConvexSet::make(ExtPoint::at(m), !closed, model.top(),
                         model.has_max());
  }

  std::vector<Piece> pieces =
      build_side(x1, z.z3, z.z4, model, rng, opts.unbounded_low_image);
  std::vector<Piece> high =
      build_side(x2, z.z1, z.z2, model, rng, false);
  pieces.insert(pieces.end(), high.begin(), high.end());
  PiecewiseMap f(model, std::move(pieces));

  FindIdealResult dec = find_ideal(f);
  require(dec.kind == FindIdealResult::Kind::proper,
          Errc::verification_failed,
          "generated map lost its two-block decomposition");
  require(dec.x1 == x1, Errc::verification_failed,
          "generated map has an unexpected decomposition boundary");
  return f;
}

PiecewiseMap random_order_preserving_map(const ChainModel& model,
                                         std::uint64_t seed) {
  DetRng rng(seed ^ 0x5851f42d4c957f2dull);
  require(model.cuts.empty(), Errc::bad_params,
          "random generation needs an unpunctured chain");
  ValueZones z = pick_zones(model, rng, std::nullopt);
  std::vector<Piece> pieces =
      build_side(model.carrier(), z.z1, z.z4, model, rng, false);
  PiecewiseMap f(model, std::move(pieces));
  require(is_order_preserving(f), Errc::verification_failed,
          "generated map is not order-preserving");
  return f;
}

}  // namespace opchain
