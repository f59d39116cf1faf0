#include "opchain/classify.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

#include "opchain/error.hpp"

namespace opchain {

namespace {

// Numeric infimum/supremum of one piece's value set. Attainment flags are
// irrelevant for junction order checks: with values dense on either side of
// the bound, sup(left) <= inf(right) is necessary and sufficient either way.
ExtPoint piece_inf(const Piece& p) {
  return p.atom.kind == MapAtom::Kind::constant ? ExtPoint::at(p.atom.value)
                                                : p.atom.dst.lo;
}

ExtPoint piece_sup(const Piece& p) {
  return p.atom.kind == MapAtom::Kind::constant ? ExtPoint::at(p.atom.value)
                                                : p.atom.dst.hi;
}

struct ScanResult {
  FindIdealResult::Kind kind = FindIdealResult::Kind::not_op;
  std::vector<Piece> pieces;  // normalized
  std::ptrdiff_t split = -1;  // proper: x1 = pieces[0..split]
};

ScanResult scan_for_ideal(const PiecewiseMap& f) {
  ScanResult out;
  if (is_constant(f)) {
    out.kind = FindIdealResult::Kind::constant_map;
    return out;
  }
  PiecewiseMap g = normalize(f);
  out.pieces = g.pieces();
  const auto& ps = out.pieces;
  const std::ptrdiff_t k = static_cast<std::ptrdiff_t>(ps.size());

  // junction_ok[j]: no descent between piece j and piece j+1.
  std::vector<bool> junction_ok(k > 0 ? k - 1 : 0);
  for (std::ptrdiff_t j = 0; j + 1 < k; ++j)
    junction_ok[j] = !(piece_inf(ps[j + 1]) < piece_sup(ps[j]));

  if (std::all_of(junction_ok.begin(), junction_ok.end(),
                  [](bool b) { return b; })) {
    out.kind = FindIdealResult::Kind::whole;
    return out;
  }

  // prefix_ok[i]: junctions 0..i-1 all ok; suffix_ok[i]: junctions i..k-2 ok.
  std::vector<bool> prefix_ok(k), suffix_ok(k);
  prefix_ok[0] = true;
  for (std::ptrdiff_t i = 1; i < k; ++i)
    prefix_ok[i] = prefix_ok[i - 1] && junction_ok[i - 1];
  suffix_ok[k - 1] = true;
  for (std::ptrdiff_t i = k - 2; i >= 0; --i)
    suffix_ok[i] = suffix_ok[i + 1] && junction_ok[i];

  std::vector<ExtPoint> prefix_min(k), suffix_max(k);
  prefix_min[0] = piece_inf(ps[0]);
  for (std::ptrdiff_t i = 1; i < k; ++i)
    prefix_min[i] = std::min(prefix_min[i - 1], piece_inf(ps[i]));
  suffix_max[k - 1] = piece_sup(ps[k - 1]);
  for (std::ptrdiff_t i = k - 2; i >= 0; --i)
    suffix_max[i] = std::max(suffix_max[i + 1], piece_sup(ps[i]));

  std::optional<std::ptrdiff_t> found;
  for (std::ptrdiff_t i = 0; i + 1 < k; ++i) {
    if (!prefix_ok[i] || !suffix_ok[i + 1]) continue;
    if (prefix_min[i] < suffix_max[i + 1]) continue;  // need inf1 >= sup2
    require(!found.has_value(), Errc::verification_failed,
            "decomposition scan found two distinct ideals");
    found = i;
  }
  if (found) {
    out.kind = FindIdealResult::Kind::proper;
    out.split = *found;
  }
  return out;
}

std::string ext_str(const ExtPoint& x) { return ext_to_string(x); }

}  // namespace

bool is_constant(const PiecewiseMap& f) {
  const auto& ps = f.pieces();
  if (ps.empty()) return false;
  if (ps.front().atom.kind != MapAtom::Kind::constant) return false;
  const Rational v = ps.front().atom.value;
  return std::all_of(ps.begin(), ps.end(), [&](const Piece& p) {
    return p.atom.kind == MapAtom::Kind::constant && p.atom.value == v;
  });
}

bool is_order_preserving(const PiecewiseMap& f) {
  const auto& ps = f.pieces();
  for (std::size_t j = 0; j + 1 < ps.size(); ++j)
    if (piece_inf(ps[j + 1]) < piece_sup(ps[j])) return false;
  return true;
}

FindIdealResult find_ideal(const PiecewiseMap& f) {
  const ChainModel& model = f.model();
  ScanResult s = scan_for_ideal(f);
  FindIdealResult r;
  r.kind = s.kind;
  switch (s.kind) {
    case FindIdealResult::Kind::constant_map:
    case FindIdealResult::Kind::whole:
      r.x1 = model.carrier();
      r.x2 = ConvexSet{};  // empty
      break;
    case FindIdealResult::Kind::proper: {
      const ConvexSet& d1 = s.pieces[static_cast<std::size_t>(s.split)].domain;
      const ConvexSet& d2 =
          s.pieces[static_cast<std::size_t>(s.split) + 1].domain;
      r.x1 = ConvexSet::make(model.bottom(), model.has_min(), d1.hi,
                             d1.hi_closed);
      r.x2 =
          ConvexSet::make(d2.lo, d2.lo_closed, model.top(), model.has_max());
      break;
    }
    case FindIdealResult::Kind::not_op:
      break;
  }
  return r;
}

bool is_orientation_preserving(const PiecewiseMap& f) {
  return find_ideal(f).is_orientation_preserving();
}

LemmaReport check_lemma_predicates(const PiecewiseMap& f) {
  ScanResult s = scan_for_ideal(f);
  require(s.kind == FindIdealResult::Kind::proper, Errc::precondition,
          "lemma predicates need a proper two-block decomposition");
  const ChainModel& model = f.model();
  FindIdealResult dec = find_ideal(f);

  std::vector<ConvexSet> comps1, comps2;
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(s.pieces.size());
       ++i) {
    const Piece& p = s.pieces[static_cast<std::size_t>(i)];
    ConvexSet img = p.atom.kind == MapAtom::Kind::constant
                        ? ConvexSet::singleton(p.atom.value)
                        : p.atom.dst;
    (i <= s.split ? comps1 : comps2).push_back(img);
  }
  ImageHull h1 = hull_of_components(comps1);
  ImageHull h2 = hull_of_components(comps2);
  ImageHull whole = image_hull(f);

  LemmaReport rep;
  auto add = [&rep](std::string name, bool applicable, bool pass,
                    std::string detail) {
    rep.entries.push_back(
        {std::move(name), applicable, pass, std::move(detail)});
  };

  {
    bool app = model.has_min();
    bool pass = true;
    std::ostringstream d;
    if (app) {
      Rational fa = f.evaluate(model.a);
      pass = h1.min_attained && ExtPoint::at(fa) == h1.hull.lo;
      d << "f(min)=" << rat_to_string(fa)
        << " vs inf f(X1)=" << ext_str(h1.hull.lo)
        << (h1.min_attained ? " (attained)" : " (not attained)");
    }
    add("min_maps_to_x1_min", app, pass, d.str());
  }
  {
    bool app = model.has_max();
    bool pass = true;
    std::ostringstream d;
    if (app) {
      Rational fb = f.evaluate(model.b);
      pass = h2.max_attained && ExtPoint::at(fb) == h2.hull.hi;
      d << "f(max)=" << rat_to_string(fb)
        << " vs sup f(X2)=" << ext_str(h2.hull.hi)
        << (h2.max_attained ? " (attained)" : " (not attained)");
    }
    add("max_maps_to_x2_max", app, pass, d.str());
  }
  {
    bool app = dec.x1.hi_closed;  // x1 has a greatest element
    bool pass = true;
    std::ostringstream d;
    if (app) {
      Rational fc = f.evaluate(dec.x1.hi.value);
      pass = whole.max_attained && ExtPoint::at(fc) == whole.hull.hi;
      d << "f(max X1)=" << rat_to_string(fc)
        << " vs sup im f=" << ext_str(whole.hull.hi)
        << (whole.max_attained ? " (attained)" : " (not attained)");
    }
    add("x1_max_gives_image_max", app, pass, d.str());
  }
  {
    bool app = dec.x2.lo_closed;  // x2 has a least element
    bool pass = true;
    std::ostringstream d;
    if (app) {
      Rational fc = f.evaluate(dec.x2.lo.value);
      pass = whole.min_attained && ExtPoint::at(fc) == whole.hull.lo;
      d << "f(min X2)=" << rat_to_string(fc)
        << " vs inf im f=" << ext_str(whole.hull.lo)
        << (whole.min_attained ? " (attained)" : " (not attained)");
    }
    add("x2_min_gives_image_min", app, pass, d.str());
  }

  // The two value sets can only meet in inf f(X1) = sup f(X2), attained on
  // both sides; when they do meet the overlap is that one point.
  bool overlap = h1.min_attained && h2.max_attained && h1.hull.lo == h2.hull.hi;
  Rational c;
  if (overlap) c = h1.hull.lo.value;
  {
    bool pass = true;
    std::ostringstream d;
    if (overlap) {
      auto holds = [&c](const std::vector<ConvexSet>& comps) {
        return std::any_of(comps.begin(), comps.end(), [&](const ConvexSet& s) {
          return s.contains(c);
        });
      };
      pass = holds(comps1) && holds(comps2);
      d << "overlap value " << rat_to_string(c);
    } else {
      d << "value sets disjoint";
    }
    add("image_overlap_singleton", overlap, pass, d.str());
  }
  {
    bool app = overlap && model.kind == ChainModel::Kind::min_max;
    bool pass = true;
    std::ostringstream d;
    if (app) {
      Rational fa = f.evaluate(model.a), fb = f.evaluate(model.b);
      pass = c == fa && c == fb;
      d << "overlap " << rat_to_string(c) << " vs f(min)=" << rat_to_string(fa)
        << ", f(max)=" << rat_to_string(fb);
    }
    add("overlap_is_boundary_values", app, pass, d.str());
  }
  {
    bool app = overlap && model.kind == ChainModel::Kind::min_only;
    bool pass = true;
    std::ostringstream d;
    if (app) {
      Rational fa = f.evaluate(model.a);
      pass = c == fa;
      d << "overlap " << rat_to_string(c) << " vs f(min)=" << rat_to_string(fa);
    }
    add("overlap_is_value_at_min", app, pass, d.str());
  }
  {
    bool app = overlap && model.kind == ChainModel::Kind::max_only;
    bool pass = true;
    std::ostringstream d;
    if (app) {
      Rational fb = f.evaluate(model.b);
      pass = c == fb;
      d << "overlap " << rat_to_string(c) << " vs f(max)=" << rat_to_string(fb);
    }
    add("overlap_is_value_at_max", app, pass, d.str());
  }
  return rep;
}

}  // namespace opchain
