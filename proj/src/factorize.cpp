#include "opchain/factorize.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>
#include <utility>

#include "opchain/error.hpp"

namespace opchain {

namespace {

ConvexSet seg_open(const Rational& lo, const Rational& hi) {
  return ConvexSet::open(lo, hi);
}

ConvexSet pt(const Rational& v) { return ConvexSet::singleton(v); }

// Assembles a piecewise map from region rules. Rules may be constants,
// restrictions of a single invertible atom, or a left-to-right chain of
// invertible atoms optionally finished by an arbitrary piecewise map (the
// chain's image is then refined against that map's pieces exactly).
class TableBuilder {
 public:
  explicit TableBuilder(const ChainModel& model) : model_(model) {}

  TableBuilder& constant(const ConvexSet& dom, const Rational& v) {
    pieces_.push_back({dom, MapAtom::constant(v)});
    return *this;
  }

  TableBuilder& rule(const ConvexSet& dom, const MapAtom& atom) {
    pieces_.push_back({dom, restrict_atom(atom, dom)});
    return *this;
  }

  TableBuilder& identity(const ConvexSet& dom) {
    pieces_.push_back({dom, MapAtom::identity_on(dom)});
    return *this;
  }

  TableBuilder& chain(const ConvexSet& dom, const std::vector<MapAtom>& atoms,
                      const PiecewiseMap* tail = nullptr) {
    MapAtom acc = MapAtom::identity_on(dom);
    for (const MapAtom& a : atoms) acc = compose_atoms(acc, a);
    if (!tail) {
      pieces_.push_back({dom, acc});
      return *this;
    }
    for (const Piece& gp : tail->pieces()) {
      ConvexSet overlap = intersect(acc.dst, gp.domain);
      if (overlap.is_empty()) continue;
      ConvexSet part = preimage_of(acc, overlap);
      if (!model_.carrier_nonempty(part)) continue;
      MapAtom restricted = restrict_atom(acc, part);
      pieces_.push_back({part, compose_atoms(restricted, gp.atom)});
    }
    return *this;
  }

  PiecewiseMap build() { return PiecewiseMap(model_, std::move(pieces_)); }

 private:
  static MapAtom restrict_atom(const MapAtom& atom, const ConvexSet& dom) {
    if (atom.kind == MapAtom::Kind::constant) return atom;
    if (atom.src == dom) return atom;
    return MapAtom::frac(atom.p, atom.q, atom.r, atom.s, dom);
  }

  const ChainModel& model_;
  std::vector<Piece> pieces_;
};

std::optional<Rational> neg_opt(const std::optional<Rational>& v) {
  if (!v) return std::nullopt;
  return -*v;
}

ExtPoint neg_ext(const ExtPoint& x) {
  switch (x.kind) {
    case ExtPoint::Kind::neg_inf:
      return ExtPoint::pos_inf();
    case ExtPoint::Kind::pos_inf:
      return ExtPoint::neg_inf();
    case ExtPoint::Kind::finite:
      return ExtPoint::at(-x.value);
  }
  fail(Errc::precondition, "unreachable extended-point kind");
}

ConvexSet mirror_set(const ConvexSet& s) {
  if (s.is_empty()) return ConvexSet{};
  return ConvexSet::make(neg_ext(s.hi), s.hi_closed, neg_ext(s.lo),
                         s.lo_closed);
}

MapAtom mirror_atom(const MapAtom& a) {
  if (a.kind == MapAtom::Kind::constant) return MapAtom::constant(-a.value);
  // g(x) = -f(-x): (p x + q)/(r x + s) becomes (p x - q)/(-r x + s).
  return MapAtom::frac(a.p, -a.q, -a.r, a.s, mirror_set(a.src));
}

PiecewiseMap build_gamma(const ChainModel& model, const ResolvedParams& p) {
  require(model.kind == ChainModel::Kind::min_max, Errc::precondition,
          "block-swap generator needs a least and a greatest element");
  const Rational &a = model.a, &b = model.b, &c = p.c, &d = p.d;
  try {
    TableBuilder tb(model);
    tb.constant(pt(a), d);
    tb.rule(seg_open(a, c), make_iso(seg_open(a, c), seg_open(d, b)));
    tb.constant(pt(c), a);
    tb.rule(seg_open(c, b), make_iso(seg_open(c, b), seg_open(a, c)));
    tb.constant(pt(b), c);
    return tb.build();
  } catch (const Error& e) {
    if (e.code() == Errc::precondition || e.code() == Errc::boundary_mismatch)
      fail(Errc::bad_params,
           std::string("generator parameters invalid for this model: ") +
               e.what());
    throw;
  }
}

PiecewiseMap build_gamma_star(const ChainModel& model,
                              const ResolvedParams& p) {
  require(model.kind == ChainModel::Kind::min_only, Errc::precondition,
          "tail-trade generator needs a least element and no greatest");
  const Rational &a = model.a, &c = p.c;
  ConvexSet tail_set =
      ConvexSet::make(ExtPoint::at(c), false, ExtPoint::pos_inf(), false);
  try {
    TableBuilder tb(model);
    tb.constant(pt(a), c);
    MapAtom nu = make_iso(seg_open(a, c), tail_set);
    tb.rule(seg_open(a, c), nu);
    tb.constant(pt(c), a);
    tb.rule(tail_set, invert_atom(nu));
    return tb.build();
  } catch (const Error& e) {
    if (e.code() == Errc::precondition || e.code() == Errc::boundary_mismatch)
      fail(Errc::bad_params,
           std::string("generator parameters invalid for this model: ") +
               e.what());
    throw;
  }
}

ResolvedParams mirror_params(const ResolvedParams& p) {
  return ResolvedParams{-p.c, -p.d, -p.c_prime, neg_opt(p.rest)};
}

GeneratorParams mirror_params(const GeneratorParams& p) {
  return GeneratorParams{neg_opt(p.c), neg_opt(p.d), neg_opt(p.c_prime),
                         neg_opt(p.rest)};
}

void require_carrier(const ChainModel& model, const Rational& v,
                     const char* what) {
  require(model.in_carrier(v), Errc::bad_params,
          std::string(what) + " must be a carrier point");
}

// Defaults that never consult the cut layout; used to keep a parameter record
// on witnesses that never build a generator.
ResolvedParams raw_defaults(const ChainModel& model,
                            const GeneratorParams& user) {
  ResolvedParams r;
  switch (model.kind) {
    case ChainModel::Kind::min_max: {
      Rational span = model.b - model.a;
      r.c = user.c.value_or(model.a + span / 3);
      r.d = user.d.value_or(model.a + 2 * span / 3);
      r.c_prime = user.c_prime.value_or(model.a + span / 6);
      break;
    }
    case ChainModel::Kind::min_only:
      r.c = user.c.value_or(model.a + 1);
      r.d = user.d.value_or(model.a + 2);
      r.c_prime = user.c_prime.value_or(model.a + Rational(1, 2));
      break;
    case ChainModel::Kind::max_only:
      r.c = user.c.value_or(model.b - 1);
      r.d = user.d.value_or(model.b - 2);
      r.c_prime = user.c_prime.value_or(model.b - Rational(1, 2));
      break;
  }
  r.rest = user.rest;
  return r;
}

}  // namespace

ResolvedParams resolve_params(const ChainModel& model,
                              const GeneratorParams& user) {
  ResolvedParams r = raw_defaults(model, user);
  switch (model.kind) {
    case ChainModel::Kind::min_max: {
      if (model.cuts.size() == 1) {
        const Rational& q = model.cuts.front();
        bool straddles = r.c < q && q < r.d;
        if (!straddles) {
          require(!user.c && !user.d, Errc::bad_params,
                  "generator window must straddle the removed point");
          r.c = model.a + 2 * (q - model.a) / 3;
          r.d = q + (model.b - q) / 3;
          if (!user.c_prime) r.c_prime = model.a + (r.c - model.a) / 2;
        }
      }
      require(model.a < r.c && r.c < r.d && r.d < model.b, Errc::bad_params,
              "need least < c < d < greatest");
      break;
    }
    case ChainModel::Kind::min_only:
      require(model.a < r.c && r.c < r.d, Errc::bad_params,
              "need least < c < d");
      break;
    case ChainModel::Kind::max_only:
      require(r.d < r.c && r.c < model.b, Errc::bad_params,
              "need d < c < greatest");
      break;
  }
  bool cp_ok = model.kind == ChainModel::Kind::max_only
                   ? (r.c < r.c_prime && r.c_prime < model.b)
                   : (model.a < r.c_prime && r.c_prime < r.c);
  require(cp_ok, Errc::bad_params,
          "auxiliary point must sit strictly between the end and c");
  require_carrier(model, r.c, "c");
  require_carrier(model, r.d, "d");
  require_carrier(model, r.c_prime, "c_prime");
  if (r.rest) require_carrier(model, *r.rest, "rest");
  return r;
}

PiecewiseMap make_generator(const ChainModel& model, const ResolvedParams& p) {
  switch (model.kind) {
    case ChainModel::Kind::min_max:
      require(model.a < p.c && p.c < p.d && p.d < model.b, Errc::bad_params,
              "need least < c < d < greatest");
      return build_gamma(model, p);
    case ChainModel::Kind::min_only:
      require(model.a < p.c && p.c < p.d, Errc::bad_params,
              "need least < c < d");
      return build_gamma_star(model, p);
    case ChainModel::Kind::max_only:
      require(p.d < p.c && p.c < model.b, Errc::bad_params,
              "need d < c < greatest");
      return dualize(build_gamma_star(dualize(model), mirror_params(p)));
  }
  fail(Errc::precondition, "unreachable model kind");
}

ChainModel dualize(const ChainModel& model) {
  ChainModel out;
  switch (model.kind) {
    case ChainModel::Kind::min_max:
      out = ChainModel::min_max(-model.b, -model.a);
      break;
    case ChainModel::Kind::min_only:
      out = ChainModel::max_only(-model.a);
      break;
    case ChainModel::Kind::max_only:
      out = ChainModel::min_only(-model.b);
      break;
  }
  std::vector<Rational> cuts;
  cuts.reserve(model.cuts.size());
  for (auto it = model.cuts.rbegin(); it != model.cuts.rend(); ++it)
    cuts.push_back(-*it);
  out.cuts = std::move(cuts);
  return out;
}

PiecewiseMap dualize(const PiecewiseMap& f) {
  ChainModel m = dualize(f.model());
  std::vector<Piece> ps;
  ps.reserve(f.pieces().size());
  for (auto it = f.pieces().rbegin(); it != f.pieces().rend(); ++it) {
    MapAtom atom = mirror_atom(it->atom);
    ConvexSet dom = mirror_set(it->domain);
    if (atom.kind == MapAtom::Kind::frac_linear)
      atom = MapAtom::frac(atom.p, atom.q, atom.r, atom.s, dom);
    ps.push_back({dom, atom});
  }
  return PiecewiseMap(m, std::move(ps));
}

FactorizationWitness dualize(const FactorizationWitness& w) {
  FactorizationWitness out;
  out.input = dualize(w.input);
  out.factors.reserve(w.factors.size());
  for (const Factor& f : w.factors)
    out.factors.push_back({f.tag, dualize(f.map)});
  out.params = mirror_params(w.params);
  out.path = w.path;
  out.verified = w.verified;
  return out;
}

namespace {

struct GammaAtoms {
  PiecewiseMap gen;
  MapAtom mu1, mu2;  // low-block and high-block rules of the swap map
};

GammaAtoms gamma_with_atoms(const ChainModel& model, const ResolvedParams& p) {
  PiecewiseMap g = build_gamma(model, p);
  require(g.pieces().size() == 5, Errc::precondition,
          "block-swap generator must have five regions");
  return GammaAtoms{g, g.pieces()[1].atom, g.pieces()[3].atom};
}

// Ideal [a,m), m a carrier point: one pass through the generator.
FactorizationWitness factor_two_sided_halfopen(const PiecewiseMap& f,
                                               const FindIdealResult& dec,
                                               const ResolvedParams& P) {
  const ChainModel& model = f.model();
  const Rational &a = model.a, &b = model.b, &c = P.c, &d = P.d;
  const Rational m = dec.x1.hi.value;
  GammaAtoms g = gamma_with_atoms(model, P);

  MapAtom lam1 = make_iso(seg_open(a, m), seg_open(a, c));
  TableBuilder pre(model);
  pre.constant(pt(a), a);
  pre.rule(seg_open(a, m), lam1);
  MapAtom lam2;  // only meaningful when m < b
  if (m < b) {
    lam2 = make_iso(seg_open(m, b), seg_open(c, b));
    pre.constant(pt(m), c);
    pre.rule(seg_open(m, b), lam2);
    pre.constant(pt(b), b);
  } else {
    pre.constant(pt(b), c);
  }

  Rational fa = f.evaluate(a), fb = f.evaluate(b), fm = f.evaluate(m);
  TableBuilder post(model);
  post.constant(pt(a), fm);
  if (m < b)
    post.chain(seg_open(a, c), {invert_atom(g.mu2), invert_atom(lam2)}, &f);
  else
    post.constant(seg_open(a, c), fb);
  post.constant(pt(c), fb);
  post.constant(ConvexSet::open_closed(c, d), fa);
  post.chain(seg_open(d, b), {invert_atom(g.mu1), invert_atom(lam1)}, &f);
  post.constant(pt(b), b);

  FactorizationWitness w;
  w.input = f;
  w.params = P;
  w.path = "two_sided_halfopen";
  w.factors.push_back({FactorTag::order_preserving, pre.build()});
  w.factors.push_back({FactorTag::generator, g.gen});
  w.factors.push_back({FactorTag::order_preserving, post.build()});
  return w;
}

// Ideal [a,m] with a greatest element: squeeze the low block clear of c
// first so the swap leaves room to re-attach the boundary value.
FactorizationWitness factor_two_sided_closed(const PiecewiseMap& f,
                                             const FindIdealResult& dec,
                                             const ResolvedParams& P) {
  const ChainModel& model = f.model();
  const Rational &a = model.a, &b = model.b, &c = P.c, &d = P.d,
                 &cp = P.c_prime;
  const Rational m = dec.x1.hi.value;
  GammaAtoms g = gamma_with_atoms(model, P);

  MapAtom lam1, lam2 = make_iso(seg_open(m, b), seg_open(c, b));
  TableBuilder pre(model);
  if (m > a) {
    lam1 = make_iso(seg_open(a, m), seg_open(a, c));
    pre.constant(pt(a), a);
    pre.rule(seg_open(a, m), lam1);
    pre.constant(pt(m), c);
  } else {
    pre.constant(pt(a), c);
  }
  pre.rule(seg_open(m, b), lam2);
  pre.constant(pt(b), b);

  MapAtom tau1 = make_iso(seg_open(a, c), seg_open(a, cp));
  TableBuilder squeeze(model);
  squeeze.constant(pt(a), a);
  squeeze.rule(seg_open(a, c), tau1);
  squeeze.constant(pt(c), cp);
  squeeze.identity(ConvexSet::open_closed(c, b));

  Rational e = eval_atom(g.mu1, cp);
  MapAtom tau2 = make_iso(seg_open(d, e), seg_open(d, b));
  TableBuilder stretch(model);
  stretch.identity(ConvexSet::closed(a, c));
  stretch.constant(ConvexSet::open_closed(c, d), d);
  stretch.rule(seg_open(d, e), tau2);
  stretch.constant(ConvexSet::closed(e, b), b);

  Rational fa = f.evaluate(a), fb = f.evaluate(b), fm = f.evaluate(m);
  TableBuilder post(model);
  post.constant(pt(a), a);
  post.chain(seg_open(a, c), {invert_atom(g.mu2), invert_atom(lam2)}, &f);
  post.constant(pt(c), fb);
  post.constant(ConvexSet::open_closed(c, d), fa);
  if (m > a)
    post.chain(seg_open(d, b),
               {invert_atom(tau2), invert_atom(g.mu1), invert_atom(tau1),
                invert_atom(lam1)},
               &f);
  else
    post.constant(seg_open(d, b), fa);
  post.constant(pt(b), fm);

  FactorizationWitness w;
  w.input = f;
  w.params = P;
  w.path = "two_sided_closed";
  w.factors.push_back({FactorTag::order_preserving, pre.build()});
  w.factors.push_back({FactorTag::order_preserving, squeeze.build()});
  w.factors.push_back({FactorTag::generator, g.gen});
  w.factors.push_back({FactorTag::order_preserving, stretch.build()});
  w.factors.push_back({FactorTag::order_preserving, post.build()});
  return w;
}

// Punctured interval whose removed point is exactly the ideal boundary:
// both blocks are open at the puncture, so a single swap already fits.
FactorizationWitness factor_two_sided_gap(const PiecewiseMap& f,
                                          const FindIdealResult& dec,
                                          const ResolvedParams& P) {
  const ChainModel& model = f.model();
  const Rational &a = model.a, &b = model.b, &c = P.c, &d = P.d;
  const Rational q = dec.x1.hi.value;  // the removed point
  require(P.c < q && q < P.d, Errc::bad_params,
          "generator window must straddle the removed point");
  GammaAtoms g = gamma_with_atoms(model, P);

  MapAtom lam3 = make_iso(seg_open(a, q), seg_open(a, c));
  ConvexSet after_gap =
      ConvexSet::make(ExtPoint::at(q), false, ExtPoint::at(b), true);
  TableBuilder pre(model);
  pre.constant(pt(a), a);
  pre.rule(seg_open(a, q), lam3);
  pre.identity(after_gap);

  Rational fa = f.evaluate(a), fb = f.evaluate(b);
  Rational wv = eval_atom(g.mu2, q);  // image of the puncture under the swap
  TableBuilder post(model);
  post.constant(ConvexSet::closed(a, wv), a);
  post.chain(seg_open(wv, c), {invert_atom(g.mu2)}, &f);
  post.constant(pt(c), fb);
  post.constant(ConvexSet::open_closed(c, d), fa);
  post.chain(seg_open(d, b), {invert_atom(g.mu1), invert_atom(lam3)}, &f);
  post.constant(pt(b), b);

  FactorizationWitness w;
  w.input = f;
  w.params = P;
  w.path = "two_sided_gap";
  w.factors.push_back({FactorTag::order_preserving, pre.build()});
  w.factors.push_back({FactorTag::generator, g.gen});
  w.factors.push_back({FactorTag::order_preserving, post.build()});
  return w;
}

}  // namespace

// The embedding acts as given below top and freezes at the value of top from
// there on. It respects composition, so a window factorization transports
// factor by factor.
PiecewiseMap embed_window_map(const PiecewiseMap& w,
                              const ChainModel& x_model) {
  const ChainModel& wm = w.model();
  require(x_model.kind == ChainModel::Kind::min_only && x_model.cuts.empty() &&
              wm.kind == ChainModel::Kind::min_max && wm.cuts.empty() &&
              wm.a == x_model.a,
          Errc::model_mismatch,
          "window embedding needs a map on a bounded window sharing the "
          "minimum of an unpunctured min-only chain");
  const Rational& top = wm.b;
  ConvexSet head =
      ConvexSet::make(ExtPoint::at(x_model.a), true, ExtPoint::at(top), false);
  std::vector<Piece> ps;
  for (const Piece& p : w.pieces()) {
    ConvexSet dsub = intersect(p.domain, head);
    if (dsub.is_empty()) continue;
    MapAtom atom = p.atom;
    if (atom.kind == MapAtom::Kind::frac_linear && atom.src != dsub)
      atom = MapAtom::frac(atom.p, atom.q, atom.r, atom.s, dsub);
    ps.push_back({dsub, atom});
  }
  ConvexSet tail =
      ConvexSet::make(ExtPoint::at(top), true, ExtPoint::pos_inf(), false);
  ps.push_back({tail, MapAtom::constant(w.evaluate(top))});
  return PiecewiseMap(x_model, std::move(ps));
}

namespace {

PiecewiseMap window_restrict(const PiecewiseMap& f, const ChainModel& window) {
  ConvexSet win = window.carrier();
  std::vector<Piece> ps;
  for (const Piece& p : f.pieces()) {
    ConvexSet dsub = intersect(p.domain, win);
    if (dsub.is_empty()) continue;
    MapAtom atom = p.atom;
    if (atom.kind == MapAtom::Kind::frac_linear && atom.src != dsub)
      atom = MapAtom::frac(atom.p, atom.q, atom.r, atom.s, dsub);
    ps.push_back({dsub, atom});
  }
  return PiecewiseMap(window, std::move(ps));
}

// The image of the window swap under h equals (tail-trade) · (one
// order-preserving cleanup map); build that cleanup map.
PiecewiseMap expand_transported_swap(const ChainModel& model,
                                     const ResolvedParams& P,
                                     const GammaAtoms& window_gamma,
                                     const MapAtom& nu) {
  const Rational &a = model.a, &c = P.c, &d = P.d;
  MapAtom nu_inv = invert_atom(nu);
  Rational top = 2 * P.d - P.c;
  Rational w0 = eval_atom(nu_inv, top);
  TableBuilder tb(model);
  tb.constant(pt(a), a);
  tb.chain(seg_open(a, w0), {nu, window_gamma.mu2});
  tb.constant(ConvexSet::closed_open(w0, c), c);
  tb.constant(pt(c), d);
  ConvexSet tail_set =
      ConvexSet::make(ExtPoint::at(c), false, ExtPoint::pos_inf(), false);
  tb.chain(tail_set, {nu_inv, window_gamma.mu1});
  return tb.build();
}

FactorizationWitness factor_one_sided_min(const PiecewiseMap& f,
                                          const ResolvedParams& P) {
  const ChainModel& model = f.model();
  require(model.cuts.empty(), Errc::unsupported,
          "factorization on a punctured unbounded chain is not supported");
  const Rational &a = model.a, &c = P.c;
  const Rational top = 2 * P.d - P.c;
  ChainModel window = ChainModel::min_max(a, top);

  PiecewiseMap gen_star = build_gamma_star(model, P);
  const MapAtom& nu = gen_star.pieces()[1].atom;

  ConvexSet ray =
      ConvexSet::make(ExtPoint::at(a), false, ExtPoint::pos_inf(), false);
  MapAtom tau1 = make_iso(seg_open(a, top), ray);

  TableBuilder wrap_tb(model);
  wrap_tb.constant(pt(a), a);
  wrap_tb.rule(seg_open(a, top), tau1);
  wrap_tb.constant(
      ConvexSet::make(ExtPoint::at(top), true, ExtPoint::pos_inf(), false), a);
  PiecewiseMap wrap = wrap_tb.build();

  ImageHull h = image_hull(f);
  ConvexSet img = ConvexSet::make(h.hull.lo, h.min_attained, h.hull.hi,
                                  h.max_attained);
  bool img_bounded = img.hi.kind == ExtPoint::Kind::finite;
  ConvexSet y_prime = ConvexSet::make(ExtPoint::at(a), h.min_attained,
                                      ExtPoint::at(top), h.max_attained);
  MapAtom tau2 = make_iso(img, y_prime);

  TableBuilder squeeze_tb(model);
  ConvexSet below =
      ConvexSet::make(ExtPoint::at(a), true, img.lo, !img.lo_closed);
  if (!below.is_empty()) squeeze_tb.constant(below, a);
  squeeze_tb.rule(img, tau2);
  ConvexSet above =
      ConvexSet::make(img.hi, !img.hi_closed, ExtPoint::pos_inf(), false);
  if (!above.is_empty()) squeeze_tb.constant(above, top);
  PiecewiseMap squeeze = squeeze_tb.build();

  PiecewiseMap folded = compose(compose(wrap, f), squeeze);
  PiecewiseMap alpha_w = window_restrict(folded, window);

  // Window-level factorization (recursion grounds out in the two-sided case).
  FindIdealResult dec_w = find_ideal(alpha_w);
  std::vector<Factor> word;
  std::string inner_path;
  if (dec_w.kind == FindIdealResult::Kind::proper) {
    ResolvedParams wp = P;
    wp.rest.reset();
    FactorizationWitness inner =
        dec_w.x1.hi_closed ? factor_two_sided_closed(alpha_w, dec_w, wp)
                           : factor_two_sided_halfopen(alpha_w, dec_w, wp);
    word = std::move(inner.factors);
    inner_path = inner.path;
  } else {
    word.push_back({FactorTag::order_preserving, alpha_w});
    inner_path = "order_preserving";
  }

  GammaAtoms window_gamma = gamma_with_atoms(window, P);

  FactorizationWitness w;
  w.input = f;
  w.params = P;

  TableBuilder unfold_tb(model);
  unfold_tb.constant(pt(a), a);
  unfold_tb.rule(ray, invert_atom(tau1));
  w.factors.push_back({FactorTag::order_preserving, unfold_tb.build()});

  std::size_t word_generators = 0;
  for (const Factor& fac : word) {
    if (fac.tag == FactorTag::order_preserving) {
      w.factors.push_back(
          {FactorTag::order_preserving, embed_window_map(fac.map, model)});
    } else {
      ++word_generators;
      w.factors.push_back({FactorTag::generator, gen_star});
      w.factors.push_back(
          {FactorTag::order_preserving,
           expand_transported_swap(model, P, window_gamma, nu)});
    }
  }

  if (img_bounded) {
    Rational rest = P.rest.value_or(img.hi.value + 1);
    require(!(ExtPoint::at(rest) < img.hi), Errc::bad_params,
            "resting value must not undercut the image hull");
    require_carrier(model, rest, "rest");
    TableBuilder tail_tb(model);
    if (!y_prime.lo_closed) tail_tb.constant(pt(a), a);
    tail_tb.rule(y_prime, invert_atom(tau2));
    tail_tb.constant(ConvexSet::make(ExtPoint::at(top), !y_prime.hi_closed,
                                     ExtPoint::pos_inf(), false),
                     rest);
    w.factors.push_back({FactorTag::order_preserving, tail_tb.build()});
    w.path = "one_sided_min_bounded_image/" + inner_path;
    require(word_generators == 1, Errc::verification_failed,
            "bounded-image route must use the generator exactly once");
  } else {
    ConvexSet low_block = ConvexSet::make(ExtPoint::at(a), y_prime.lo_closed,
                                          ExtPoint::at(c), false);
    MapAtom eta3 = make_iso(y_prime, low_block);
    TableBuilder t1(model);
    if (!y_prime.lo_closed) t1.constant(pt(a), a);
    t1.rule(y_prime, eta3);
    t1.constant(ConvexSet::make(ExtPoint::at(top), true, ExtPoint::pos_inf(),
                                false),
                c);
    w.factors.push_back({FactorTag::order_preserving, t1.build()});
    w.factors.push_back({FactorTag::generator, gen_star});

    TableBuilder t2(model);
    ConvexSet tail_set =
        ConvexSet::make(ExtPoint::at(c), false, ExtPoint::pos_inf(), false);
    if (y_prime.lo_closed) {
      t2.constant(ConvexSet::closed_open(a, c), a);
      t2.constant(pt(c), eval_atom(invert_atom(tau2), a));
    } else {
      t2.constant(ConvexSet::closed(a, c), a);
    }
    t2.chain(tail_set,
             {invert_atom(nu), invert_atom(eta3), invert_atom(tau2)});
    w.factors.push_back({FactorTag::order_preserving, t2.build()});
    w.path = "one_sided_min_unbounded_image/" + inner_path;
    require(word_generators <= 1, Errc::verification_failed,
            "unbounded-image route must use the generator once or twice");
  }
  return w;
}

FactorizationWitness factor_proper(const PiecewiseMap& f,
                                   const FindIdealResult& dec,
                                   const GeneratorParams& user) {
  const ChainModel& model = f.model();
  switch (model.kind) {
    case ChainModel::Kind::min_max: {
      ResolvedParams P = resolve_params(model, user);
      if (model.cuts.empty()) {
        return dec.x1.hi_closed ? factor_two_sided_closed(f, dec, P)
                                : factor_two_sided_halfopen(f, dec, P);
      }
      require(model.cuts.size() == 1, Errc::unsupported,
              "factorization supports at most one removed point");
      bool boundary_is_gap =
          !dec.x1.hi_closed && dec.x1.hi == ExtPoint::at(model.cuts.front());
      require(boundary_is_gap, Errc::unsupported,
              "decomposition boundary must be the removed point");
      return factor_two_sided_gap(f, dec, P);
    }
    case ChainModel::Kind::min_only:
      return factor_one_sided_min(f, resolve_params(model, user));
    case ChainModel::Kind::max_only: {
      FactorizationWitness w =
          dualize(factor(dualize(f), mirror_params(user)));
      w.path = "one_sided_max_mirror/" + w.path;
      return w;
    }
  }
  fail(Errc::precondition, "unreachable model kind");
}

}  // namespace

WindowSwapExpansion expand_window_swap(const ChainModel& min_only_model,
                                       const ResolvedParams& p) {
  require(min_only_model.kind == ChainModel::Kind::min_only &&
              min_only_model.cuts.empty(),
          Errc::model_mismatch,
          "window-swap expansion needs an unpunctured min-only chain");
  PiecewiseMap gen_star = build_gamma_star(min_only_model, p);
  const MapAtom& nu = gen_star.pieces()[1].atom;
  ChainModel window = ChainModel::min_max(min_only_model.a, 2 * p.d - p.c);
  GammaAtoms wg = gamma_with_atoms(window, p);
  PiecewiseMap cleanup = expand_transported_swap(min_only_model, p, wg, nu);
  return {std::move(gen_star), std::move(cleanup)};
}

FactorizationWitness factor(const PiecewiseMap& f,
                            const GeneratorParams& user) {
  FindIdealResult dec = find_ideal(f);
  switch (dec.kind) {
    case FindIdealResult::Kind::not_op:
      fail(Errc::not_orientation_preserving,
           "no admissible two-block decomposition exists");
    case FindIdealResult::Kind::constant_map:
    case FindIdealResult::Kind::whole: {
      FactorizationWitness w;
      w.input = f;
      try {
        w.params = resolve_params(f.model(), user);
      } catch (const Error&) {
        w.params = raw_defaults(f.model(), user);
      }
      w.path = dec.kind == FindIdealResult::Kind::constant_map
                   ? "constant"
                   : "order_preserving";
      w.factors.push_back({FactorTag::order_preserving, f});
      return w;
    }
    case FindIdealResult::Kind::proper:
      return factor_proper(f, dec, user);
  }
  fail(Errc::precondition, "unreachable decomposition kind");
}

VerifyReport verify_witness(const FactorizationWitness& w, int samples,
                            std::uint64_t seed) {
  VerifyReport r;
  std::ostringstream detail;
  require(!w.factors.empty(), Errc::precondition, "witness has no factors");

  PiecewiseMap prod = w.factors.front().map;
  for (std::size_t i = 1; i < w.factors.size(); ++i)
    prod = compose(prod, w.factors[i].map);

  std::vector<Rational> bps = breakpoints(prod);
  for (const Rational& x : breakpoints(w.input)) bps.push_back(x);
  std::sort(bps.begin(), bps.end());
  bps.erase(std::unique(bps.begin(), bps.end()), bps.end());
  int gaps = static_cast<int>(bps.size()) + 1;
  int per_gap = std::max(1, samples / std::max(1, gaps));
  r.composition_matches = equal_pointwise(prod, w.input, per_gap, seed);
  if (!r.composition_matches) detail << "factor product differs from input; ";

  r.order_factors_order_preserving = true;
  for (std::size_t i = 0; i < w.factors.size(); ++i) {
    if (w.factors[i].tag != FactorTag::order_preserving) continue;
    if (!is_order_preserving(w.factors[i].map)) {
      r.order_factors_order_preserving = false;
      detail << "factor " << i << " is not order-preserving; ";
    }
  }

  r.generator_factors_match = true;
  bool any_generator = false;
  std::optional<PiecewiseMap> ref;  // built on first generator factor
  for (std::size_t i = 0; i < w.factors.size(); ++i) {
    if (w.factors[i].tag != FactorTag::generator) continue;
    any_generator = true;
    if (!ref) ref = make_generator(w.input.model(), w.params);
    if (!equal_structural(w.factors[i].map, *ref)) {
      r.generator_factors_match = false;
      detail << "factor " << i << " differs from the canonical generator; ";
    }
  }

  r.generator_present_when_needed =
      is_order_preserving(w.input) || any_generator;
  if (!r.generator_present_when_needed)
    detail << "input needs the generator but none is present; ";

  r.detail = detail.str();
  return r;
}

}  // namespace opchain
