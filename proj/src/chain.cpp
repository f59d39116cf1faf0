#include "opchain/chain.hpp"

#include <algorithm>

namespace opchain {

Rational rat_parse(std::string_view text) {
  auto bad = [&] { fail(Errc::parse_error, "bad rational: '" + std::string(text) + "'"); };
  if (text.empty()) bad();
  auto slash = text.find('/');
  auto is_int = [](std::string_view t) {
    if (!t.empty() && t.front() == '-') t.remove_prefix(1);
    if (t.empty() || t.size() > 10000) return false;
    return std::all_of(t.begin(), t.end(), [](char c) { return c >= '0' && c <= '9'; });
  };
  try {
    if (slash == std::string_view::npos) {
      if (!is_int(text)) bad();
      return Rational(BigInt(std::string(text)));
    }
    std::string_view num = text.substr(0, slash), den = text.substr(slash + 1);
    if (!is_int(num) || !is_int(den)) bad();
    BigInt q{std::string(den)};
    if (q <= 0) bad();
    return Rational(BigInt(std::string(num)), q);
  } catch (const std::exception&) {
    bad();
  }
  return Rational(0);  // unreachable
}

std::string ext_to_string(const ExtPoint& p) {
  switch (p.kind) {
    case ExtPoint::Kind::neg_inf: return "-inf";
    case ExtPoint::Kind::pos_inf: return "+inf";
    default: return rat_to_string(p.value);
  }
}

ExtPoint ext_parse(std::string_view text) {
  if (text == "-inf") return ExtPoint::neg_inf();
  if (text == "+inf" || text == "inf") return ExtPoint::pos_inf();
  return ExtPoint::at(rat_parse(text));
}

ConvexSet ConvexSet::make(ExtPoint lo, bool lo_closed, ExtPoint hi, bool hi_closed) {
  if (!lo.is_finite()) lo_closed = false;
  if (!hi.is_finite()) hi_closed = false;
  ConvexSet s{std::move(lo), lo_closed, std::move(hi), hi_closed};
  if (s.lo > s.hi) return empty();
  if (s.lo == s.hi && !(s.lo_closed && s.hi_closed)) return empty();
  if (s.lo.is_pos_inf() || s.hi.is_neg_inf()) return empty();
  return s;
}

bool ConvexSet::is_empty() const { return *this == empty(); }

bool ConvexSet::contains(const Rational& x) const {
  // Field-wise contains_ext(ExtPoint::at(x)) without the temporary; this is
  // the evaluation hot path.
  if (lo.is_pos_inf() || hi.is_neg_inf()) return false;
  if (lo.is_finite()) {
    int c = x.compare(lo.value);
    if (c < 0 || (c == 0 && !lo_closed)) return false;
  }
  if (hi.is_finite()) {
    int c = x.compare(hi.value);
    if (c > 0 || (c == 0 && !hi_closed)) return false;
  }
  return true;
}

bool ConvexSet::contains_ext(const ExtPoint& x) const {
  if (is_empty()) return false;
  if (x < lo || (x == lo && !lo_closed && lo.is_finite())) return false;
  if (x > hi || (x == hi && !hi_closed && hi.is_finite())) return false;
  // Infinite endpoints are never members.
  if (!x.is_finite()) return false;
  return true;
}

bool ConvexSet::contains_set(const ConvexSet& inner) const {
  if (inner.is_empty()) return true;
  if (is_empty()) return false;
  bool lo_ok = lo < inner.lo || (lo == inner.lo && (lo_closed || !inner.lo_closed));
  bool hi_ok = hi > inner.hi || (hi == inner.hi && (hi_closed || !inner.hi_closed));
  return lo_ok && hi_ok;
}

bool ConvexSet::is_singleton() const { return !is_empty() && lo == hi; }

std::string set_to_string(const ConvexSet& s) {
  if (s.is_empty()) return "{}";
  return std::string(s.lo_closed ? "[" : "(") + ext_to_string(s.lo) + ", " + ext_to_string(s.hi) +
         (s.hi_closed ? "]" : ")");
}

bool set_less(const ConvexSet& lhs, const ConvexSet& rhs) {
  require(!lhs.is_empty() && !rhs.is_empty(), Errc::empty_set, "set_less on empty set");
  if (lhs.hi < rhs.lo) return true;
  if (lhs.hi == rhs.lo) return !(lhs.hi_closed && rhs.lo_closed);
  return false;
}

ConvexSet intersect(const ConvexSet& a, const ConvexSet& b) {
  ExtPoint lo = a.lo;
  bool lo_closed = a.lo_closed;
  if (b.lo > lo || (b.lo == lo && !b.lo_closed)) {
    lo = b.lo;
    lo_closed = (b.lo == a.lo) ? (a.lo_closed && b.lo_closed) : b.lo_closed;
  }
  ExtPoint hi = a.hi;
  bool hi_closed = a.hi_closed;
  if (b.hi < hi || (b.hi == hi && !b.hi_closed)) {
    hi = b.hi;
    hi_closed = (b.hi == a.hi) ? (a.hi_closed && b.hi_closed) : b.hi_closed;
  }
  return ConvexSet::make(lo, lo_closed, hi, hi_closed);
}

MinMaxFlags min_max_flags(const ConvexSet& s) {
  require(!s.is_empty(), Errc::empty_set, "min_max_flags on empty set");
  MinMaxFlags f;
  if (s.lo.is_finite() && s.lo_closed) {
    f.has_min = true;
    f.min = s.lo.value;
  }
  if (s.hi.is_finite() && s.hi_closed) {
    f.has_max = true;
    f.max = s.hi.value;
  }
  return f;
}

static void check_cuts(const ChainModel& m) {
  const auto& cs = m.cuts;
  for (size_t i = 0; i < cs.size(); ++i) {
    if (i > 0) require(cs[i - 1] < cs[i], Errc::bad_params, "cuts must be sorted and distinct");
    if (m.has_min()) require(cs[i] > m.a, Errc::bad_params, "cut must be strictly inside the bounds");
    if (m.has_max()) require(cs[i] < m.b, Errc::bad_params, "cut must be strictly inside the bounds");
  }
}

ChainModel ChainModel::min_max(Rational a, Rational b, std::vector<Rational> cuts) {
  require(a < b, Errc::bad_params, "model needs a < b");
  ChainModel m{Kind::min_max, std::move(a), std::move(b), std::move(cuts)};
  check_cuts(m);
  return m;
}

ChainModel ChainModel::min_only(Rational a, std::vector<Rational> cuts) {
  ChainModel m{Kind::min_only, std::move(a), Rational(0), std::move(cuts)};
  check_cuts(m);
  return m;
}

ChainModel ChainModel::max_only(Rational b, std::vector<Rational> cuts) {
  ChainModel m{Kind::max_only, Rational(0), std::move(b), std::move(cuts)};
  check_cuts(m);
  return m;
}

ConvexSet ChainModel::carrier() const {
  return ConvexSet::make(bottom(), has_min(), top(), has_max());
}

bool ChainModel::is_cut(const Rational& x) const {
  return std::binary_search(cuts.begin(), cuts.end(), x);
}

bool ChainModel::in_carrier(const Rational& x) const {
  // Same as carrier().contains(x) && !is_cut(x) without building the carrier.
  if (has_min() && x < a) return false;
  if (has_max() && x > b) return false;
  return cuts.empty() || !is_cut(x);
}

bool ChainModel::carrier_nonempty(const ConvexSet& s) const {
  if (s.is_empty()) return false;
  if (s.is_singleton()) return !is_cut(s.lo.value);
  // A nondegenerate rational interval minus finitely many cuts is never empty.
  return true;
}

std::string model_to_string(const ChainModel& m) {
  std::string out;
  switch (m.kind) {
    case ChainModel::Kind::min_max:
      out = "chain[" + rat_to_string(m.a) + ", " + rat_to_string(m.b) + "]";
      break;
    case ChainModel::Kind::min_only: out = "chain[" + rat_to_string(m.a) + ", +inf)"; break;
    case ChainModel::Kind::max_only: out = "chain(-inf, " + rat_to_string(m.b) + "]"; break;
  }
  if (!m.cuts.empty()) {
    out += " minus {";
    for (size_t i = 0; i < m.cuts.size(); ++i) out += (i ? ", " : "") + rat_to_string(m.cuts[i]);
    out += "}";
  }
  return out;
}

bool is_order_ideal(const ConvexSet& s, const ChainModel& model) {
  if (s.is_empty()) return true;
  if (model.has_min()) return s.contains(model.a);
  return s.lo.is_neg_inf();
}

}  // namespace opchain
