#pragma once

#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "opchain/rational.hpp"

namespace opchain {

// A point of the extended rational line: -inf < every rational < +inf.
struct ExtPoint {
  enum class Kind { neg_inf, finite, pos_inf };

  Kind kind = Kind::finite;
  Rational value;  // meaningful only when kind == finite

  static ExtPoint neg_inf() { return {Kind::neg_inf, Rational(0)}; }
  static ExtPoint pos_inf() { return {Kind::pos_inf, Rational(0)}; }
  static ExtPoint at(Rational v) { return {Kind::finite, std::move(v)}; }

  bool is_finite() const { return kind == Kind::finite; }
  bool is_neg_inf() const { return kind == Kind::neg_inf; }
  bool is_pos_inf() const { return kind == Kind::pos_inf; }

  // Total order. Finite points compare by value.
  friend std::strong_ordering operator<=>(const ExtPoint& l, const ExtPoint& r) {
    auto rank = [](const ExtPoint& p) { return p.kind == Kind::neg_inf ? -1 : p.kind == Kind::pos_inf ? 1 : 0; };
    if (int a = rank(l), b = rank(r); a != b) return a <=> b;
    if (l.kind != Kind::finite) return std::strong_ordering::equal;
    if (l.value < r.value) return std::strong_ordering::less;
    if (l.value > r.value) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }
  friend bool operator==(const ExtPoint& l, const ExtPoint& r) { return (l <=> r) == 0; }
};

std::string ext_to_string(const ExtPoint& p);
ExtPoint ext_parse(std::string_view text);

// A convex subset of the rational line described by two extended endpoints
// with open/closed flags. The canonical empty set is (+inf, -inf), both open.
// A closed flag is only meaningful on a finite endpoint.
struct ConvexSet {
  ExtPoint lo = ExtPoint::pos_inf();
  bool lo_closed = false;
  ExtPoint hi = ExtPoint::neg_inf();
  bool hi_closed = false;

  static ConvexSet empty() { return {}; }
  static ConvexSet singleton(const Rational& v) { return {ExtPoint::at(v), true, ExtPoint::at(v), true}; }
  // Normalizes any empty description to the canonical empty set.
  static ConvexSet make(ExtPoint lo, bool lo_closed, ExtPoint hi, bool hi_closed);
  static ConvexSet closed(const Rational& a, const Rational& b) {
    return make(ExtPoint::at(a), true, ExtPoint::at(b), true);
  }
  static ConvexSet open(const Rational& a, const Rational& b) {
    return make(ExtPoint::at(a), false, ExtPoint::at(b), false);
  }
  static ConvexSet closed_open(const Rational& a, const Rational& b) {
    return make(ExtPoint::at(a), true, ExtPoint::at(b), false);
  }
  static ConvexSet open_closed(const Rational& a, const Rational& b) {
    return make(ExtPoint::at(a), false, ExtPoint::at(b), true);
  }

  // Emptiness as a set of rationals (ignores any chain model).
  bool is_empty() const;
  bool contains(const Rational& x) const;
  bool contains_ext(const ExtPoint& x) const;
  // True when `inner` is a subset of *this.
  bool contains_set(const ConvexSet& inner) const;
  bool is_singleton() const;

  friend bool operator==(const ConvexSet&, const ConvexSet&) = default;
};

std::string set_to_string(const ConvexSet& s);

// Every element of `lhs` is strictly below every element of `rhs`.
// Both sets must be nonempty.
bool set_less(const ConvexSet& lhs, const ConvexSet& rhs);

ConvexSet intersect(const ConvexSet& a, const ConvexSet& b);

struct MinMaxFlags {
  bool has_min = false;
  bool has_max = false;
  std::optional<Rational> min;
  std::optional<Rational> max;
};

// Attained extrema of a nonempty convex set of rationals.
MinMaxFlags min_max_flags(const ConvexSet& s);

// The carrier chain: a dense set of rationals selected by one of three
// boundary variants, minus finitely many excluded interior points ("cuts").
// Cuts realize decompositions whose boundary is not a carrier point.
struct ChainModel {
  enum class Kind { min_max, min_only, max_only };

  Kind kind = Kind::min_max;
  Rational a;  // least element; meaningful unless kind == max_only
  Rational b;  // greatest element; meaningful unless kind == min_only
  std::vector<Rational> cuts;  // sorted, strictly inside the bounds, distinct

  static ChainModel min_max(Rational a, Rational b, std::vector<Rational> cuts = {});
  static ChainModel min_only(Rational a, std::vector<Rational> cuts = {});
  static ChainModel max_only(Rational b, std::vector<Rational> cuts = {});

  bool has_min() const { return kind != Kind::max_only; }
  bool has_max() const { return kind != Kind::min_only; }
  ExtPoint bottom() const { return has_min() ? ExtPoint::at(a) : ExtPoint::neg_inf(); }
  ExtPoint top() const { return has_max() ? ExtPoint::at(b) : ExtPoint::pos_inf(); }
  ConvexSet carrier() const;

  bool is_cut(const Rational& x) const;
  bool in_carrier(const Rational& x) const;
  // Nonempty as a subset of the carrier (a singleton at a cut is empty).
  bool carrier_nonempty(const ConvexSet& s) const;

  friend bool operator==(const ChainModel&, const ChainModel&) = default;
};

std::string model_to_string(const ChainModel& m);

// Downward-closed in the carrier order. The empty set counts as an ideal.
bool is_order_ideal(const ConvexSet& s, const ChainModel& model);

}  // namespace opchain
