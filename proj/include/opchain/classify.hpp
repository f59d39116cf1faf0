#pragma once

#include <string>
#include <vector>

#include "opchain/piecewise.hpp"

namespace opchain {

// Outcome of the unique-decomposition scan. For a proper decomposition the
// carrier splits as x1 < x2 (x1 an order ideal, both nonempty) with the map
// order-preserving on each part and every x1-value >= every x2-value.
struct FindIdealResult {
  enum class Kind {
    proper,        // genuine two-block decomposition
    whole,         // order-preserving; the ideal is the whole carrier
    constant_map,  // every point maps to one value; every split works
    not_op,        // no decomposition exists
  };

  Kind kind = Kind::not_op;
  ConvexSet x1, x2;  // set for proper (x2 nonempty) and whole (x2 empty)

  bool is_orientation_preserving() const { return kind != Kind::not_op; }
};

bool is_constant(const PiecewiseMap& f);
bool is_order_preserving(const PiecewiseMap& f);
FindIdealResult find_ideal(const PiecewiseMap& f);
bool is_orientation_preserving(const PiecewiseMap& f);

// Structural facts that hold for every orientation-preserving map that is not
// order-preserving; each is recomputed from the map and reported. `applicable`
// is false when the statement's hypothesis is vacuous for this map/model.
struct LemmaReport {
  struct Entry {
    std::string name;
    bool applicable = false;
    bool pass = true;
    std::string detail;
  };
  std::vector<Entry> entries;

  bool all_pass() const {
    for (const auto& e : entries)
      if (e.applicable && !e.pass) return false;
    return true;
  }
};

// Precondition: f is orientation-preserving with a proper decomposition.
LemmaReport check_lemma_predicates(const PiecewiseMap& f);

}  // namespace opchain
