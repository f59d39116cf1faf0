#pragma once

#include <cstdint>
#include <vector>

namespace opchain::finite {

// A full transformation of {0, 1, ..., n-1}; img[i] is the image of i.
struct FiniteMap {
  int n = 0;
  std::vector<std::uint8_t> img;

  bool operator==(const FiniteMap&) const = default;
};

// Encode as an integer in base n for set membership; n <= 8 keeps this small.
std::uint32_t encode(const FiniteMap& m);
FiniteMap decode(std::uint32_t key, int n);

// Apply f first, then g.
FiniteMap compose(const FiniteMap& f, const FiniteMap& g);

bool is_order_preserving(const FiniteMap& m);
// Some prefix block {0..k-1} (possibly everything) behaves as the low block:
// the map is order-preserving on it and on the rest, and every low-block
// value is >= every high-block value.
bool is_orientation_preserving(const FiniteMap& m);

std::vector<FiniteMap> all_order_preserving(int n);
std::vector<FiniteMap> all_orientation_preserving(int n);

// Closure of `seed` under composition (both orders arise since the seed is
// multiplied on the right by every element reached so far, starting from the
// full seed set).
std::vector<std::uint32_t> closure(const std::vector<FiniteMap>& seed, int n);

struct RankCheck {
  int n = 0;
  std::uint64_t order_preserving_count = 0;
  std::uint64_t orientation_preserving_count = 0;
  bool closure_of_o_is_o = false;      // order-preserving maps form a monoid
  bool o_is_proper_subset = false;     // some OP map is not order-preserving
  bool single_extra_generator_suffices = false;
  FiniteMap witness_generator;  // set when the check succeeds
};

// Confirms that adjoining one map to the order-preserving maps generates all
// orientation-preserving maps, and that the cyclic shift is such a map.
// n is capped at 8 to keep enumeration exact and fast.
RankCheck relative_rank_check(int n);

}  // namespace opchain::finite
