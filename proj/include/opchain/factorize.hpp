#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "opchain/classify.hpp"
#include "opchain/piecewise.hpp"

namespace opchain {

// Tuning points for the distinguished generator and the auxiliary maps built
// around it. Values left unset are resolved against the model:
//   min+max [a,b]:  c = a + (b-a)/3, d = a + 2(b-a)/3, c_prime = a + (b-a)/6
//   min-only [a,∞): c = a + 1,       d = a + 2,        c_prime = a + 1/2
//   max-only (-∞,b]: mirror of min-only: c = b - 1, d = b - 2, c_prime = b - 1/2
// On a punctured min+max model whose single removed point Q is the ideal
// boundary, defaults that fail c < Q < d are re-resolved to
// c = a + 2(Q-a)/3 and d = Q + (b-Q)/3.
struct GeneratorParams {
  std::optional<Rational> c, d, c_prime;
  // Resting value for the final collapse map when the image hull is bounded
  // on an unbounded carrier; default is hull upper bound + 1.
  std::optional<Rational> rest;
};

struct ResolvedParams {
  Rational c, d, c_prime;
  std::optional<Rational> rest;
};

// The one extra map adjoined to the order-preserving maps. On [a,b] it swaps
// the blocks [a,c] and [c,b] around the boundary; on [a,∞) it trades the
// bounded block [a,c] with the unbounded tail; on (-∞,b] it is the mirror
// image of the latter.
PiecewiseMap make_generator(const ChainModel& model, const ResolvedParams& p);

ResolvedParams resolve_params(const ChainModel& model,
                              const GeneratorParams& user);

enum class FactorTag : std::uint8_t {
  order_preserving,  // "O"
  generator,         // "G"
};

struct Factor {
  FactorTag tag;
  PiecewiseMap map;
};

struct FactorizationWitness {
  PiecewiseMap input;
  std::vector<Factor> factors;  // composed left to right
  ResolvedParams params;
  std::string path;  // dispatch route, for reporting
  bool verified = false;
};

// Decompose an orientation-preserving map into order-preserving factors and
// generator occurrences. Throws not_orientation_preserving when the input has
// no valid decomposition, and unsupported for punctured models whose ideal
// boundary is not the single removed point.
FactorizationWitness factor(const PiecewiseMap& f, const GeneratorParams& user);

struct VerifyReport {
  bool composition_matches = false;
  bool order_factors_order_preserving = false;
  bool generator_factors_match = false;
  bool generator_present_when_needed = false;
  std::string detail;

  bool ok() const {
    return composition_matches && order_factors_order_preserving &&
           generator_factors_match && generator_present_when_needed;
  }
};

// Replays the witness: multiplies the factors out and compares against the
// input exactly at breakpoints plus `samples` pseudo-random carrier points,
// re-checks every order-preserving tag, and compares each generator factor
// structurally against the canonical generator for the recorded parameters.
VerifyReport verify_witness(const FactorizationWitness& w, int samples,
                            std::uint64_t seed);

// Conjugation by x -> -x: reflects the model, every domain, and every value.
// Left-to-right factor order is preserved.
ChainModel dualize(const ChainModel& model);
PiecewiseMap dualize(const PiecewiseMap& f);
FactorizationWitness dualize(const FactorizationWitness& w);

// Embed a map defined on a bounded window [a, top] into the min-only chain
// [a,∞) sharing the same minimum: act as given below top, freeze at the
// window-top value from top onward. The embedding respects composition, so a
// factorization on the window transports factor by factor. The window is read
// off the map's own model, which must be an unpunctured min+max chain.
PiecewiseMap embed_window_map(const PiecewiseMap& window_map,
                              const ChainModel& min_only_model);

// The embedded image of the bounded-window block swap with parameters p
// (window top 2d - c) equals compose(generator, cleanup) with the cleanup map
// order-preserving; build that pair.
struct WindowSwapExpansion {
  PiecewiseMap generator;  // the one-sided swap on the unbounded chain
  PiecewiseMap cleanup;    // order-preserving
};
WindowSwapExpansion expand_window_swap(const ChainModel& min_only_model,
                                       const ResolvedParams& p);

}  // namespace opchain
