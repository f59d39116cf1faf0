#pragma once

#include <cstdint>

#include "opchain/piecewise.hpp"

namespace opchain {

// Requested decomposition shape for a generated map.
enum class IdealShape {
  whole,      // order-preserving (the trivial decomposition)
  half_open,  // low block [a, m) with m a carrier point
  closed,     // low block [a, m] with a greatest element
  gap,        // low block [a, q) with q the model's removed point
};

struct RandomMapOptions {
  IdealShape shape = IdealShape::half_open;
  // min-only models: let the low block's values run off to +infinity
  // (exercises the unbounded-image factorization route).
  bool unbounded_low_image = false;
};

// Deterministic in (model, seed, options). The result is always
// orientation-preserving; for shapes other than `whole` it is never
// order-preserving and its decomposition matches the requested shape.
PiecewiseMap random_op_map(const ChainModel& model, std::uint64_t seed,
                           const RandomMapOptions& opts);

// Deterministic random order-preserving map (the `whole` shape).
PiecewiseMap random_order_preserving_map(const ChainModel& model,
                                         std::uint64_t seed);

}  // namespace opchain
