#include "opchain/finite_oracle.hpp"

#include <algorithm>
#include <queue>
#include <unordered_set>

#include "opchain/error.hpp"

namespace opchain::finite {

namespace {

void check_n(int n) {
  require(n >= 1 && n <= 8, Errc::too_large,
          "finite chain size must be between 1 and 8");
}

// Enumerate order-preserving maps {0..n-1} -> {lo..hi} with every value <= cap
// handled by the caller; emits via callback.
template <typename F>
void walk_monotone(int slots, int values, F&& emit) {
  std::vector<std::uint8_t> cur(static_cast<std::size_t>(slots));
  // Iterative odometer over nondecreasing sequences.
  auto rec = [&](auto&& self, int i, int floor_v) -> void {
    if (i == slots) {
      emit(cur);
      return;
    }
    for (int v = floor_v; v < values; ++v) {
      cur[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(v);
      self(self, i + 1, v);
    }
  };
  rec(rec, 0, 0);
}

}  // namespace

std::uint32_t encode(const FiniteMap& m) {
  std::uint32_t key = 0;
  for (int i = m.n - 1; i >= 0; --i)
    key = key * static_cast<std::uint32_t>(m.n) +
          m.img[static_cast<std::size_t>(i)];
  return key;
}

FiniteMap decode(std::uint32_t key, int n) {
  FiniteMap m;
  m.n = n;
  m.img.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    m.img[static_cast<std::size_t>(i)] =
        static_cast<std::uint8_t>(key % static_cast<std::uint32_t>(n));
    key /= static_cast<std::uint32_t>(n);
  }
  return m;
}

FiniteMap compose(const FiniteMap& f, const FiniteMap& g) {
  require(f.n == g.n, Errc::domain_mismatch,
          "maps live on chains of different sizes");
  FiniteMap out;
  out.n = f.n;
  out.img.resize(f.img.size());
  for (std::size_t i = 0; i < f.img.size(); ++i) out.img[i] = g.img[f.img[i]];
  return out;
}

bool is_order_preserving(const FiniteMap& m) {
  for (std::size_t i = 0; i + 1 < m.img.size(); ++i)
    if (m.img[i] > m.img[i + 1]) return false;
  return true;
}

bool is_orientation_preserving(const FiniteMap& m) {
  const int n = m.n;
  for (int k = 1; k <= n; ++k) {
    // low block {0..k-1}, high block {k..n-1} (empty when k == n)
    bool ok = true;
    for (int i = 0; i + 1 < k && ok; ++i)
      if (m.img[static_cast<std::size_t>(i)] >
          m.img[static_cast<std::size_t>(i + 1)])
        ok = false;
    for (int i = k; i + 1 < n && ok; ++i)
      if (m.img[static_cast<std::size_t>(i)] >
          m.img[static_cast<std::size_t>(i + 1)])
        ok = false;
    if (!ok) continue;
    if (k < n) {
      std::uint8_t low_min = m.img[0];
      for (int i = 1; i < k; ++i)
        low_min = std::min(low_min, m.img[static_cast<std::size_t>(i)]);
      std::uint8_t high_max = m.img[static_cast<std::size_t>(k)];
      for (int i = k + 1; i < n; ++i)
        high_max = std::max(high_max, m.img[static_cast<std::size_t>(i)]);
      if (low_min < high_max) continue;
    }
    return true;
  }
  return false;
}

std::vector<FiniteMap> all_order_preserving(int n) {
  check_n(n);
  std::vector<FiniteMap> out;
  walk_monotone(n, n, [&](const std::vector<std::uint8_t>& img) {
    out.push_back(FiniteMap{n, img});
  });
  return out;
}

std::vector<FiniteMap> all_orientation_preserving(int n) {
  check_n(n);
  std::unordered_set<std::uint32_t> seen;
  std::vector<FiniteMap> out;
  // Build from the two-block shape directly rather than filtering all n^n
  // maps: choose the split, a monotone run on each side, low >= high.
  for (int k = 1; k <= n; ++k) {
    std::vector<std::vector<std::uint8_t>> lows;
    walk_monotone(k, n,
                  [&](const std::vector<std::uint8_t>& v) { lows.push_back(v); });
    if (k == n) {
      for (const auto& low : lows) {
        FiniteMap m{n, low};
        if (seen.insert(encode(m)).second) out.push_back(m);
      }
      continue;
    }
    std::vector<std::vector<std::uint8_t>> highs;
    walk_monotone(n - k, n, [&](const std::vector<std::uint8_t>& v) {
      highs.push_back(v);
    });
    for (const auto& low : lows) {
      std::uint8_t low_min = *std::min_element(low.begin(), low.end());
      for (const auto& high : highs) {
        std::uint8_t high_max = *std::max_element(high.begin(), high.end());
        if (low_min < high_max) continue;
        FiniteMap m;
        m.n = n;
        m.img = low;
        m.img.insert(m.img.end(), high.begin(), high.end());
        if (seen.insert(encode(m)).second) out.push_back(m);
      }
    }
  }
  std::sort(out.begin(), out.end(),
            [](const FiniteMap& x, const FiniteMap& y) {
              return encode(x) < encode(y);
            });
  return out;
}

std::vector<std::uint32_t> closure(const std::vector<FiniteMap>& seed, int n) {
  check_n(n);
  std::unordered_set<std::uint32_t> reached;
  std::queue<FiniteMap> frontier;
  for (const FiniteMap& m : seed) {
    require(m.n == n, Errc::domain_mismatch, "seed map size mismatch");
    if (reached.insert(encode(m)).second) frontier.push(m);
  }
  while (!frontier.empty()) {
    FiniteMap u = frontier.front();
    frontier.pop();
    for (const FiniteMap& a : seed) {
      for (const FiniteMap& prod : {compose(u, a), compose(a, u)}) {
        if (reached.insert(encode(prod)).second) frontier.push(prod);
      }
    }
  }
  std::vector<std::uint32_t> keys(reached.begin(), reached.end());
  std::sort(keys.begin(), keys.end());
  return keys;
}

RankCheck relative_rank_check(int n) {
  check_n(n);
  RankCheck rc;
  rc.n = n;
  std::vector<FiniteMap> o_maps = all_order_preserving(n);
  std::vector<FiniteMap> op_maps = all_orientation_preserving(n);
  rc.order_preserving_count = o_maps.size();
  rc.orientation_preserving_count = op_maps.size();

  std::vector<std::uint32_t> op_keys;
  op_keys.reserve(op_maps.size());
  for (const FiniteMap& m : op_maps) op_keys.push_back(encode(m));
  std::sort(op_keys.begin(), op_keys.end());

  std::vector<std::uint32_t> o_keys;
  o_keys.reserve(o_maps.size());
  for (const FiniteMap& m : o_maps) o_keys.push_back(encode(m));
  std::sort(o_keys.begin(), o_keys.end());
  rc.closure_of_o_is_o = closure(o_maps, n) == o_keys;
  rc.o_is_proper_subset = op_keys.size() > o_keys.size();

  auto generates_all = [&](const FiniteMap& extra) {
    std::vector<FiniteMap> seed = o_maps;
    seed.push_back(extra);
    return closure(seed, n) == op_keys;
  };

  // The cyclic shift i -> i+1 (mod n) is the canonical candidate.
  FiniteMap shift;
  shift.n = n;
  shift.img.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    shift.img[static_cast<std::size_t>(i)] =
        static_cast<std::uint8_t>((i + 1) % n);
  if (is_orientation_preserving(shift) && generates_all(shift)) {
    rc.single_extra_generator_suffices = true;
    rc.witness_generator = shift;
    return rc;
  }
  for (const FiniteMap& m : op_maps) {
    if (is_order_preserving(m)) continue;
    if (generates_all(m)) {
      rc.single_extra_generator_suffices = true;
      rc.witness_generator = m;
      return rc;
    }
  }
  return rc;
}

}  // namespace opchain::finite
