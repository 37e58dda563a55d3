#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "quasirand/polynomial.hpp"

namespace quasirand {

inline constexpr int kMaxClassOrder = 5;

// Slot index of pair {i,j} in a small-graph bitmask (colex order:
// 01, 02, 12, 03, 13, 23, ...). The first C(v,2) slots cover vertices < v.
constexpr int pair_index(int i, int j) {
  if (i > j) std::swap(i, j);
  return j * (j - 1) / 2 + i;
}

// Isomorphism class of a graph on k <= 5 vertices, stored as its canonical
// (minimum under relabeling) edge bitmask.
struct SmallGraph {
  int k = 0;
  std::uint32_t mask = 0;
  int aut = 1;

  int edges() const;
  bool has_edge(int i, int j) const { return (mask >> pair_index(i, j)) & 1U; }
  int degree(int v) const;
  bool has_isolated_vertex() const;

  friend bool operator==(const SmallGraph& a, const SmallGraph& b) {
    return a.k == b.k && a.mask == b.mask;
  }
};

struct Family {
  int k = 0;
  std::vector<SmallGraph> members;  // ordered by vertex count, then mask
};

// Immutable table of all classes on 1..5 vertices, built once.
class Catalog {
 public:
  static const Catalog& instance();

  std::span<const SmallGraph> classes(int k) const;
  int index_of(int k, std::uint32_t labeled_mask) const;
  int index_of(const SmallGraph& g) const { return index_of(g.k, g.mask); }
  const SmallGraph& classify(int k, std::uint32_t labeled_mask) const;

  // Distinct labeled masks isomorphic to g, i.e. its placements on k slots.
  std::span<const std::uint32_t> orbit(const SmallGraph& g) const;

  std::string name(const SmallGraph& g) const;
  static std::string hex_id(const SmallGraph& g);
  // Conventional name ("K3", "2K2", "paw") or "<k>:<hex mask>".
  std::optional<SmallGraph> find(std::string_view id) const;

  // Number of edge subsets of `host` forming a graph isomorphic to `sub`
  // (both on the same k vertices).
  std::int64_t spanning_copies(const SmallGraph& sub, const SmallGraph& host) const;

  // Sum over placements h of `pattern` on the host's vertex set of
  // prod_{e in h} (1[e in host] - p). Both graphs have the same order.
  const Polynomial& placement_weight(const SmallGraph& pattern, const SmallGraph& host) const;

 private:
  Catalog();

  std::array<std::vector<SmallGraph>, kMaxClassOrder + 1> classes_;
  std::array<std::vector<std::int16_t>, kMaxClassOrder + 1> class_of_mask_;
  std::array<std::vector<std::vector<std::uint32_t>>, kMaxClassOrder + 1> orbits_;
  std::array<std::vector<std::string>, kMaxClassOrder + 1> names_;
  std::array<std::vector<std::int64_t>, kMaxClassOrder + 1> spanning_;
  std::array<std::vector<Polynomial>, kMaxClassOrder + 1> weights_;
};

std::vector<SmallGraph> enumerate_classes(int k);
Family family_Fk(int k);

// Number of v(F)-subsets of host's vertices inducing a copy of F.
std::int64_t count_induced_small(const SmallGraph& F, const SmallGraph& host);

// Mask of the subgraph of `host_mask` induced on `vertices` (in that order).
std::uint32_t induced_mask(std::uint32_t host_mask, std::span<const int> vertices);

// Apply a relabeling perm (slot i -> perm[i]) to a mask on k slots.
std::uint32_t relabel_mask(std::uint32_t mask, int k, std::span<const int> perm);

}  // namespace quasirand
