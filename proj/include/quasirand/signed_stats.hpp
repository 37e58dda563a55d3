#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "quasirand/catalog.hpp"
#include "quasirand/census.hpp"
#include "quasirand/graph.hpp"
#include "quasirand/polynomial.hpp"

namespace quasirand {

// All functions below are instantiated for S = double and S = Rational.
//
// S(F,G) = sum over placements F' of F on vertex subsets of G of
//          prod_{e in E(F')} (1[e in G] - p).
// A placement is a distinct labeled copy: a vertex subset together with one
// edge set isomorphic to F on it, so each class copy is counted once.

// Literal enumeration of every placement. Reference implementation.
template <class S>
S signed_sum_direct(const SmallGraph& F, const Graph& g, const S& p);

// Via induced counts: S(F,G) = sum_H N(H,G) * w_F(H) over classes H of the
// same order, where w_F(H) is Catalog::placement_weight.
template <class S>
S signed_sum_from_census(const SmallGraph& F, const CensusResult& census, const S& p);

// Census route for v(F) <= 4; enumerated census for v(F) = 5 (throws
// kWorkCap when C(n,5) exceeds `enumeration_cap`).
template <class S>
S signed_sum(const SmallGraph& F, const Graph& g, const S& p,
             std::int64_t enumeration_cap = 500'000'000);

template <class S>
struct SignedStats {
  S p;
  std::vector<SmallGraph> members;
  std::vector<S> values;  // aligned with members
  const S& value(const SmallGraph& F) const;
};

// S(F,G) for every member of the family, sharing one census per order.
template <class S>
SignedStats<S> signed_stats(const Graph& g, const Family& family, const S& p);

// S_ij(F,G) = S(F, G + ij) - S(F, G - ij): sum over placements containing
// pair ij of the product over their other edges. Independent of whether ij
// is currently an edge.
template <class S>
S pair_delta_direct(const SmallGraph& F, const Graph& g, const S& p, int i, int j);

// Neighbourhood-type counting for v(F) <= 4 (O(n^2 / 64) per pair), direct
// enumeration for v(F) = 5.
template <class S>
S pair_delta(const SmallGraph& F, const Graph& g, const S& p, int i, int j);

// Sum over placements of F on slots {0,1,2,...} that contain pair (0,1) of
// the product of `x` over their remaining pairs (indexed by pair_index).
template <class S>
S anchored_placement_sum(const SmallGraph& F, const S* x);

// S_ij(F,G) for every member of a family in one pass (floating point).
class PairDeltaBatch {
 public:
  PairDeltaBatch(Family family, double p);

  const Family& family() const { return family_; }
  double p() const { return p_; }

  // Exact: neighbourhood types for v(F) <= 4, subset enumeration for v(F) = 5.
  std::vector<double> exact(const Graph& g, int i, int j) const;
  // v(F) <= 3 exact; larger orders estimated from `samples` uniform vertex
  // subsets of V - {i,j}, scaled by the number of such subsets.
  std::vector<double> sampled(const Graph& g, int i, int j, int samples,
                              std::mt19937_64& rng) const;

 private:
  // Label of the pairs other than (0,1) on slots i, j, w...: bit b is pair
  // index b+1.
  std::uint32_t context_mask(const Graph& g, const int* slots, int v) const;

  Family family_;
  double p_;
  std::array<std::vector<int>, kMaxClassOrder + 1> members_of_order_;
  // tables_[v][mask * members_of_order_[v].size() + t]
  std::array<std::vector<double>, kMaxClassOrder + 1> tables_;
};

// a_{F,H}(n,p) with N(H,G) = E[N(H,G(n,p))] + sum_{F in F_k} a_{F,H} S(F,G).
struct DecompositionCoefficients {
  SmallGraph H;
  int n = 0;
  Polynomial constant;  // equals the expected count of H
  std::vector<SmallGraph> members;
  std::vector<Polynomial> coefficients;  // aligned with members
};

DecompositionCoefficients decomposition_coefficients(const SmallGraph& H, int n);

// N(H,G) - (constant + sum a_{F,H} S(F,G)) evaluated at p.
template <class S>
S decomposition_residual(const DecompositionCoefficients& dc, const Graph& g, const S& p);

// Same residual from precomputed induced counts and signed sums.
template <class S>
S decomposition_residual(const DecompositionCoefficients& dc, std::int64_t induced_count,
                         const SignedStats<S>& stats, const S& p);

// Number of ordered pairs of edges of F whose endpoints cover V(F).
int edge_square_weight(const SmallGraph& F);

template <class S>
struct QuadraticIdentityReport {
  S edge_square_residual;  // e(G)^2 - sum_F alpha_F N(F,G)
  S signed_residual;       // S(K2)^2 - [p(1-p)C(n,2) + (1-2p)S(K2) + 2S(P2) + 2S(2K2)]
  S s_k2;
  S s_p2;
  S s_2k2;
};

template <class S>
QuadraticIdentityReport<S> quadratic_identities_check(const Graph& g, const S& p);

}  // namespace quasirand
