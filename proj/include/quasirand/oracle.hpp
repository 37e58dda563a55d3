#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "quasirand/graph.hpp"
#include "quasirand/rational.hpp"

namespace quasirand {

// Exact rational form of p: the stored fraction, or the shortest decimal
// that round-trips to the stored double.
Rational exact_probability(const EdgeProbability& p);

struct UkMinimum {
  int n = 0;
  int k = 0;
  Rational p;
  Rational value;                  // min over labeled graphs of u_k(G,p)
  Graph witness;                   // first minimiser in mask order
  std::uint64_t witness_mask = 0;  // pair bits in colex order
  std::uint64_t evaluated = 0;
  std::uint64_t pruned = 0;

  nlohmann::json to_json() const;
};

// Exhaustive minimum of u_k over all labeled graphs on n <= 7 vertices.
// Edge-count levels are scanned outward from p*C(n,2) and skipped once the
// step-up lower bound from u_2 exceeds the best value so far.
UkMinimum minimize_u_k(int n, const EdgeProbability& p, int k);

struct SchattenMinimum {
  int n = 0;
  double p = 0;
  int s = 0;
  double value = 0;
  Graph witness;  // loop-enabled
  std::uint64_t witness_mask = 0;

  nlohmann::json to_json() const;
};

// Exhaustive minimum of the Schatten s-norm over loop-graphs on n <= 5
// vertices; the earliest mask wins ties within 1e-12 relative.
SchattenMinimum minimize_schatten(int n, double p, int s);

struct ProportionalHit {
  Graph graph;
  Rational p;
};

struct ProportionalReport {
  std::vector<Rational> grid;
  int n_max = 0;
  // per (n, p): whether the exact targets are integral and searched
  nlohmann::json cells = nlohmann::json::array();
  std::vector<ProportionalHit> hits;

  nlohmann::json to_json() const;
};

// Graphs G on 3..n_max vertices with u_3(G,p) = 0, at most one per (n, p).
// u_3 = 0 exactly when e(G), the number of cherries and the number of
// triangles equal their expectations; cells with non-integral targets are
// skipped and the rest are searched over degree sequences.
ProportionalReport proportional_search(const std::vector<Rational>& grid, int n_max);

}  // namespace quasirand
