#pragma once

#include <cstdint>
#include <optional>

#include <Eigen/Dense>

#include "json.hpp"
#include "quasirand/graph.hpp"

namespace quasirand {

// M = A - pJ. Entries are 1-p for present pairs or loops and -p otherwise.
Eigen::MatrixXd shifted_matrix(const Graph& g, double p);

// trace(M^s) for even s >= 2, by repeated products of M^{s/2}.
double shifted_trace(const Graph& g, double p, int s);

// n^{-1} trace(M^s)^{1/s}. s must be even and at least 4.
double schatten_norm(const Graph& g, double p, int s);

// Literal sum over all n^s maps of the s-cycle, compensated in long double.
// Throws kWorkCap when n^s exceeds `cap`.
double schatten_norm_bruteforce(const Graph& g, double p, int s,
                                std::int64_t cap = 100'000'000);

// X = sum over maps of the smaller side of (sum_v prod M)^{larger side};
// cost n^{min(a,b)+1} checked against `cap`.
double bipartite_sum(const Graph& g, double p, int a, int b,
                     std::int64_t cap = 1'000'000'000);

// K_{a,b} norm n^{-1} X^{1/(a+b)} for even a, b >= 2.
double bipartite_norm(const Graph& g, double p, int a, int b,
                      std::int64_t cap = 1'000'000'000);

// min{p(1-p), sqrt(p(1-p)) n^{-(k-1)/(2k)}} for s = 2k.
double schatten_formula(int n, double p, int s);

struct NormConstructionReport {
  int n = 0;
  double p = 0;
  int s = 0;                     // 0 for the bipartite variant
  std::optional<std::pair<int, int>> sides;
  std::uint64_t seed = 0;
  double empty = 0;              // empty graph with loops enabled
  double loop_random = 0;        // G(n,p) with independent loops
  std::optional<double> formula; // Schatten variant only

  nlohmann::json to_json() const;
};

NormConstructionReport norm_constructions(int n, double p, int s, std::uint64_t seed);
NormConstructionReport norm_constructions(int n, double p, int a, int b, std::uint64_t seed);

}  // namespace quasirand
