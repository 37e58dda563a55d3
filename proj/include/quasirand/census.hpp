#pragma once

#include <cstdint>
#include <vector>

#include "quasirand/catalog.hpp"
#include "quasirand/graph.hpp"

namespace quasirand {

enum class CensusMethod {
  kAuto,        // algebraic for k <= 4, enumeration for k = 5
  kEnumerate,   // visit every k-subset
  kAlgebraic,   // degree / codegree / clique identities, k <= 4
};

// N(F,G) for every class F on k vertices, indexed like Catalog::classes(k).
struct CensusResult {
  int k = 0;
  int n = 0;
  std::vector<std::int64_t> counts;

  std::int64_t count(const SmallGraph& F) const;
  std::int64_t total() const;
};

CensusResult induced_census(const Graph& g, int k, CensusMethod method = CensusMethod::kAuto);

// n(n-1)...(n-k+1)/|Aut(F)| * p^e(F) * (1-p)^(C(k,2)-e(F))
template <class S>
S expected_count(const SmallGraph& F, int n, const S& p) {
  S falling = S(1);
  for (int i = 0; i < F.k; ++i) falling *= scalar_from_int<S>(n - i);
  S out = falling / scalar_from_int<S>(F.aut);
  const int e = F.edges();
  const int missing = F.k * (F.k - 1) / 2 - e;
  const S q = S(1) - p;
  for (int i = 0; i < e; ++i) out *= p;
  for (int i = 0; i < missing; ++i) out *= q;
  return out;
}

template <class S>
struct DeviationResult {
  int k = 0;
  std::vector<S> per_class;  // u_F, indexed like Catalog::classes(k)
  S u_k = S(0);
  int argmax = 0;            // index of the class attaining u_k (first on ties)
};

template <class S>
DeviationResult<S> deviation_from_census(const CensusResult& census, const S& p) {
  const auto classes = Catalog::instance().classes(census.k);
  DeviationResult<S> out;
  out.k = census.k;
  out.per_class.reserve(classes.size());
  for (std::size_t i = 0; i < classes.size(); ++i) {
    S dev = scalar_abs<S>(scalar_from_int<S>(census.counts[i]) -
                          expected_count<S>(classes[i], census.n, p));
    if (i == 0 || dev > out.u_k) {
      out.u_k = dev;
      out.argmax = static_cast<int>(i);
    }
    out.per_class.push_back(std::move(dev));
  }
  return out;
}

template <class S>
DeviationResult<S> deviation(const Graph& g, const S& p, int k) {
  return deviation_from_census(induced_census(g, k), p);
}

}  // namespace quasirand
