#include "quasirand/census.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>
#include <string>

#include "quasirand/error.hpp"
#include "quasirand/parallel.hpp"

#include <omp.h>

namespace quasirand {

std::int64_t CensusResult::count(const SmallGraph& F) const {
  if (F.k != k) throw Error(ErrorKind::kInvalidArgument, "class order does not match census");
  return counts[Catalog::instance().index_of(F)];
}

std::int64_t CensusResult::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
}

namespace {

CensusResult enumerate_census(const Graph& g, int k) {
  const auto& cat = Catalog::instance();
  const int n = g.order();
  const std::size_t nclasses = cat.classes(k).size();
  CensusResult out{k, n, std::vector<std::int64_t>(nclasses, 0)};
  if (k == 1) {
    out.counts[0] = n;
    return out;
  }

  // class index of every labeled mask on k slots
  std::vector<int> lookup(std::size_t{1} << (k * (k - 1) / 2));
  for (std::uint32_t m = 0; m < lookup.size(); ++m) lookup[m] = cat.index_of(k, m);

  const int workers = worker_count();
  std::vector<std::vector<std::int64_t>> partial(workers, std::vector<std::int64_t>(nclasses, 0));

#pragma omp parallel for schedule(dynamic) num_threads(workers)
  for (int first = 0; first < n; ++first) {
    auto& local = partial[omp_get_thread_num()];
    int chosen[kMaxClassOrder];
    std::uint32_t masks[kMaxClassOrder];
    chosen[0] = first;
    masks[0] = 0;
    int depth = 1;
    chosen[1] = first;
    while (depth >= 1) {
      int v = ++chosen[depth];
      if (v > n - (k - depth)) {
        --depth;
        continue;
      }
      std::uint32_t m = masks[depth - 1];
      for (int t = 0; t < depth; ++t) {
        if (g.has_edge(chosen[t], v)) m |= 1U << pair_index(t, depth);
      }
      if (depth == k - 1) {
        ++local[lookup[m]];
      } else {
        masks[depth] = m;
        ++depth;
        chosen[depth] = v;
      }
    }
  }
  for (const auto& local : partial) {
    for (std::size_t i = 0; i < nclasses; ++i) out.counts[i] += local[i];
  }
  return out;
}

struct LocalStats {
  std::int64_t triangles = 0;
  std::int64_t p3 = 0;         // non-induced 3-edge paths
  std::int64_t c4 = 0;         // non-induced 4-cycles
  std::int64_t diamonds = 0;   // non-induced diamonds
  std::int64_t paws = 0;       // non-induced paws
  std::int64_t claws = 0;      // non-induced K_{1,3}
  std::int64_t cherries = 0;   // non-induced P2 (sum of C(d,2))
  std::int64_t matchings = 0;  // unordered pairs of disjoint edges
  std::int64_t k4 = 0;
};

std::int64_t count_k4(const Graph& g) {
  const int n = g.order();
  const int words = g.words_per_row();
  const int workers = worker_count();
  std::int64_t total = 0;
#pragma omp parallel num_threads(workers) reduction(+ : total)
  {
    std::vector<std::uint64_t> common(words);
#pragma omp for schedule(dynamic)
    for (int u = 0; u < n; ++u) {
      auto ru = g.row(u);
      for (int v = u + 1; v < n; ++v) {
        if (!g.has_edge(u, v)) continue;
        auto rv = g.row(v);
        const int start = (v + 1) >> 6;
        bool any = false;
        for (int w = start; w < words; ++w) {
          common[w] = ru[w] & rv[w];
          any |= common[w] != 0;
        }
        common[start] &= ~std::uint64_t{0} << ((v + 1) & 63);
        if (!any) continue;
        for (int w = start; w < words; ++w) {
          std::uint64_t bits = common[w];
          while (bits) {
            const int x = w * 64 + std::countr_zero(bits);
            bits &= bits - 1;
            auto rx = g.row(x);
            const int xs = (x + 1) >> 6;
            if (xs >= words) continue;
            std::int64_t c = std::popcount(common[xs] & rx[xs] & (~std::uint64_t{0} << ((x + 1) & 63)));
            for (int t = xs + 1; t < words; ++t) c += std::popcount(common[t] & rx[t]);
            total += c;
          }
        }
      }
    }
  }
  return total;
}

LocalStats local_stats(const Graph& g, bool need_k4) {
  const int n = g.order();
  std::vector<std::int64_t> deg(n);
  for (int v = 0; v < n; ++v) deg[v] = g.degree(v);
  const std::int64_t m = g.edge_count();

  LocalStats s;
  std::vector<std::int64_t> tri_at(n, 0);
  std::int64_t edge_codeg = 0;
  std::int64_t p3_raw = 0;
  std::int64_t c4_twice = 0;
  std::int64_t diamonds = 0;
  const int workers = worker_count();

#pragma omp parallel for schedule(dynamic) num_threads(workers) \
    reduction(+ : edge_codeg, p3_raw, c4_twice, diamonds)
  for (int u = 0; u < n; ++u) {
    std::int64_t tri_u = 0;
    for (int v = 0; v < n; ++v) {
      if (v == u) continue;
      const std::int64_t c = g.common_neighbors(u, v);
      const bool adj = g.has_edge(u, v);
      if (adj) tri_u += c;
      if (v < u) continue;
      c4_twice += c * (c - 1) / 2;
      if (adj) {
        edge_codeg += c;
        diamonds += c * (c - 1) / 2;
        p3_raw += (deg[u] - 1) * (deg[v] - 1);
      }
    }
    tri_at[u] = tri_u / 2;
  }

  s.triangles = edge_codeg / 3;
  s.p3 = p3_raw - 3 * s.triangles;
  s.c4 = c4_twice / 2;
  s.diamonds = diamonds;
  std::int64_t sum_c2 = 0;
  for (int v = 0; v < n; ++v) {
    sum_c2 += deg[v] * (deg[v] - 1) / 2;
    s.claws += deg[v] * (deg[v] - 1) * (deg[v] - 2) / 6;
    s.paws += tri_at[v] * (deg[v] - 2);
  }
  s.cherries = sum_c2;
  s.matchings = m * (m - 1) / 2 - sum_c2;
  if (need_k4) s.k4 = count_k4(g);
  return s;
}

// Turn non-induced (spanning-subgraph) counts into induced counts by
// peeling classes from most to fewest edges.
std::vector<std::int64_t> invert_subgraph_counts(int k, const std::vector<std::int64_t>& sub) {
  const auto& cat = Catalog::instance();
  const auto classes = cat.classes(k);
  std::vector<std::size_t> order(classes.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return classes[a].edges() > classes[b].edges();
  });
  std::vector<std::int64_t> induced(classes.size(), 0);
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const auto f = order[pos];
    std::int64_t v = sub[f];
    for (std::size_t q = 0; q < pos; ++q) {
      const auto h = order[q];
      if (classes[h].edges() > classes[f].edges()) {
        v -= cat.spanning_copies(classes[f], classes[h]) * induced[h];
      }
    }
    induced[f] = v;
  }
  return induced;
}

CensusResult algebraic_census(const Graph& g, int k) {
  const auto& cat = Catalog::instance();
  const std::int64_t n = g.order();
  const std::int64_t m = g.edge_count();
  CensusResult out{k, static_cast<int>(n), {}};
  const auto classes = cat.classes(k);
  auto slot = [&](const char* name) { return static_cast<std::size_t>(cat.index_of(*cat.find(name))); };

  if (k == 1) {
    out.counts = {n};
    return out;
  }
  if (k == 2) {
    out.counts.assign(2, 0);
    out.counts[slot("K2")] = m;
    out.counts[slot("2K1")] = choose2(n) - m;
    return out;
  }

  const LocalStats s = local_stats(g, k == 4);
  std::vector<std::int64_t> sub(classes.size(), 0);
  if (k == 3) {
    sub[slot("3K1")] = binomial(n, 3);
    sub[slot("K2+K1")] = m * (n - 2);
    sub[slot("P2")] = s.cherries;
    sub[slot("K3")] = s.triangles;
  } else {
    sub[slot("4K1")] = binomial(n, 4);
    sub[slot("K2+2K1")] = m * choose2(n - 2);
    sub[slot("P2+K1")] = s.cherries * (n - 3);
    sub[slot("2K2")] = s.matchings;
    sub[slot("K3+K1")] = s.triangles * (n - 3);
    sub[slot("P3")] = s.p3;
    sub[slot("K1,3")] = s.claws;
    sub[slot("C4")] = s.c4;
    sub[slot("paw")] = s.paws;
    sub[slot("diamond")] = s.diamonds;
    sub[slot("K4")] = s.k4;
  }
  out.counts = invert_subgraph_counts(k, sub);
  return out;
}

}  // namespace

CensusResult induced_census(const Graph& g, int k, CensusMethod method) {
  if (g.loops_enabled()) {
    throw Error(ErrorKind::kUnsupported, "induced census requires a loopless graph");
  }
  if (k < 1 || k > kMaxClassOrder || k > g.order()) {
    throw Error(ErrorKind::kUnsupported,
                "census order k=" + std::to_string(k) + " outside [1, min(n,5)]");
  }
  if (method == CensusMethod::kAuto) {
    method = k <= 4 ? CensusMethod::kAlgebraic : CensusMethod::kEnumerate;
  }
  if (method == CensusMethod::kAlgebraic) {
    if (k > 4) throw Error(ErrorKind::kUnsupported, "algebraic census supports k <= 4");
    return algebraic_census(g, k);
  }
  return enumerate_census(g, k);
}

}  // namespace quasirand
