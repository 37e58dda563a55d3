#include "quasirand/signed_stats.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <map>
#include <string>
#include <tuple>

#include "quasirand/error.hpp"

namespace quasirand {

namespace {

template <class S>
S edge_factor(const Graph& g, int a, int b, const S& one_minus_p, const S& minus_p) {
  return g.has_edge(a, b) ? one_minus_p : minus_p;
}

// Calls visit(subset) for every increasing `size`-subset of `pool`.
template <class Visit>
void for_each_subset(const std::vector<int>& pool, int size, Visit&& visit) {
  const int m = static_cast<int>(pool.size());
  if (size > m) return;
  std::vector<int> idx(size);
  for (int i = 0; i < size; ++i) idx[i] = i;
  std::vector<int> chosen(size);
  while (true) {
    for (int i = 0; i < size; ++i) chosen[i] = pool[idx[i]];
    visit(chosen);
    int t = size - 1;
    while (t >= 0 && idx[t] == m - size + t) --t;
    if (t < 0) return;
    ++idx[t];
    for (int u = t + 1; u < size; ++u) idx[u] = idx[u - 1] + 1;
  }
}

// Product over the pairs of `h` (pairs on slots, mapped through `slots`).
template <class S>
S placement_product(std::uint32_t h, int skip_bit, const int* slots, int k, const Graph& g,
                    const S& one_minus_p, const S& minus_p) {
  S prod = S(1);
  for (int b = 1; b < k; ++b) {
    for (int a = 0; a < b; ++a) {
      const int bit = pair_index(a, b);
      if (bit == skip_bit || !((h >> bit) & 1U)) continue;
      prod *= edge_factor<S>(g, slots[a], slots[b], one_minus_p, minus_p);
    }
  }
  return prod;
}

}  // namespace

template <class S>
S signed_sum_direct(const SmallGraph& F, const Graph& g, const S& p) {
  const int k = F.k;
  const int n = g.order();
  if (k > n) return S(0);
  const auto orbit = Catalog::instance().orbit(F);
  const S one_minus_p = S(1) - p;
  const S minus_p = -p;
  std::vector<int> pool(n);
  for (int i = 0; i < n; ++i) pool[i] = i;
  S total = S(0);
  for_each_subset(pool, k, [&](const std::vector<int>& chosen) {
    for (std::uint32_t h : orbit) {
      total += placement_product<S>(h, -1, chosen.data(), k, g, one_minus_p, minus_p);
    }
  });
  return total;
}

template <class S>
S signed_sum_from_census(const SmallGraph& F, const CensusResult& census, const S& p) {
  if (census.k != F.k) {
    throw Error(ErrorKind::kInvalidArgument, "census order does not match pattern order");
  }
  const auto& cat = Catalog::instance();
  const auto hosts = cat.classes(F.k);
  S total = S(0);
  for (std::size_t i = 0; i < hosts.size(); ++i) {
    if (census.counts[i] == 0) continue;
    const auto& w = cat.placement_weight(F, hosts[i]);
    if (w.is_zero()) continue;
    total += scalar_from_int<S>(census.counts[i]) * w.evaluate<S>(p);
  }
  return total;
}

namespace {

CensusResult checked_census(const Graph& g, int k, std::int64_t cap) {
  if (k == 5 && binomial(g.order(), 5) > cap) {
    throw Error(ErrorKind::kWorkCap, "5-vertex census exceeds the enumeration cap",
                nlohmann::json{{"n", g.order()}, {"cap", cap}});
  }
  return induced_census(g, k);
}

}  // namespace

template <class S>
S signed_sum(const SmallGraph& F, const Graph& g, const S& p, std::int64_t enumeration_cap) {
  if (F.k > g.order()) return S(0);
  return signed_sum_from_census<S>(F, checked_census(g, F.k, enumeration_cap), p);
}

template <class S>
const S& SignedStats<S>::value(const SmallGraph& F) const {
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (members[i] == F) return values[i];
  }
  throw Error(ErrorKind::kInvalidArgument, "pattern not in family");
}

template <class S>
SignedStats<S> signed_stats(const Graph& g, const Family& family, const S& p) {
  SignedStats<S> out{p, family.members, {}};
  std::map<int, CensusResult> censuses;
  out.values.reserve(family.members.size());
  for (const auto& F : family.members) {
    if (F.k > g.order()) {
      out.values.push_back(S(0));
      continue;
    }
    auto it = censuses.find(F.k);
    if (it == censuses.end()) {
      it = censuses.emplace(F.k, checked_census(g, F.k, 500'000'000)).first;
    }
    out.values.push_back(signed_sum_from_census<S>(F, it->second, p));
  }
  return out;
}

template <class S>
S pair_delta_direct(const SmallGraph& F, const Graph& g, const S& p, int i, int j) {
  const int n = g.order();
  if (i == j || i < 0 || j < 0 || i >= n || j >= n) {
    throw Error(ErrorKind::kInvalidArgument, "pair_delta needs two distinct vertices");
  }
  const int k = F.k;
  if (k < 2 || k > n) return S(0);
  const auto orbit = Catalog::instance().orbit(F);
  const S one_minus_p = S(1) - p;
  const S minus_p = -p;
  std::vector<int> pool;
  for (int v = 0; v < n; ++v) {
    if (v != i && v != j) pool.push_back(v);
  }
  S total = S(0);
  int slots[kMaxClassOrder];
  slots[0] = i;
  slots[1] = j;
  for_each_subset(pool, k - 2, [&](const std::vector<int>& rest) {
    for (int t = 0; t < k - 2; ++t) slots[t + 2] = rest[t];
    for (std::uint32_t h : orbit) {
      if (!(h & 1U)) continue;
      total += placement_product<S>(h, 0, slots, k, g, one_minus_p, minus_p);
    }
  });
  return total;
}

template <class S>
S anchored_placement_sum(const SmallGraph& F, const S* x) {
  S total = S(0);
  const int pairs = F.k * (F.k - 1) / 2;
  for (std::uint32_t h : Catalog::instance().orbit(F)) {
    if (!(h & 1U)) continue;
    S prod = S(1);
    for (int b = 1; b < pairs; ++b) {
      if ((h >> b) & 1U) prod *= x[b];
    }
    total += prod;
  }
  return total;
}

namespace {

// Vertices other than i, j split by (adjacent to i, adjacent to j):
// type index 2*a + b.
struct TypeSets {
  std::array<std::vector<std::uint64_t>, 4> bits;
  std::array<std::int64_t, 4> size{};
};

TypeSets split_by_type(const Graph& g, int i, int j) {
  const int n = g.order();
  const int words = g.words_per_row();
  TypeSets t;
  auto ri = g.row(i);
  auto rj = g.row(j);
  for (auto& b : t.bits) b.assign(words, 0);
  for (int w = 0; w < words; ++w) {
    std::uint64_t valid = ~std::uint64_t{0};
    if (w == words - 1 && (n & 63)) valid = (std::uint64_t{1} << (n & 63)) - 1;
    if (i >> 6 == w) valid &= ~(std::uint64_t{1} << (i & 63));
    if (j >> 6 == w) valid &= ~(std::uint64_t{1} << (j & 63));
    t.bits[3][w] = ri[w] & rj[w] & valid;
    t.bits[2][w] = ri[w] & ~rj[w] & valid;
    t.bits[1][w] = ~ri[w] & rj[w] & valid;
    t.bits[0][w] = ~ri[w] & ~rj[w] & valid;
  }
  for (int c = 0; c < 4; ++c) {
    for (auto word : t.bits[c]) t.size[c] += std::popcount(word);
  }
  return t;
}

template <class S>
S pair_delta_types(const SmallGraph& F, const Graph& g, const S& p, int i, int j) {
  const S ind[2] = {-p, S(1) - p};
  if (F.k == 2) {
    S x[1] = {S(0)};
    return anchored_placement_sum<S>(F, x);
  }
  const TypeSets t = split_by_type(g, i, j);
  if (F.k == 3) {
    S total = S(0);
    S x[3];
    for (int c = 0; c < 4; ++c) {
      if (t.size[c] == 0) continue;
      x[pair_index(0, 2)] = ind[c >> 1];
      x[pair_index(1, 2)] = ind[c & 1];
      total += scalar_from_int<S>(t.size[c]) * anchored_placement_sum<S>(F, x);
    }
    return total;
  }
  // k == 4: ordered pairs (w,z) of distinct other vertices by type and adjacency
  std::array<std::array<std::int64_t, 4>, 4> adjacent{};
  const int words = g.words_per_row();
  for (int c = 0; c < 4; ++c) {
    for (int w = 0; w < words; ++w) {
      std::uint64_t bits = t.bits[c][w];
      while (bits) {
        const int v = w * 64 + std::countr_zero(bits);
        bits &= bits - 1;
        auto rv = g.row(v);
        for (int d = 0; d < 4; ++d) {
          std::int64_t cnt = 0;
          for (int u = 0; u < words; ++u) cnt += std::popcount(rv[u] & t.bits[d][u]);
          adjacent[c][d] += cnt;
        }
      }
    }
  }
  S total = S(0);
  S x[6];
  for (int c = 0; c < 4; ++c) {
    for (int d = 0; d < 4; ++d) {
      const std::int64_t pairs = t.size[c] * t.size[d] - (c == d ? t.size[c] : 0);
      const std::int64_t counts[2] = {pairs - adjacent[c][d], adjacent[c][d]};
      x[pair_index(0, 2)] = ind[c >> 1];
      x[pair_index(1, 2)] = ind[c & 1];
      x[pair_index(0, 3)] = ind[d >> 1];
      x[pair_index(1, 3)] = ind[d & 1];
      for (int a = 0; a < 2; ++a) {
        if (counts[a] == 0) continue;
        x[pair_index(2, 3)] = ind[a];
        total += scalar_from_int<S>(counts[a]) * anchored_placement_sum<S>(F, x);
      }
    }
  }
  // every unordered {w,z} was seen twice
  return total / scalar_from_int<S>(2);
}

}  // namespace

template <class S>
S pair_delta(const SmallGraph& F, const Graph& g, const S& p, int i, int j) {
  const int n = g.order();
  if (i == j || i < 0 || j < 0 || i >= n || j >= n) {
    throw Error(ErrorKind::kInvalidArgument, "pair_delta needs two distinct vertices");
  }
  if (F.k < 2 || F.k > n) return S(0);
  if (F.k <= 4) return pair_delta_types<S>(F, g, p, i, j);
  return pair_delta_direct<S>(F, g, p, i, j);
}

DecompositionCoefficients decomposition_coefficients(const SmallGraph& H, int n) {
  const int k = H.k;
  if (k < 2 || k > kMaxClassOrder) {
    throw Error(ErrorKind::kUnsupported, "decomposition needs 2 <= v(H) <= 5");
  }
  if (n < k) throw Error(ErrorKind::kInvalidArgument, "n must be at least v(H)");
  const auto& cat = Catalog::instance();
  const int pairs = k * (k - 1) / 2;
  const std::uint32_t all = (pairs == 32) ? ~0U : ((1U << pairs) - 1);
  const auto orbit = cat.orbit(H);

  DecompositionCoefficients out;
  out.H = H;
  out.n = n;

  auto monomial = [](int a, int b) {
    return Polynomial::binomial_power(0, 1, a) * Polynomial::binomial_power(1, -1, b);
  };

  {
    std::map<int, std::int64_t> tally;  // by edge count
    for (std::uint32_t h : orbit) ++tally[std::popcount(h)];
    Polynomial c;
    for (auto [e, cnt] : tally) {
      Polynomial term = monomial(e, pairs - e);
      term *= Rational(cnt);
      c += term;
    }
    c *= make_rational(binomial(n, k), 1);
    out.constant = c;
  }

  const Family fam = family_Fk(k);
  for (const auto& F : fam.members) {
    const std::uint32_t t0 = F.mask;  // labeled copy on slots 0..v(F)-1
    std::map<std::tuple<int, int, int>, std::int64_t> tally;
    for (std::uint32_t h : orbit) {
      const std::uint32_t hbar = all & ~h;
      const int a = std::popcount(h & ~t0);
      const int b = std::popcount(hbar & ~t0);
      const int c = std::popcount(t0 & hbar);
      ++tally[{a, b, c}];
    }
    Polynomial coeff;
    for (const auto& [key, cnt] : tally) {
      const auto [a, b, c] = key;
      Polynomial term = monomial(a, b);
      term *= Rational((c & 1) ? -cnt : cnt);
      coeff += term;
    }
    coeff *= make_rational(binomial(n - F.k, k - F.k), 1);
    out.members.push_back(F);
    out.coefficients.push_back(std::move(coeff));
  }
  return out;
}

template <class S>
S decomposition_residual(const DecompositionCoefficients& dc, std::int64_t induced_count,
                         const SignedStats<S>& stats, const S& p) {
  S predicted = dc.constant.evaluate<S>(p);
  for (std::size_t i = 0; i < dc.members.size(); ++i) {
    if (dc.coefficients[i].is_zero()) continue;
    predicted += dc.coefficients[i].evaluate<S>(p) * stats.value(dc.members[i]);
  }
  return scalar_from_int<S>(induced_count) - predicted;
}

template <class S>
S decomposition_residual(const DecompositionCoefficients& dc, const Graph& g, const S& p) {
  if (g.order() != dc.n) {
    throw Error(ErrorKind::kInvalidArgument, "graph order does not match coefficients");
  }
  const auto census = induced_census(g, dc.H.k);
  const auto stats = signed_stats<S>(g, family_Fk(dc.H.k), p);
  return decomposition_residual<S>(dc, census.count(dc.H), stats, p);
}

int edge_square_weight(const SmallGraph& F) {
  std::vector<std::pair<int, int>> es;
  for (int b = 1; b < F.k; ++b) {
    for (int a = 0; a < b; ++a) {
      if (F.has_edge(a, b)) es.emplace_back(a, b);
    }
  }
  const unsigned full = (1U << F.k) - 1;
  int alpha = 0;
  for (const auto& e : es) {
    for (const auto& f : es) {
      const unsigned cover = (1U << e.first) | (1U << e.second) | (1U << f.first) | (1U << f.second);
      if (cover == full) ++alpha;
    }
  }
  return alpha;
}

template <class S>
QuadraticIdentityReport<S> quadratic_identities_check(const Graph& g, const S& p) {
  const int n = g.order();
  if (n < 4) throw Error(ErrorKind::kInvalidArgument, "quadratic identities need n >= 4");
  const auto& cat = Catalog::instance();
  QuadraticIdentityReport<S> out;

  std::int64_t weighted = 0;
  for (int k = 2; k <= 4; ++k) {
    const auto census = induced_census(g, k);
    const auto classes = cat.classes(k);
    for (std::size_t c = 0; c < classes.size(); ++c) {
      weighted += edge_square_weight(classes[c]) * census.counts[c];
    }
  }
  const std::int64_t e = g.edge_count();
  out.edge_square_residual = scalar_from_int<S>(e) * scalar_from_int<S>(e) - scalar_from_int<S>(weighted);

  const S pairs = scalar_from_int<S>(choose2(n));
  out.s_k2 = scalar_from_int<S>(e) - p * pairs;
  out.s_p2 = signed_sum<S>(*cat.find("P2"), g, p);
  out.s_2k2 = signed_sum<S>(*cat.find("2K2"), g, p);
  const S two = scalar_from_int<S>(2);
  const S rhs = p * (S(1) - p) * pairs + (S(1) - two * p) * out.s_k2 + two * out.s_p2 +
                two * out.s_2k2;
  out.signed_residual = out.s_k2 * out.s_k2 - rhs;
  return out;
}

#define QUASIRAND_INSTANTIATE(S)                                                                  \
  template S signed_sum_direct<S>(const SmallGraph&, const Graph&, const S&);                     \
  template S signed_sum_from_census<S>(const SmallGraph&, const CensusResult&, const S&);         \
  template S signed_sum<S>(const SmallGraph&, const Graph&, const S&, std::int64_t);              \
  template struct SignedStats<S>;                                                                 \
  template SignedStats<S> signed_stats<S>(const Graph&, const Family&, const S&);                 \
  template S pair_delta_direct<S>(const SmallGraph&, const Graph&, const S&, int, int);           \
  template S pair_delta<S>(const SmallGraph&, const Graph&, const S&, int, int);                  \
  template S anchored_placement_sum<S>(const SmallGraph&, const S*);                              \
  template S decomposition_residual<S>(const DecompositionCoefficients&, const Graph&, const S&); \
  template S decomposition_residual<S>(const DecompositionCoefficients&, std::int64_t,            \
                                       const SignedStats<S>&, const S&);                          \
  template QuadraticIdentityReport<S> quadratic_identities_check<S>(const Graph&, const S&);

QUASIRAND_INSTANTIATE(double)
QUASIRAND_INSTANTIATE(Rational)

#undef QUASIRAND_INSTANTIATE

}  // namespace quasirand

namespace quasirand {

PairDeltaBatch::PairDeltaBatch(Family family, double p) : family_(std::move(family)), p_(p) {
  for (std::size_t f = 0; f < family_.members.size(); ++f) {
    members_of_order_[family_.members[f].k].push_back(static_cast<int>(f));
  }
  const double ind[2] = {-p, 1.0 - p};
  for (int v = 2; v <= kMaxClassOrder; ++v) {
    const auto& idx = members_of_order_[v];
    if (idx.empty()) continue;
    const int others = v * (v - 1) / 2 - 1;
    const std::uint32_t masks = 1U << others;
    tables_[v].assign(static_cast<std::size_t>(masks) * idx.size(), 0.0);
    double x[10];
    for (std::uint32_t m = 0; m < masks; ++m) {
      x[0] = 0.0;
      for (int b = 0; b < others; ++b) x[b + 1] = ind[(m >> b) & 1U];
      for (std::size_t t = 0; t < idx.size(); ++t) {
        tables_[v][m * idx.size() + t] = anchored_placement_sum<double>(family_.members[idx[t]], x);
      }
    }
  }
}

std::uint32_t PairDeltaBatch::context_mask(const Graph& g, const int* slots, int v) const {
  std::uint32_t m = 0;
  for (int b = 2; b < v; ++b) {
    for (int a = 0; a < b; ++a) {
      if (g.has_edge(slots[a], slots[b])) m |= 1U << (pair_index(a, b) - 1);
    }
  }
  return m;
}

std::vector<double> PairDeltaBatch::exact(const Graph& g, int i, int j) const {
  const int n = g.order();
  if (i == j || i < 0 || j < 0 || i >= n || j >= n) {
    throw Error(ErrorKind::kInvalidArgument, "pair delta needs two distinct vertices");
  }
  std::vector<double> out(family_.members.size(), 0.0);
  auto accumulate = [&](int v, std::uint32_t mask, double weight) {
    const auto& idx = members_of_order_[v];
    const double* row = tables_[v].data() + mask * idx.size();
    for (std::size_t t = 0; t < idx.size(); ++t) out[idx[t]] += weight * row[t];
  };
  if (!members_of_order_[2].empty()) accumulate(2, 0, 1.0);
  if (n < 3) return out;

  const TypeSets types = split_by_type(g, i, j);
  // type index c = 2*A_iw + A_jw; context bits: 02 -> bit 0, 12 -> bit 1
  auto type_bits = [](int c) { return static_cast<std::uint32_t>((c >> 1) | ((c & 1) << 1)); };
  if (!members_of_order_[3].empty()) {
    for (int c = 0; c < 4; ++c) {
      if (types.size[c]) accumulate(3, type_bits(c), static_cast<double>(types.size[c]));
    }
  }
  if (n >= 4 && !members_of_order_[4].empty()) {
    const int words = g.words_per_row();
    std::array<std::array<std::int64_t, 4>, 4> adjacent{};
    for (int c = 0; c < 4; ++c) {
      for (int w = 0; w < words; ++w) {
        std::uint64_t bits = types.bits[c][w];
        while (bits) {
          const int v = w * 64 + std::countr_zero(bits);
          bits &= bits - 1;
          auto rv = g.row(v);
          for (int d = 0; d < 4; ++d) {
            std::int64_t cnt = 0;
            for (int u = 0; u < words; ++u) cnt += std::popcount(rv[u] & types.bits[d][u]);
            adjacent[c][d] += cnt;
          }
        }
      }
    }
    for (int c = 0; c < 4; ++c) {
      for (int d = 0; d < 4; ++d) {
        const std::int64_t pairs = types.size[c] * types.size[d] - (c == d ? types.size[c] : 0);
        const std::int64_t counts[2] = {pairs - adjacent[c][d], adjacent[c][d]};
        for (int a = 0; a < 2; ++a) {
          if (counts[a] == 0) continue;
          const std::uint32_t mask = type_bits(c) | (type_bits(d) << 2) | (static_cast<std::uint32_t>(a) << 4);
          accumulate(4, mask, 0.5 * static_cast<double>(counts[a]));
        }
      }
    }
  }
  if (n >= 5 && !members_of_order_[5].empty()) {
    std::vector<int> pool;
    for (int v = 0; v < n; ++v) {
      if (v != i && v != j) pool.push_back(v);
    }
    int slots[5] = {i, j, 0, 0, 0};
    for_each_subset(pool, 3, [&](const std::vector<int>& rest) {
      slots[2] = rest[0];
      slots[3] = rest[1];
      slots[4] = rest[2];
      accumulate(5, context_mask(g, slots, 5), 1.0);
    });
  }
  return out;
}

std::vector<double> PairDeltaBatch::sampled(const Graph& g, int i, int j, int samples,
                                            std::mt19937_64& rng) const {
  const int n = g.order();
  if (i == j || i < 0 || j < 0 || i >= n || j >= n) {
    throw Error(ErrorKind::kInvalidArgument, "pair delta needs two distinct vertices");
  }
  if (samples <= 0) throw Error(ErrorKind::kInvalidArgument, "sample count must be positive");
  std::vector<double> out(family_.members.size(), 0.0);
  for (std::size_t t = 0; t < members_of_order_[2].size(); ++t) {
    out[members_of_order_[2][t]] = tables_[2][t];
  }
  if (n >= 3 && !members_of_order_[3].empty()) {
    int slots[3] = {i, j, 0};
    std::vector<double> acc(members_of_order_[3].size(), 0.0);
    for (int w = 0; w < n; ++w) {
      if (w == i || w == j) continue;
      slots[2] = w;
      const auto mask = context_mask(g, slots, 3);
      for (std::size_t t = 0; t < acc.size(); ++t) acc[t] += tables_[3][mask * acc.size() + t];
    }
    for (std::size_t t = 0; t < acc.size(); ++t) out[members_of_order_[3][t]] = acc[t];
  }
  const std::uint64_t range = static_cast<std::uint64_t>(n - 2);
  const int lo = std::min(i, j);
  const int hi = std::max(i, j);
  auto pick = [&] {
    // multiply-shift range reduction, then skip i and j
    int w = static_cast<int>((static_cast<unsigned __int128>(rng()) * range) >> 64);
    if (w >= lo) ++w;
    if (w >= hi) ++w;
    return w;
  };
  for (int v = 4; v <= kMaxClassOrder; ++v) {
    const auto& idx = members_of_order_[v];
    if (idx.empty() || n < v) continue;
    std::vector<double> acc(idx.size(), 0.0);
    std::vector<std::int64_t> hits(std::size_t{1} << (v * (v - 1) / 2 - 1), 0);
    int slots[kMaxClassOrder] = {i, j, 0, 0, 0};
    for (int s = 0; s < samples; ++s) {
      for (int t = 2; t < v; ++t) {
        while (true) {
          const int w = pick();
          bool fresh = true;
          for (int u = 2; u < t; ++u) fresh &= slots[u] != w;
          if (fresh) {
            slots[t] = w;
            break;
          }
        }
      }
      ++hits[context_mask(g, slots, v)];
    }
    for (std::size_t m = 0; m < hits.size(); ++m) {
      if (!hits[m]) continue;
      for (std::size_t t = 0; t < idx.size(); ++t) {
        acc[t] += static_cast<double>(hits[m]) * tables_[v][m * idx.size() + t];
      }
    }
    const double scale = static_cast<double>(binomial(n - 2, v - 2)) / samples;
    for (std::size_t t = 0; t < idx.size(); ++t) out[idx[t]] = acc[t] * scale;
  }
  return out;
}

}  // namespace quasirand
