#include "quasirand/oracle.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <numeric>
#include <string>

#include "quasirand/catalog.hpp"
#include "quasirand/census.hpp"
#include "quasirand/error.hpp"
#include "quasirand/graph_io.hpp"
#include "quasirand/parallel.hpp"
#include "quasirand/schatten.hpp"

#include <omp.h>

namespace quasirand {

namespace {

constexpr int kMaxUkOrder = 7;
constexpr int kMaxSchattenOrder = 5;
constexpr int kMaxProportionalOrder = 10;

mpz_class mpz_pow(const mpz_class& base, unsigned e) {
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

Graph graph_from_pair_mask(int n, std::uint64_t mask) {
  Graph g(n);
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < j; ++i)
      if ((mask >> pair_index(i, j)) & 1U) g.set_edge(i, j, true);
  return g;
}

// Census of every labeled graph on n <= 7 vertices from its pair mask.
class MaskCensus {
 public:
  MaskCensus(int n, int k) : n_(n), k_(k) {
    const auto& cat = Catalog::instance();
    const int m = k * (k - 1) / 2;
    lookup_.resize(std::size_t{1} << m);
    for (std::uint32_t s = 0; s < lookup_.size(); ++s) lookup_[s] = cat.index_of(k, s);
    classes_ = cat.classes(k).size();
    std::vector<int> pick(k);
    std::iota(pick.begin(), pick.end(), 0);
    while (true) {
      for (int t = 1; t < k; ++t)
        for (int s = 0; s < t; ++s) pairs_.push_back(pair_index(pick[s], pick[t]));
      int i = k - 1;
      while (i >= 0 && pick[i] == n - k + i) --i;
      if (i < 0) break;
      ++pick[i];
      for (int j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
  }

  std::size_t classes() const { return classes_; }

  void count(std::uint64_t mask, std::int64_t* out) const {
    std::fill(out, out + classes_, 0);
    const std::size_t m = k_ * (k_ - 1) / 2;
    if (m == 0) {
      out[0] = binomial(n_, k_);
      return;
    }
    for (std::size_t off = 0; off < pairs_.size(); off += m) {
      std::uint32_t sub = 0;
      for (std::size_t b = 0; b < m; ++b) sub |= static_cast<std::uint32_t>((mask >> pairs_[off + b]) & 1U) << b;
      ++out[lookup_[sub]];
    }
  }

 private:
  int n_;
  int k_;
  std::size_t classes_ = 0;
  std::vector<int> lookup_;
  std::vector<int> pairs_;  // C(k,2) host pair slots per k-subset
};

// max over classes F of order j of sum_{F'} N(F, F') with v(F') = j+1
std::int64_t step_up_constant(int j) {
  const auto& cat = Catalog::instance();
  std::int64_t best = 0;
  for (const auto& f : cat.classes(j)) {
    std::int64_t sum = 0;
    for (const auto& h : cat.classes(j + 1)) sum += count_induced_small(f, h);
    best = std::max(best, sum);
  }
  return best;
}

struct Best {
  mpz_class value;
  std::uint64_t mask = 0;
  bool set = false;
  bool better(const mpz_class& v, std::uint64_t m) const {
    return !set || v < value || (v == value && m < mask);
  }
};

// Scan one edge-count level. Int is std::int64_t or mpz_class.
template <class Int>
void scan_level(int pairs, int e, const MaskCensus& census, const std::vector<Int>& expected,
                const Int& scale, Best& best, std::uint64_t& evaluated) {
  const std::uint64_t total = std::uint64_t{1} << pairs;
  const int workers = worker_count();
  std::vector<Best> local(workers);
  std::vector<std::uint64_t> seen(workers, 0);
#pragma omp parallel num_threads(workers)
  {
    const int tid = omp_get_thread_num();
    std::vector<std::int64_t> counts(census.classes());
    auto& mine = local[tid];
    Int worst_best = 0;
    bool have = false;
#pragma omp for schedule(static)
    for (std::uint64_t mask = 0; mask < total; ++mask) {
      if (std::popcount(mask) != e) continue;
      ++seen[tid];
      census.count(mask, counts.data());
      Int worst = 0;
      for (std::size_t c = 0; c < counts.size(); ++c) {
        Int d = Int(counts[c]) * scale - expected[c];
        if (d < 0) d = -d;
        if (d > worst) worst = d;
      }
      if (!have || worst < worst_best) {
        worst_best = worst;
        have = true;
        mine.value = mpz_class(worst);
        mine.mask = mask;
        mine.set = true;
      }
    }
  }
  for (int t = 0; t < workers; ++t) {
    evaluated += seen[t];
    if (local[t].set && best.better(local[t].value, local[t].mask)) best = local[t];
  }
}

}  // namespace

Rational exact_probability(const EdgeProbability& p) {
  if (p.is_exact()) return p.exact();
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), p.value());
  const std::string text(buf, res.ptr);
  const auto e = text.find_first_of("eE");
  const std::string digits = text.substr(0, e);
  const int exponent = e == std::string::npos ? 0 : std::stoi(text.substr(e + 1));
  const auto dot = digits.find('.');
  std::string whole = digits;
  int frac = 0;
  if (dot != std::string::npos) {
    whole = digits.substr(0, dot) + digits.substr(dot + 1);
    frac = static_cast<int>(digits.size() - dot - 1);
  }
  Rational r{mpz_class(whole, 10)};
  const int shift = exponent - frac;
  if (shift > 0) r *= mpz_pow(10, shift);
  if (shift < 0) r /= mpz_pow(10, -shift);
  r.canonicalize();
  return r;
}

nlohmann::json UkMinimum::to_json() const {
  return {{"n", n},
          {"k", k},
          {"p", p.get_str()},
          {"min", value.get_d()},
          {"min_exact", value.get_str()},
          {"witness", to_graph6(witness)},
          {"witness_edges", witness.edge_count()},
          {"evaluated", evaluated},
          {"pruned", pruned}};
}

UkMinimum minimize_u_k(int n, const EdgeProbability& prob, int k) {
  if (n < 1 || n > kMaxUkOrder) {
    throw Error(ErrorKind::kWorkCap, "exhaustive u_k search supports 1 <= n <= 7",
                nlohmann::json{{"n", n}, {"max_n", kMaxUkOrder}});
  }
  if (k < 1 || k > std::min(n, kMaxClassOrder)) {
    throw Error(ErrorKind::kUnsupported, "k must lie in [1, min(n,5)]",
                nlohmann::json{{"n", n}, {"k", k}});
  }
  const Rational p = exact_probability(prob);
  if (p <= 0 || p >= 1) throw Error(ErrorKind::kInvalidArgument, "p must lie in (0,1)");
  const mpz_class a = p.get_num();
  const mpz_class b = p.get_den();
  const int m = k * (k - 1) / 2;
  const int pairs = n * (n - 1) / 2;
  const std::int64_t subsets = binomial(n, k);
  const mpz_class scale = mpz_pow(b, m);

  const auto& cat = Catalog::instance();
  const auto classes = cat.classes(k);
  std::vector<mpz_class> expected;
  for (const auto& h : classes) {
    const auto orbit = static_cast<long>(cat.orbit(h).size());
    expected.push_back(mpz_class(subsets) * orbit * mpz_pow(a, h.edges()) *
                       mpz_pow(b - a, m - h.edges()));
  }

  // u_k >= u_2 * prod_{j=2}^{k-1} (n-j) / M_j
  mpz_class lb_num = 1;
  mpz_class lb_den = 1;
  for (int j = 2; j < k; ++j) {
    lb_num *= n - j;
    lb_den *= step_up_constant(j);
  }

  std::vector<int> levels(pairs + 1);
  std::iota(levels.begin(), levels.end(), 0);
  auto gap = [&](int e) { return mpz_class(abs(mpz_class(e) * b - a * pairs)); };
  std::stable_sort(levels.begin(), levels.end(), [&](int x, int y) { return gap(x) < gap(y); });

  const MaskCensus census(n, k);
  const bool small = mpz_class(scale * subsets * 2) < mpz_class("4611686018427387904");
  std::vector<std::int64_t> expected64;
  if (small) {
    for (const auto& x : expected) expected64.push_back(x.get_si());
  }

  Best best;
  std::uint64_t evaluated = 0;
  for (int e : levels) {
    // scaled u_2 = gap / b, scaled u_k = dev / b^m
    if (best.set && k >= 2 && gap(e) * mpz_pow(b, m - 1) * lb_num > best.value * lb_den) break;
    if (small) {
      scan_level<std::int64_t>(pairs, e, census, expected64, scale.get_si(), best, evaluated);
    } else {
      scan_level<mpz_class>(pairs, e, census, expected, scale, best, evaluated);
    }
  }

  UkMinimum out;
  out.n = n;
  out.k = k;
  out.p = p;
  out.value = Rational(best.value, scale);
  out.value.canonicalize();
  out.witness_mask = best.mask;
  out.witness = graph_from_pair_mask(n, best.mask);
  out.evaluated = evaluated;
  out.pruned = (std::uint64_t{1} << pairs) - evaluated;
  return out;
}

nlohmann::json SchattenMinimum::to_json() const {
  return {{"n", n}, {"p", p}, {"s", s}, {"min", value}, {"witness", to_loopgraph(witness)}};
}

SchattenMinimum minimize_schatten(int n, double p, int s) {
  if (n < 1 || n > kMaxSchattenOrder) {
    throw Error(ErrorKind::kWorkCap, "exhaustive Schatten search supports 1 <= n <= 5",
                nlohmann::json{{"n", n}, {"max_n", kMaxSchattenOrder}});
  }
  const int pairs = n * (n - 1) / 2;
  const std::uint64_t total = std::uint64_t{1} << (pairs + n);
  auto build = [&](std::uint64_t mask) {
    Graph g = graph_from_pair_mask(n, mask & ((std::uint64_t{1} << pairs) - 1));
    Graph h(n, true);
    for (const auto& e : g.edges()) h.set_edge(e.u, e.v, true);
    for (int v = 0; v < n; ++v) h.set_loop(v, (mask >> (pairs + v)) & 1U);
    return h;
  };
  std::vector<double> value(total);
  for (std::uint64_t mask = 0; mask < total; ++mask) value[mask] = schatten_norm(build(mask), p, s);
  std::uint64_t arg = 0;
  for (std::uint64_t mask = 1; mask < total; ++mask) {
    if (value[mask] < value[arg] * (1 - 1e-12)) arg = mask;
  }
  SchattenMinimum out;
  out.n = n;
  out.p = p;
  out.s = s;
  out.value = value[arg];
  out.witness = build(arg);
  out.witness_mask = arg;
  return out;
}

namespace {

// Graph with prescribed degrees and triangle count, by pair-order search.
class DegreeSearch {
 public:
  DegreeSearch(std::vector<int> degrees, std::int64_t triangles)
      : n_(static_cast<int>(degrees.size())), rem_(std::move(degrees)), target_(triangles),
        adj_(n_, 0) {}

  std::optional<Graph> run() {
    if (!step(0, 1, 0)) return std::nullopt;
    Graph g(n_);
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j)
        if ((adj_[i] >> j) & 1U) g.set_edge(i, j, true);
    return g;
  }

 private:
  bool step(int i, int j, std::int64_t tri) {
    if (j >= n_) {
      if (rem_[i] != 0) return false;
      ++i;
      j = i + 1;
      if (i >= n_ - 1) return (i < n_ ? rem_[i] == 0 : true) && tri == target_;
    }
    const int row_left = n_ - 1 - j;
    // j still meets rows i+1..j-1 and its own row
    const int col_left = (j - 1 - i) + (n_ - 1 - j);
    if (rem_[i] > 0 && rem_[j] > 0) {
      const std::int64_t added = std::popcount(adj_[i] & adj_[j]);
      if (tri + added <= target_) {
        adj_[i] |= 1U << j;
        adj_[j] |= 1U << i;
        --rem_[i];
        --rem_[j];
        if (rem_[i] <= row_left && step(i, j + 1, tri + added)) return true;
        ++rem_[i];
        ++rem_[j];
        adj_[i] &= ~(1U << j);
        adj_[j] &= ~(1U << i);
      }
    }
    if (rem_[i] <= row_left && rem_[j] <= col_left) return step(i, j + 1, tri);
    return false;
  }

  int n_;
  std::vector<int> rem_;
  std::int64_t target_;
  std::vector<std::uint32_t> adj_;
};

bool erdos_gallai(const std::vector<int>& d) {
  const int n = static_cast<int>(d.size());
  std::int64_t left = 0;
  for (int r = 1; r <= n; ++r) {
    left += d[r - 1];
    std::int64_t right = static_cast<std::int64_t>(r) * (r - 1);
    for (int t = r; t < n; ++t) right += std::min(d[t], r);
    if (left > right) return false;
  }
  return true;
}

// Non-increasing sequences with the given sum and sum of C(d,2).
void degree_sequences(int n, int sum, std::int64_t cherries, std::vector<int>& cur,
                      std::vector<std::vector<int>>& out) {
  const int pos = static_cast<int>(cur.size());
  if (pos == n) {
    if (sum == 0 && cherries == 0 && erdos_gallai(cur)) out.push_back(cur);
    return;
  }
  const int cap = pos ? cur.back() : n - 1;
  for (int d = std::min(cap, sum); d >= 0; --d) {
    const std::int64_t c = static_cast<std::int64_t>(d) * (d - 1) / 2;
    if (c > cherries) continue;
    if (static_cast<std::int64_t>(d) * (n - pos) < sum) break;
    cur.push_back(d);
    degree_sequences(n, sum - d, cherries - c, cur, out);
    cur.pop_back();
  }
}

}  // namespace

nlohmann::json ProportionalReport::to_json() const {
  nlohmann::json g = nlohmann::json::array();
  for (const auto& x : grid) g.push_back(x.get_str());
  nlohmann::json h = nlohmann::json::array();
  for (const auto& x : hits) {
    h.push_back({{"n", x.graph.order()}, {"p", x.p.get_str()}, {"graph6", to_graph6(x.graph)}});
  }
  return {{"grid", g}, {"n_max", n_max}, {"k", 3}, {"cells", cells}, {"hits", h}};
}

ProportionalReport proportional_search(const std::vector<Rational>& grid, int n_max) {
  if (n_max > kMaxProportionalOrder) {
    throw Error(ErrorKind::kWorkCap, "proportional search supports n_max <= 10",
                nlohmann::json{{"n_max", n_max}});
  }
  ProportionalReport rep;
  rep.grid = grid;
  rep.n_max = n_max;
  for (const auto& p : grid) {
    if (p <= 0 || p >= 1) throw Error(ErrorKind::kInvalidArgument, "grid values must lie in (0,1)");
  }
  for (int n = 3; n <= n_max; ++n) {
    for (const auto& p : grid) {
      const Rational m = p * binomial(n, 2);
      const Rational ch = 3 * p * p * binomial(n, 3);
      const Rational t = p * p * p * binomial(n, 3);
      nlohmann::json cell{{"n", n}, {"p", p.get_str()}};
      const bool integral = m.get_den() == 1 && ch.get_den() == 1 && t.get_den() == 1;
      cell["integral_targets"] = integral;
      bool found = false;
      if (integral) {
        std::vector<std::vector<int>> seqs;
        std::vector<int> cur;
        degree_sequences(n, static_cast<int>(2 * m.get_num().get_si()), ch.get_num().get_si(), cur, seqs);
        cell["degree_sequences"] = seqs.size();
        for (const auto& d : seqs) {
          auto g = DegreeSearch(d, t.get_num().get_si()).run();
          if (!g) continue;
          if (deviation<Rational>(*g, p, 3).u_k != 0) {
            throw Error(ErrorKind::kPrecondition, "proportional witness failed re-verification");
          }
          rep.hits.push_back({std::move(*g), p});
          found = true;
          break;
        }
      }
      cell["found"] = found;
      rep.cells.push_back(cell);
    }
  }
  return rep;
}

}  // namespace quasirand
