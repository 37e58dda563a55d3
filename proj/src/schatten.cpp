#include "quasirand/schatten.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "quasirand/error.hpp"
#include "quasirand/parallel.hpp"

#include <omp.h>

namespace quasirand {

namespace {

void require_even(int s, int least, const char* what) {
  if (s < least || s % 2) {
    throw Error(ErrorKind::kUnsupported, std::string(what) + " must be even and at least " +
                                             std::to_string(least) + ", got " + std::to_string(s));
  }
}

void require_probability(double p) {
  if (!(p > 0 && p < 1)) throw Error(ErrorKind::kInvalidArgument, "p must lie in (0,1)");
}

// n^e, saturating just above cap
std::int64_t bounded_power(std::int64_t n, int e, std::int64_t cap) {
  std::int64_t r = 1;
  for (int i = 0; i < e; ++i) {
    if (n != 0 && r > cap / n) return cap + 1;
    r *= n;
  }
  return r;
}

// Neumaier summation in long double
struct Compensated {
  long double sum = 0;
  long double c = 0;
  void add(long double x) {
    const long double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x)) {
      c += (sum - t) + x;
    } else {
      c += (x - t) + sum;
    }
    sum = t;
  }
  long double value() const { return sum + c; }
};

}  // namespace

Eigen::MatrixXd shifted_matrix(const Graph& g, double p) {
  const int n = g.order();
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, i) = g.has_loop(i) ? 1 - p : -p;
    for (int j = i + 1; j < n; ++j) m(i, j) = m(j, i) = g.has_edge(i, j) ? 1 - p : -p;
  }
  return m;
}

double shifted_trace(const Graph& g, double p, int s) {
  require_even(s, 2, "Schatten exponent");
  Eigen::setNbThreads(worker_count());
  const Eigen::MatrixXd m = shifted_matrix(g, p);
  // half = M^{s/2} by binary powering
  int e = s / 2;
  Eigen::MatrixXd half = Eigen::MatrixXd::Identity(g.order(), g.order());
  Eigen::MatrixXd base = m;
  bool first = true;
  while (e > 0) {
    if (e & 1) {
      if (first) {
        half = base;
        first = false;
      } else {
        half = (half * base).eval();
      }
    }
    e >>= 1;
    if (e > 0) base = (base * base).eval();
  }
  return half.squaredNorm();
}

double schatten_norm(const Graph& g, double p, int s) {
  require_even(s, 4, "Schatten exponent");
  require_probability(p);
  const int n = g.order();
  if (n == 0) throw Error(ErrorKind::kInvalidArgument, "graph has no vertices");
  return std::pow(shifted_trace(g, p, s), 1.0 / s) / n;
}

double schatten_norm_bruteforce(const Graph& g, double p, int s, std::int64_t cap) {
  require_even(s, 4, "Schatten exponent");
  require_probability(p);
  const int n = g.order();
  if (n == 0) throw Error(ErrorKind::kInvalidArgument, "graph has no vertices");
  if (bounded_power(n, s, cap) > cap) {
    throw Error(ErrorKind::kWorkCap, "n^s exceeds the map-sum work cap",
                nlohmann::json{{"n", n}, {"s", s}, {"cap", cap}});
  }
  const Eigen::MatrixXd m = shifted_matrix(g, p);
  const int workers = worker_count();
  std::vector<Compensated> partial(workers);
#pragma omp parallel for schedule(static) num_threads(workers)
  for (int start = 0; start < n; ++start) {
    auto& acc = partial[omp_get_thread_num()];
    // walk[0] = start; prefix[d] = product of the first d steps
    std::vector<int> walk(s, 0);
    std::vector<long double> prefix(s, 1);
    walk[0] = start;
    int d = 1;
    walk[1] = -1;
    while (d >= 1) {
      if (++walk[d] >= n) {
        --d;
        continue;
      }
      prefix[d] = prefix[d - 1] * m(walk[d - 1], walk[d]);
      if (d == s - 1) {
        acc.add(prefix[d] * m(walk[d], start));
      } else {
        ++d;
        walk[d] = -1;
      }
    }
  }
  Compensated total;
  for (const auto& c : partial) total.add(c.value());
  const long double tr = total.value();
  return static_cast<double>(std::pow(std::max(tr, 0.0L), 1.0L / s) / n);
}

double bipartite_sum(const Graph& g, double p, int a, int b, std::int64_t cap) {
  require_even(a, 2, "bipartite side");
  require_even(b, 2, "bipartite side");
  require_probability(p);
  const int n = g.order();
  const int small = std::min(a, b);
  const int large = std::max(a, b);
  if (bounded_power(n, small + 1, cap) > cap) {
    throw Error(ErrorKind::kWorkCap, "n^{min(a,b)+1} exceeds the bipartite work cap; use smaller n",
                nlohmann::json{{"n", n}, {"a", a}, {"b", b}, {"cap", cap}});
  }
  if (n == 0) return 0;
  const Eigen::MatrixXd m = shifted_matrix(g, p);
  const int workers = worker_count();
  std::vector<Compensated> partial(workers);
#pragma omp parallel for schedule(static) num_threads(workers)
  for (int first = 0; first < n; ++first) {
    auto& acc = partial[omp_get_thread_num()];
    // rows[d][v] = prod_{t <= d} M(phi_t, v)
    std::vector<std::vector<long double>> rows(small, std::vector<long double>(n));
    std::vector<int> phi(small, -1);
    for (int v = 0; v < n; ++v) rows[0][v] = m(first, v);
    phi[0] = first;
    auto close = [&](const std::vector<long double>& r) {
      long double inner = 0;
      for (int v = 0; v < n; ++v) inner += r[v];
      acc.add(std::pow(inner, large));
    };
    int d = 1;
    while (d >= 1) {
      if (++phi[d] >= n) {
        phi[d] = -1;
        --d;
        continue;
      }
      for (int v = 0; v < n; ++v) rows[d][v] = rows[d - 1][v] * m(phi[d], v);
      if (d == small - 1) {
        close(rows[d]);
      } else {
        ++d;
      }
    }
  }
  Compensated total;
  for (const auto& c : partial) total.add(c.value());
  return static_cast<double>(total.value());
}

double bipartite_norm(const Graph& g, double p, int a, int b, std::int64_t cap) {
  const int n = g.order();
  if (n == 0) throw Error(ErrorKind::kInvalidArgument, "graph has no vertices");
  const double x = bipartite_sum(g, p, a, b, cap);
  return std::pow(std::max(x, 0.0), 1.0 / (a + b)) / n;
}

double schatten_formula(int n, double p, int s) {
  require_even(s, 4, "Schatten exponent");
  const double k = s / 2.0;
  const double q = p * (1 - p);
  return std::min(q, std::sqrt(q) * std::pow(static_cast<double>(n), -(k - 1) / (2 * k)));
}

nlohmann::json NormConstructionReport::to_json() const {
  nlohmann::json j{{"n", n}, {"p", p}, {"seed", seed}, {"empty", empty}, {"loop_random", loop_random}};
  if (sides) {
    j["a"] = sides->first;
    j["b"] = sides->second;
  } else {
    j["s"] = s;
  }
  j["formula"] = formula ? nlohmann::json(*formula) : nlohmann::json(nullptr);
  if (formula) {
    j["ratio_empty"] = empty / *formula;
    j["ratio_loop_random"] = loop_random / *formula;
  }
  return j;
}

NormConstructionReport norm_constructions(int n, double p, int s, std::uint64_t seed) {
  NormConstructionReport r;
  r.n = n;
  r.p = p;
  r.s = s;
  r.seed = seed;
  r.empty = schatten_norm(Graph(n, true), p, s);
  r.loop_random = schatten_norm(sample_gnp(n, EdgeProbability::from_double(p), Seed{seed}, true), p, s);
  r.formula = schatten_formula(n, p, s);
  return r;
}

NormConstructionReport norm_constructions(int n, double p, int a, int b, std::uint64_t seed) {
  NormConstructionReport r;
  r.n = n;
  r.p = p;
  r.sides = std::make_pair(a, b);
  r.seed = seed;
  r.empty = bipartite_norm(Graph(n, true), p, a, b);
  r.loop_random =
      bipartite_norm(sample_gnp(n, EdgeProbability::from_double(p), Seed{seed}, true), p, a, b);
  return r;
}

}  // namespace quasirand
