// Runs acceptance criteria 1-10 and prints one PASS/FAIL line per criterion.
// Pass criterion numbers as arguments to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "quasirand/catalog.hpp"
#include "quasirand/census.hpp"
#include "quasirand/error.hpp"
#include "quasirand/flip.hpp"
#include "quasirand/graph_io.hpp"
#include "quasirand/oracle.hpp"
#include "quasirand/schatten.hpp"
#include "quasirand/signed_stats.hpp"

using namespace quasirand;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Check {
 public:
  void require(bool ok, const std::string& what) {
    if (!ok) {
      ++failures_;
      if (first_.empty()) first_ = what;
    }
    ++checks_;
  }
  Outcome outcome(const std::string& summary) const {
    std::ostringstream s;
    s << summary << "; " << checks_ << " checks";
    if (failures_) s << ", " << failures_ << " failed, first: " << first_;
    return {failures_ == 0, s.str()};
  }

 private:
  int checks_ = 0;
  int failures_ = 0;
  std::string first_;
};

Graph labeled(int n, std::uint64_t mask) {
  Graph g(n);
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < j; ++i)
      if ((mask >> pair_index(i, j)) & 1U) g.set_edge(i, j, true);
  return g;
}

Graph labeled_with_loops(int n, std::uint64_t mask) {
  Graph g(n, true);
  const int pairs = n * (n - 1) / 2;
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < j; ++i)
      if ((mask >> pair_index(i, j)) & 1U) g.set_edge(i, j, true);
  for (int v = 0; v < n; ++v) g.set_loop(v, (mask >> (pairs + v)) & 1U);
  return g;
}

nlohmann::json golden(const char* name) {
  std::ifstream in(std::string(QUASIRAND_GOLDEN_DIR) + "/" + name);
  if (!in) return nullptr;
  return nlohmann::json::parse(in);
}

bool close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), 1e-300});
}

Outcome decomposition_identity() {
  Check c;
  const auto& cat = Catalog::instance();
  std::vector<DecompositionCoefficients> dcs;
  for (int k = 2; k <= 4; ++k)
    for (const auto& h : cat.classes(k)) dcs.push_back(decomposition_coefficients(h, 5));
  const auto family = family_Fk(4);
  for (const Rational& p : {Rational(1, 3), Rational(1, 2), Rational(2, 5)}) {
    for (std::uint64_t mask = 0; mask < 1024; ++mask) {
      const Graph g = labeled(5, mask);
      const auto stats = signed_stats<Rational>(g, family, p);
      std::map<int, CensusResult> census;
      for (int k = 2; k <= 4; ++k) census.emplace(k, induced_census(g, k));
      for (const auto& dc : dcs) {
        const auto r = decomposition_residual<Rational>(dc, census.at(dc.H.k).count(dc.H), stats, p);
        c.require(r == 0, "H=" + cat.name(dc.H) + " mask=" + std::to_string(mask) + " p=" + p.get_str());
      }
    }
  }
  return c.outcome("all H with v(H) <= 4, 1024 graphs on 5 vertices, p in {1/3,1/2,2/5}");
}

Outcome quadratic_identities() {
  Check c;
  const Rational p(2, 5);
  for (std::uint64_t mask = 0; mask < 1024; ++mask) {
    const auto r = quadratic_identities_check<Rational>(labeled(5, mask), p);
    c.require(r.edge_square_residual == 0 && r.signed_residual == 0, "mask=" + std::to_string(mask));
  }
  return c.outcome("1024 graphs on 5 vertices at p=2/5");
}

Outcome step_up_identity() {
  Check c;
  const auto& cat = Catalog::instance();
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 500; ++t) {
    const int n = 5 + static_cast<int>(rng() % 8);
    const Graph g = sample_gnp(n, EdgeProbability::from_double(0.2 + 0.6 * (t % 7) / 6.0), Seed{rng()});
    std::map<int, CensusResult> census;
    for (int k = 1; k <= 5; ++k) census.emplace(k, induced_census(g, k));
    for (int k = 1; k <= 4; ++k) {
      const auto lower = cat.classes(k);
      const auto upper = cat.classes(k + 1);
      for (std::size_t f = 0; f < lower.size(); ++f) {
        std::int64_t rhs = 0;
        for (std::size_t h = 0; h < upper.size(); ++h) {
          rhs += count_induced_small(lower[f], upper[h]) * census.at(k + 1).counts[h];
        }
        c.require((n - k) * census.at(k).counts[f] == rhs,
                  "F=" + cat.name(lower[f]) + " n=" + std::to_string(n));
      }
    }
  }
  return c.outcome("500 random graphs, 5 <= n <= 12, all F with v(F) <= 4");
}

Outcome u2_oracle() {
  Check c;
  for (const char* text : {"0.3", "1/2", "2/3"}) {
    const auto p = EdgeProbability::parse(text);
    for (int n = 4; n <= 7; ++n) {
      const auto r = minimize_u_k(n, p, 2);
      c.require(r.value == nearest_integer_distance_exact(n, exact_probability(p)),
                std::string("p=") + text + " n=" + std::to_string(n));
    }
  }
  return c.outcome("n in 4..7, p in {0.3, 1/2, 2/3}");
}

Outcome u4_shape() {
  Check c;
  const auto gold = golden("min_u4.json");
  c.require(!gold.is_null(), "golden file min_u4.json missing");
  double lo = 1e300;
  double hi = 0;
  std::ostringstream vals;
  for (int n = 4; n <= 7; ++n) {
    const auto r = minimize_u_k(n, EdgeProbability::from_fraction(1, 2), 4);
    c.require(r.value > 0, "v* > 0 at n=" + std::to_string(n));
    const double ratio = r.value.get_d() / (n * n);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
    vals << " n=" << n << ":" << r.value.get_str();
    if (!gold.is_null()) {
      bool matched = false;
      for (const auto& row : gold["values"]) {
        if (row["n"] == n) {
          matched = row["min"].get<std::string>() == r.value.get_str() &&
                    row["witness"].get<std::string>() == to_graph6(r.witness);
        }
      }
      c.require(matched, "golden mismatch at n=" + std::to_string(n));
    }
  }
  c.require(hi <= 4 * lo, "v*/n^2 spread above 4");
  std::ostringstream s;
  s << "min u4 at p=1/2:" << vals.str() << "; v*/n^2 spread " << hi / lo;
  return c.outcome(s.str());
}

struct RunRecord {
  int n;
  std::uint64_t seed;
  std::optional<ConstructionReport> report;
  std::string error;
};

std::vector<RunRecord>& construction_runs() {
  static std::vector<RunRecord> runs;
  if (!runs.empty()) return runs;
  for (int n : {500, 1000, 2000}) {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      ConstructOptions o;
      o.n = n;
      o.seed = seed;
      RunRecord r{n, seed, std::nullopt, ""};
      try {
        r.report = construct(o);
      } catch (const Error& e) {
        r.error = std::string(to_string(e.kind())) + ": " + e.what();
      }
      std::printf("  construct n=%d seed=%llu %s\n", n, static_cast<unsigned long long>(seed),
                  r.report ? ("ok in " + std::to_string(r.report->wall_time_s) + " s").c_str()
                           : r.error.c_str());
      std::fflush(stdout);
      runs.push_back(std::move(r));
    }
  }
  return runs;
}

Outcome construction_postconditions() {
  Check c;
  const auto p = 0.5;
  double slowest = 0;
  for (const auto& run : construction_runs()) {
    if (run.n == 500) continue;
    const std::string tag = "n=" + std::to_string(run.n) + " seed=" + std::to_string(run.seed);
    c.require(run.report.has_value(), tag + " failed: " + run.error);
    if (!run.report) continue;
    const auto& r = *run.report;
    const Graph& g = r.graph;
    const double pn = p * run.n;
    const double s_k2 = g.edge_count() - p * static_cast<double>(choose2(run.n));
    c.require(std::abs(s_k2) == nearest_integer_distance(run.n, EdgeProbability::from_fraction(1, 2)),
              tag + " |S(K2)| != D");
    const double s_p2 = signed_sum(*Catalog::instance().find("P2"), g, p);
    const double s_k3 = signed_sum(*Catalog::instance().find("K3"), g, p);
    c.require(std::abs(s_p2) < pn, tag + " |S(P2)| >= pn");
    c.require(std::abs(s_k3) < pn, tag + " |S(K3)| >= pn");
    c.require(r.log.bookkeeping_checks > 0 && r.log.bookkeeping_max_error <= 1e-7,
              tag + " bookkeeping gap");
    c.require(r.wall_time_s < 600, tag + " slower than 10 min");
    slowest = std::max(slowest, r.wall_time_s);
  }
  std::ostringstream s;
  s << "n in {1000,2000}, seeds 1-3, slowest run " << slowest << " s";
  return c.outcome(s.str());
}

Outcome scaling_band() {
  Check c;
  double lo = 1e300;
  double hi = 0;
  for (const auto& run : construction_runs()) {
    const std::string tag = "n=" + std::to_string(run.n) + " seed=" + std::to_string(run.seed);
    c.require(run.report && run.report->u_k, tag + " has no u4");
    if (!run.report || !run.report->u_k) continue;
    const double ratio = *run.report->u_k / (static_cast<double>(run.n) * run.n);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  c.require(hi <= 4 * lo, "u4/n^2 spread above 4");
  std::ostringstream s;
  s << "u4/n^2 in [" << lo << ", " << hi << "], spread " << hi / lo;
  return c.outcome(s.str());
}

Outcome moment_bounds() {
  Check c;
  const int n = 100;
  const double p = 0.3;
  const int samples = 200;
  const auto family = family_Fk(4);
  const int k = 4;
  const auto& cat = Catalog::instance();
  const std::size_t m = family.members.size();
  std::vector<double> mean(m, 0), square(m, 0), dmean(m, 0), dsquare(m, 0);
  const PairDeltaBatch batch(family, p);
  for (int s = 0; s < samples; ++s) {
    const Graph g = sample_gnp(n, EdgeProbability::from_double(p), Seed{static_cast<std::uint64_t>(1000 + s)});
    const auto stats = signed_stats<double>(g, family, p);
    const auto delta = batch.exact(g, 0, 1);
    for (std::size_t f = 0; f < m; ++f) {
      mean[f] += stats.values[f] / samples;
      square[f] += stats.values[f] * stats.values[f] / samples;
      dmean[f] += delta[f] / samples;
      dsquare[f] += delta[f] * delta[f] / samples;
    }
  }
  double worst = 0;
  for (std::size_t f = 0; f < m; ++f) {
    const auto& F = family.members[f];
    const double second = std::pow(p, F.edges()) * std::pow(n, F.k);
    const double dsecond = k * k * std::pow(p, F.edges() - 1) * std::pow(n, F.k - 2);
    const std::string name = cat.name(F);
    c.require(std::abs(mean[f]) <= 4 * std::sqrt(second / samples), name + " mean of S");
    c.require(square[f] <= second, name + " second moment of S");
    c.require(std::abs(dmean[f]) <= 4 * std::sqrt(dsecond / samples), name + " mean of S_ij");
    c.require(dsquare[f] <= dsecond, name + " second moment of S_ij");
    worst = std::max({worst, square[f] / second, dsquare[f] / dsecond});
  }
  std::ostringstream s;
  s << "G(100, 0.3), 200 samples, F in F_4; largest second moment / bound " << worst;
  return c.outcome(s.str());
}

Outcome schatten_suite() {
  Check c;
  for (int n : {10, 100}) {
    for (int s : {4, 6}) {
      for (double p : {0.1, 0.5, 0.8}) {
        c.require(close(schatten_norm(Graph(n, true), p, s), p, 1e-12),
                  "empty graph n=" + std::to_string(n));
      }
    }
  }
  const double p = 0.37;
  auto compare = [&](const Graph& g, const std::string& tag) {
    for (int s : {4, 6}) {
      c.require(close(schatten_norm(g, p, s), schatten_norm_bruteforce(g, p, s), 1e-9),
                tag + " map sum s=" + std::to_string(s));
    }
    c.require(close(bipartite_norm(g, p, 2, 2), schatten_norm(g, p, 4), 1e-9), tag + " bipartite");
  };
  for (int n = 1; n <= 4; ++n) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (n * (n - 1) / 2 + n)); ++mask) {
      compare(labeled_with_loops(n, mask), "n=" + std::to_string(n) + " mask=" + std::to_string(mask));
    }
  }
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    compare(sample_gnp(5, EdgeProbability::from_double(0.5), Seed{seed}, true), "n=5 seed=" + std::to_string(seed));
  }
  double lo = 1e300;
  double hi = 0;
  for (int n : {64, 128, 256, 512}) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const double norm =
          schatten_norm(sample_gnp(n, EdgeProbability::from_fraction(1, 2), Seed{seed}, true), 0.5, 4);
      const double ratio = norm / (0.5 * std::pow(n, -3.0 / 8));
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
      c.require(ratio >= 0.25 && ratio <= 4, "loop-random ratio n=" + std::to_string(n));
    }
  }
  std::ostringstream s;
  s << "loop-random ratio range [" << lo << ", " << hi << "]";
  return c.outcome(s.str());
}

Outcome schatten_minimum() {
  Check c;
  const auto gold = golden("min_schatten.json");
  c.require(!gold.is_null(), "golden file min_schatten.json missing");
  const auto first = minimize_schatten(4, 0.5, 4);
  const auto second = minimize_schatten(4, 0.5, 4);
  c.require(first.value <= 0.5, "minimum above the empty-graph value");
  c.require(first.value == second.value && first.witness_mask == second.witness_mask, "re-run differs");
  if (!gold.is_null()) {
    c.require(std::abs(first.value - gold["min"].get<double>()) <= gold["tolerance"].get<double>(),
              "golden mismatch");
  }
  std::ostringstream s;
  s.precision(17);
  s << "min over loop-graphs on 4 vertices = " << first.value;
  return c.outcome(s.str());
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<int, std::function<Outcome()>>> criteria = {
      {1, decomposition_identity}, {2, quadratic_identities},   {3, step_up_identity},
      {4, u2_oracle},              {5, u4_shape},               {6, construction_postconditions},
      {7, scaling_band},           {8, moment_bounds},          {9, schatten_suite},
      {10, schatten_minimum}};
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failed = 0;
  for (const auto& [id, fn] : criteria) {
    if (!selected.empty() && !selected.count(id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %d: %s (%.1f s) %s\n", id, o.pass ? "PASS" : "FAIL", secs, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed ? 1 : 0;
}
