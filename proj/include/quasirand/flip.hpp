#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "quasirand/catalog.hpp"
#include "quasirand/graph.hpp"

namespace quasirand {

// Codegree profile of a pair ij. Z_s^* counts vertices w outside {i,j} with
// exactly s of iw, jw present.
struct PairStats {
  int z0_star = 0;
  int z1_star = 0;
  int z2_star = 0;
  double z0 = 0;  // Z0* - (n-2)(1-p)^2
  double z2 = 0;  // Z2* - (n-2)p^2
  double y1 = 0;  // Z2 - Z0, equals S_ij(P2)
  double y2 = 0;  // (1-p)Z2 + pZ0, equals S_ij(K3)
};

PairStats pair_statistics(const Graph& g, double p, int i, int j);

enum class PairClass : std::uint8_t { kNone = 0, kE1, kE2, kE3, kE4, kE5 };

std::string to_string(PairClass c);

// (Y1,Y2) quadrant classes. Lists are in lexicographic pair order.
struct PairClassification {
  int n = 0;
  double p = 0;
  std::array<std::vector<Edge>, 5> classes;  // E1..E5

  std::int64_t size(PairClass c) const;
};

PairClass classify_pair(const PairStats& s, bool is_edge, int n, double p);
PairClassification classify_pairs(const Graph& g, double p);

// 4k eps^{-1/2} |F_k|^{1/2} p^{e(F)/2-1} n^{v(F)/2-1}
double excluded_pair_threshold(const SmallGraph& F, int k, std::size_t family_size, int n,
                               double p, double eps);

struct PropertyOptions {
  double regime_floor = 1.0;         // minimum p(1-p)sqrt(n)
  int exact_pair_limit = 800;        // exact 4-vertex pair deltas up to this n
  int monte_carlo_samples = 10'000;  // vertex subsets per sampled pair delta
  int excluded_pair_samples = 2'000; // pairs sampled to estimate |E*| for large n
  std::int64_t census_cap = 500'000'000;
  std::uint64_t seed = 0;            // drives the Monte-Carlo estimates
};

// Decides whether pair ij lies in E*. Pairs are judged exactly for orders
// <= 3 and for order 4 when n <= exact_pair_limit; otherwise the pair delta is
// sampled and compared with half the threshold.
class ExcludedPairTest {
 public:
  ExcludedPairTest(int n, double p, int k, double eps, const PropertyOptions& options);
  bool excluded(const Graph& g, int i, int j, std::uint64_t stream) const;
  bool sampled() const { return sampled_; }

 private:
  Family family_;
  std::vector<double> thresholds_;
  double p_;
  bool sampled_;
  int samples_;
  std::uint64_t seed_;
};

struct PropertyReport {
  // A: |S(F,G)| <= 5|F_k|^{1/2} p^{e/2} n^{v/2}
  bool a = false;
  std::string a_witness;     // worst member, by ratio to its bound
  double a_worst_ratio = 0;
  std::vector<std::string> a_skipped;  // members whose census exceeds the cap
  std::vector<double> a_values;        // S(F,G) per F_k member, NaN when skipped
  // B: class sizes and max degree
  bool b = false;
  std::array<std::int64_t, 5> class_sizes{};
  int max_degree = 0;
  double b_threshold_quadrant = 0;  // eps p n^2 / 4
  double b_threshold_e5 = 0;        // eps n^2 / 4
  double b_degree_bound = 0;        // 2pn
  // C: |E*| <= eps p n^2 / 8
  bool c = false;
  double excluded_pairs = 0;  // exact count or scaled estimate
  bool excluded_sampled = false;
  double c_threshold = 0;

  bool all() const { return a && b && c; }
  nlohmann::json to_json() const;
};

// Throws kPrecondition when p(1-p)sqrt(n) < options.regime_floor.
PropertyReport verify_sample_properties(const Graph& g, double p, int k, double eps,
                                        const PropertyOptions& options = {});

// Maximal matching taking edges in lexicographic order.
std::vector<Edge> greedy_matching(const Graph& h);

struct BoundedDegreeResult {
  Graph subgraph;
  bool unchanged = false;  // m >= max degree: the input is returned
  std::string note;
};

// m rounds, each adding a greedy maximal matching of the edges not yet taken.
BoundedDegreeResult bounded_degree_subgraph(const Graph& h, int m);

// Per-class flip lists drawn from H'_i, consumed front to back.
struct FlipReservoir {
  std::array<std::vector<Edge>, 5> lists;  // E1..E5 minus E*
  std::array<std::size_t, 5> used{};
  std::array<std::int64_t, 5> excluded{};  // candidates dropped as E*
  int degree_cap = 0;                      // m
  int max_degree = 0;                      // max degree of the union H'

  std::size_t remaining(PairClass c) const;
  std::optional<Edge> take(PairClass c);
};

struct ReservoirOptions {
  double eps = 0.005;
  double cap_c = 0.25;
  PropertyOptions properties;
};

// Throws kReservoirShortfall when some class keeps fewer than C*n edges.
FlipReservoir build_flip_reservoir(const Graph& g, double p, int k,
                                   const ReservoirOptions& options = {});

struct TrajectoryPoint {
  int phase = 0;
  int step = 0;
  double s_k2 = 0;
  double s_p2 = 0;
  double s_k3 = 0;
};

struct PhaseLog {
  std::vector<TrajectoryPoint> trajectory;
  int phase1_steps = 0;
  int phase2_steps = 0;
  int window_warnings = 0;
  int bookkeeping_checks = 0;
  double bookkeeping_max_error = 0;  // relative, incremental vs recomputed
};

// Flip reservoir pairs until e(G) is the integer nearest p*C(n,2). Removals
// come from the quadrant matching the signs of S(K3), S(P2).
Graph balance_edge_count(Graph g, double p, FlipReservoir& reservoir, PhaseLog* log = nullptr);

struct TriadOptions {
  int budget = 0;
  double eps = 0.005;  // sets the logged step window
  int check_every = 100;
  double tolerance = 1e-7;
};

// Quadrant swaps (remove from E_q, add from E5) until |S(K3)|, |S(P2)| < pn.
// Throws kConvergenceFailure when the budget runs out.
Graph balance_triad_stats(Graph g, double p, FlipReservoir& reservoir, const TriadOptions& options,
                          PhaseLog* log = nullptr);

struct ConstructOptions {
  int n = 0;
  EdgeProbability p = EdgeProbability::from_fraction(1, 2);
  int k = 4;
  std::uint64_t seed = 0;
  double eps = 0.005;
  double cap_c = 0.25;
  int max_retries = 20;
  std::optional<int> budget;  // default ceil(2 sqrt(p) n)
  PropertyOptions properties;
};

struct ConstructionReport {
  Graph graph;
  ConstructOptions options;
  double eps_used = 0;
  int attempts = 0;
  bool complement_route = false;
  std::uint64_t sample_seed = 0;
  PropertyReport properties;
  std::vector<std::string> family;  // names of F_k members
  std::vector<double> s_before;     // aligned with family, NaN when skipped
  std::vector<double> s_after;
  double s_k2_final = 0;
  double nearest_distance = 0;
  std::array<std::int64_t, 5> reservoir_sizes{};
  int reservoir_max_degree = 0;
  int budget = 0;
  PhaseLog log;
  std::optional<double> u_k;
  std::optional<double> u_k_decomposition;
  std::string u_k_argmax;
  double kappa = 0;
  std::vector<std::string> notes;
  double wall_time_s = 0;

  nlohmann::json to_json() const;
};

ConstructionReport construct(const ConstructOptions& options);

}  // namespace quasirand
