#include "quasirand/flip.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <random>

#include "quasirand/census.hpp"
#include "quasirand/error.hpp"
#include "quasirand/parallel.hpp"
#include "quasirand/signed_stats.hpp"

namespace quasirand {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

int class_slot(PairClass c) { return static_cast<int>(c) - 1; }

PairClass class_at(int slot) { return static_cast<PairClass>(slot + 1); }

// E1..E4 by the signs the quadrant removal should counteract.
PairClass quadrant(double s_k3, double s_p2) {
  if (s_p2 >= 0) return s_k3 >= 0 ? PairClass::kE1 : PairClass::kE2;
  return s_k3 >= 0 ? PairClass::kE3 : PairClass::kE4;
}

struct Triad {
  double s_p2 = 0;
  double s_k3 = 0;
};

Triad triad_from_scratch(const Graph& g, double p) {
  const auto& cat = Catalog::instance();
  const auto census = induced_census(g, 3);
  return {signed_sum_from_census<double>(*cat.find("P2"), census, p),
          signed_sum_from_census<double>(*cat.find("K3"), census, p)};
}

double relative_gap(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1.0});
}

// Induced censuses of orders 2..k, leaving out order 5 above the cap.
std::map<int, CensusResult> family_census(const Graph& g, int k, std::int64_t cap) {
  std::map<int, CensusResult> out;
  for (int v = 2; v <= k && v <= g.order(); ++v) {
    if (v == 5 && binomial(g.order(), 5) > cap) continue;
    out.emplace(v, induced_census(g, v));
  }
  return out;
}

void record(PhaseLog* log, int phase, int step, double k2, const Triad& t) {
  if (log) log->trajectory.push_back({phase, step, k2, t.s_p2, t.s_k3});
}

}  // namespace

PairStats pair_statistics(const Graph& g, double p, int i, int j) {
  const int n = g.order();
  if (n < 3) throw Error(ErrorKind::kInvalidArgument, "pair statistics need n >= 3");
  if (i == j || i < 0 || j < 0 || i >= n || j >= n) {
    throw Error(ErrorKind::kInvalidArgument, "pair statistics need two distinct vertices");
  }
  const int adj = g.has_edge(i, j) ? 1 : 0;
  const int di = g.degree(i) - adj;
  const int dj = g.degree(j) - adj;
  PairStats s;
  s.z2_star = g.common_neighbors(i, j);
  s.z1_star = di + dj - 2 * s.z2_star;
  s.z0_star = n - 2 - s.z1_star - s.z2_star;
  const double q = 1.0 - p;
  s.z0 = s.z0_star - (n - 2) * q * q;
  s.z2 = s.z2_star - (n - 2) * p * p;
  s.y1 = s.z2 - s.z0;
  s.y2 = q * s.z2 + p * s.z0;
  return s;
}

std::string to_string(PairClass c) {
  switch (c) {
    case PairClass::kNone: return "none";
    case PairClass::kE1: return "E1";
    case PairClass::kE2: return "E2";
    case PairClass::kE3: return "E3";
    case PairClass::kE4: return "E4";
    case PairClass::kE5: return "E5";
  }
  return "none";
}

std::int64_t PairClassification::size(PairClass c) const {
  if (c == PairClass::kNone) return 0;
  return static_cast<std::int64_t>(classes[class_slot(c)].size());
}

PairClass classify_pair(const PairStats& s, bool is_edge, int n, double p) {
  const double a = std::sqrt(p * n);
  const double b = p * std::sqrt(static_cast<double>(n));
  if (is_edge) {
    if (s.y1 > a) {
      if (s.y2 > b) return PairClass::kE1;
      if (s.y2 < -b) return PairClass::kE2;
    } else if (s.y1 < -a) {
      if (s.y2 > b) return PairClass::kE3;
      if (s.y2 < -b) return PairClass::kE4;
    }
    return PairClass::kNone;
  }
  if (std::abs(s.y1) < 0.1 * a && std::abs(s.y2) < 0.1 * b) return PairClass::kE5;
  return PairClass::kNone;
}

PairClassification classify_pairs(const Graph& g, double p) {
  const int n = g.order();
  PairClassification out;
  out.n = n;
  out.p = p;
  if (n < 3) return out;
  std::vector<int> deg(n);
  for (int v = 0; v < n; ++v) deg[v] = g.degree(v);
  const double q = 1.0 - p;
  std::vector<std::array<std::vector<Edge>, 5>> rows(n);
  const int workers = worker_count();
#pragma omp parallel for schedule(dynamic) num_threads(workers)
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const bool edge = g.has_edge(i, j);
      PairStats s;
      s.z2_star = g.common_neighbors(i, j);
      s.z1_star = deg[i] + deg[j] - 2 * (edge ? 1 : 0) - 2 * s.z2_star;
      s.z0_star = n - 2 - s.z1_star - s.z2_star;
      s.z0 = s.z0_star - (n - 2) * q * q;
      s.z2 = s.z2_star - (n - 2) * p * p;
      s.y1 = s.z2 - s.z0;
      s.y2 = q * s.z2 + p * s.z0;
      const PairClass c = classify_pair(s, edge, n, p);
      if (c != PairClass::kNone) rows[i][class_slot(c)].push_back({i, j});
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < 5; ++c) {
      out.classes[c].insert(out.classes[c].end(), rows[i][c].begin(), rows[i][c].end());
    }
  }
  return out;
}

double excluded_pair_threshold(const SmallGraph& F, int k, std::size_t family_size, int n,
                               double p, double eps) {
  return 4.0 * k / std::sqrt(eps) * std::sqrt(static_cast<double>(family_size)) *
         std::pow(p, F.edges() / 2.0 - 1.0) * std::pow(static_cast<double>(n), F.k / 2.0 - 1.0);
}

ExcludedPairTest::ExcludedPairTest(int n, double p, int k, double eps,
                                   const PropertyOptions& options)
    : family_(family_Fk(k)),
      p_(p),
      samples_(options.monte_carlo_samples),
      seed_(options.seed) {
  for (const auto& F : family_.members) {
    thresholds_.push_back(excluded_pair_threshold(F, k, family_.members.size(), n, p, eps));
  }
  sampled_ = n > options.exact_pair_limit || (k == 5 && binomial(n - 2, 3) > 200'000);
}

bool ExcludedPairTest::excluded(const Graph& g, int i, int j, std::uint64_t stream) const {
  thread_local std::unique_ptr<PairDeltaBatch> batch;
  if (!batch || batch->p() != p_ || batch->family().members != family_.members) {
    batch = std::make_unique<PairDeltaBatch>(family_, p_);
  }
  std::vector<double> deltas;
  if (sampled_) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    std::mt19937_64 rng(seq);
    deltas = batch->sampled(g, i, j, samples_, rng);
  } else {
    deltas = batch->exact(g, i, j);
  }
  for (std::size_t f = 0; f < deltas.size(); ++f) {
    // sampled estimates get a factor-two margin
    const double limit = (sampled_ && family_.members[f].k >= 4) ? thresholds_[f] / 2 : thresholds_[f];
    if (std::abs(deltas[f]) > limit) return true;
  }
  return false;
}

nlohmann::json PropertyReport::to_json() const {
  nlohmann::json j;
  j["A"] = {{"holds", a}, {"worst_member", a_witness}, {"worst_ratio", a_worst_ratio},
            {"skipped", a_skipped}};
  j["B"] = {{"holds", b},
            {"class_sizes", {{"E1", class_sizes[0]}, {"E2", class_sizes[1]}, {"E3", class_sizes[2]},
                             {"E4", class_sizes[3]}, {"E5", class_sizes[4]}}},
            {"max_degree", max_degree},
            {"quadrant_threshold", b_threshold_quadrant},
            {"e5_threshold", b_threshold_e5},
            {"degree_bound", b_degree_bound}};
  j["C"] = {{"holds", c}, {"excluded_pairs", excluded_pairs}, {"sampled", excluded_sampled},
            {"threshold", c_threshold}};
  return j;
}

PropertyReport verify_sample_properties(const Graph& g, double p, int k, double eps,
                                        const PropertyOptions& options) {
  const int n = g.order();
  if (k < 3 || k > kMaxClassOrder) throw Error(ErrorKind::kUnsupported, "k must lie in [3,5]");
  if (!(eps > 0 && eps < 1)) throw Error(ErrorKind::kInvalidArgument, "eps must lie in (0,1)");
  const double regime = p * (1 - p) * std::sqrt(static_cast<double>(n));
  if (regime < options.regime_floor) {
    throw Error(ErrorKind::kPrecondition,
                "p(1-p)sqrt(n) is below the regime floor; the construction needs "
                "1/(p(1-p)) = o(n^{1/2}) with k >= 3 fixed",
                nlohmann::json{{"n", n}, {"p", p}, {"value", regime}, {"floor", options.regime_floor}});
  }
  if (n < k) throw Error(ErrorKind::kPrecondition, "n must be at least k");
  const Family fam = family_Fk(k);
  const double nn = static_cast<double>(n);
  const double root_family = std::sqrt(static_cast<double>(fam.members.size()));
  const auto& cat = Catalog::instance();
  PropertyReport r;

  // A
  const auto census = family_census(g, k, options.census_cap);
  double worst = -1;
  for (const auto& F : fam.members) {
    const auto it = census.find(F.k);
    if (it == census.end()) {
      r.a_skipped.push_back(cat.name(F));
      r.a_values.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    const double value = signed_sum_from_census<double>(F, it->second, p);
    r.a_values.push_back(value);
    const double bound = 5 * root_family * std::pow(p, F.edges() / 2.0) * std::pow(nn, F.k / 2.0);
    const double ratio = std::abs(value) / bound;
    if (ratio > worst) {
      worst = ratio;
      r.a_witness = cat.name(F);
    }
  }
  r.a_worst_ratio = std::max(worst, 0.0);
  r.a = r.a_worst_ratio <= 1.0;

  // B
  const auto cls = classify_pairs(g, p);
  for (int c = 0; c < 5; ++c) r.class_sizes[c] = static_cast<std::int64_t>(cls.classes[c].size());
  r.max_degree = g.max_degree();
  r.b_threshold_quadrant = eps * p * nn * nn / 4;
  r.b_threshold_e5 = eps * nn * nn / 4;
  r.b_degree_bound = 2 * p * nn;
  r.b = r.max_degree <= r.b_degree_bound && r.class_sizes[4] >= r.b_threshold_e5;
  for (int c = 0; c < 4; ++c) r.b = r.b && r.class_sizes[c] >= r.b_threshold_quadrant;

  // C
  const ExcludedPairTest test(n, p, k, eps, options);
  const std::int64_t pairs = choose2(n);
  r.c_threshold = eps * p * nn * nn / 8;
  std::int64_t hits = 0;
  if (pairs <= options.excluded_pair_samples) {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) hits += test.excluded(g, i, j, pair_index(i, j));
    }
    r.excluded_pairs = static_cast<double>(hits);
    r.excluded_sampled = false;
  } else {
    std::mt19937_64 rng(splitmix64(options.seed ^ 0xC0FFEEULL));
    std::uniform_int_distribution<int> pick(0, n - 1);
    const int samples = options.excluded_pair_samples;
    std::vector<Edge> chosen;
    for (int s = 0; s < samples; ++s) {
      int i = pick(rng);
      int j = pick(rng);
      while (j == i) j = pick(rng);
      chosen.push_back({std::min(i, j), std::max(i, j)});
    }
    const int workers = worker_count();
#pragma omp parallel for schedule(dynamic) num_threads(workers) reduction(+ : hits)
    for (int s = 0; s < samples; ++s) {
      hits += test.excluded(g, chosen[s].u, chosen[s].v, pair_index(chosen[s].u, chosen[s].v));
    }
    r.excluded_pairs = static_cast<double>(hits) / samples * static_cast<double>(pairs);
    r.excluded_sampled = true;
  }
  r.c = r.excluded_pairs <= r.c_threshold;
  return r;
}

std::vector<Edge> greedy_matching(const Graph& h) {
  const int n = h.order();
  std::vector<char> covered(n, 0);
  std::vector<Edge> out;
  for (int i = 0; i < n; ++i) {
    if (covered[i]) continue;
    for (int j = i + 1; j < n; ++j) {
      if (!covered[j] && h.has_edge(i, j)) {
        covered[i] = covered[j] = 1;
        out.push_back({i, j});
        break;
      }
    }
  }
  return out;
}

BoundedDegreeResult bounded_degree_subgraph(const Graph& h, int m) {
  if (m < 1) throw Error(ErrorKind::kInvalidArgument, "degree cap must be positive");
  const int delta = h.max_degree();
  if (m >= delta) {
    return {h, true, "degree cap " + std::to_string(m) + " >= max degree " + std::to_string(delta) +
                         "; graph returned unchanged"};
  }
  Graph rest = h;
  Graph out(h.order());
  for (int round = 0; round < m; ++round) {
    const auto matching = greedy_matching(rest);
    if (matching.empty()) break;
    for (const auto& e : matching) {
      out.set_edge(e.u, e.v, true);
      rest.set_edge(e.u, e.v, false);
    }
  }
  return {out, false, ""};
}

std::size_t FlipReservoir::remaining(PairClass c) const {
  const int s = class_slot(c);
  return lists[s].size() - used[s];
}

std::optional<Edge> FlipReservoir::take(PairClass c) {
  const int s = class_slot(c);
  if (used[s] >= lists[s].size()) return std::nullopt;
  return lists[s][used[s]++];
}

FlipReservoir build_flip_reservoir(const Graph& g, double p, int k, const ReservoirOptions& options) {
  const int n = g.order();
  if (!(options.cap_c > 0)) throw Error(ErrorKind::kInvalidArgument, "C must be positive");
  const auto cls = classify_pairs(g, p);
  const ExcludedPairTest test(n, p, k, options.eps, options.properties);
  FlipReservoir r;
  r.degree_cap = static_cast<int>(std::ceil(64 * options.cap_c / options.eps));
  const double need = options.cap_c * n;
  std::vector<int> union_degree(n, 0);
  const int workers = worker_count();
  for (int c = 0; c < 5; ++c) {
    const auto& candidates = cls.classes[c];
    std::vector<char> drop(candidates.size(), 0);
#pragma omp parallel for schedule(dynamic) num_threads(workers)
    for (std::size_t t = 0; t < candidates.size(); ++t) {
      const auto& e = candidates[t];
      drop[t] = test.excluded(g, e.u, e.v, static_cast<std::uint64_t>(pair_index(e.u, e.v)));
    }
    Graph h(n);
    for (std::size_t t = 0; t < candidates.size(); ++t) {
      if (drop[t]) {
        ++r.excluded[c];
      } else {
        h.set_edge(candidates[t].u, candidates[t].v, true);
      }
    }
    const auto bounded = bounded_degree_subgraph(h, r.degree_cap);
    r.lists[c] = bounded.subgraph.edges();
    for (const auto& e : r.lists[c]) {
      ++union_degree[e.u];
      ++union_degree[e.v];
    }
  }
  r.max_degree = n ? *std::max_element(union_degree.begin(), union_degree.end()) : 0;
  for (int c = 0; c < 5; ++c) {
    if (static_cast<double>(r.lists[c].size()) < need) {
      nlohmann::json sizes = nlohmann::json::object();
      for (int d = 0; d < 5; ++d) sizes[to_string(class_at(d))] = r.lists[d].size();
      throw Error(ErrorKind::kReservoirShortfall,
                  "flip reservoir class " + to_string(class_at(c)) + " holds " +
                      std::to_string(r.lists[c].size()) + " edges, fewer than C*n",
                  nlohmann::json{{"class", to_string(class_at(c))}, {"sizes", sizes},
                                 {"required", need}, {"n", n}, {"p", p}});
    }
  }
  return r;
}

Graph balance_edge_count(Graph g, double p, FlipReservoir& reservoir, PhaseLog* log) {
  const int n = g.order();
  const std::int64_t target = nearest_edge_count(n, EdgeProbability::from_double(p));
  const double expected = p * static_cast<double>(choose2(n));
  Triad t = triad_from_scratch(g, p);
  int step = 0;
  auto snapshot = [&] {
    return nlohmann::json{{"edges", g.edge_count()}, {"target", target}, {"steps", step},
                          {"s_p2", t.s_p2}, {"s_k3", t.s_k3}};
  };
  record(log, 1, 0, g.edge_count() - expected, t);
  while (g.edge_count() > target) {
    const PairClass first = quadrant(t.s_k3, t.s_p2);
    std::optional<Edge> e = reservoir.take(first);
    for (int c = 0; !e && c < 4; ++c) e = reservoir.take(class_at(c));
    if (!e) {
      throw Error(ErrorKind::kReservoirShortfall, "removal classes exhausted while balancing edges",
                  snapshot());
    }
    if (!g.has_edge(e->u, e->v)) {
      throw Error(ErrorKind::kInvalidArgument, "reservoir removal pair is not an edge");
    }
    const auto s = pair_statistics(g, p, e->u, e->v);
    g.set_edge(e->u, e->v, false);
    t.s_p2 -= s.y1;
    t.s_k3 -= s.y2;
    record(log, 1, ++step, g.edge_count() - expected, t);
  }
  while (g.edge_count() < target) {
    std::optional<Edge> e = reservoir.take(PairClass::kE5);
    if (!e) {
      throw Error(ErrorKind::kReservoirShortfall, "E5 exhausted while balancing edges", snapshot());
    }
    if (g.has_edge(e->u, e->v)) {
      throw Error(ErrorKind::kInvalidArgument, "reservoir addition pair is already an edge");
    }
    const auto s = pair_statistics(g, p, e->u, e->v);
    g.set_edge(e->u, e->v, true);
    t.s_p2 += s.y1;
    t.s_k3 += s.y2;
    record(log, 1, ++step, g.edge_count() - expected, t);
  }
  if (log) log->phase1_steps = step;
  return g;
}

Graph balance_triad_stats(Graph g, double p, FlipReservoir& reservoir, const TriadOptions& options,
                          PhaseLog* log) {
  const int n = g.order();
  const double pn = p * n;
  const double k2 = g.edge_count() - p * static_cast<double>(choose2(n));
  const double root_pn = std::sqrt(pn);
  const double p_root_n = p * std::sqrt(static_cast<double>(n));
  Triad t = triad_from_scratch(g, p);
  int step = 0;
  double worst = 0;
  int checks = 0;
  int warnings = 0;

  auto check = [&] {
    const Triad fresh = triad_from_scratch(g, p);
    worst = std::max({worst, relative_gap(t.s_p2, fresh.s_p2), relative_gap(t.s_k3, fresh.s_k3)});
    ++checks;
  };
  auto finish = [&] {
    if (log) {
      log->phase2_steps = step;
      log->window_warnings += warnings;
      log->bookkeeping_checks += checks;
      log->bookkeeping_max_error = std::max(log->bookkeeping_max_error, worst);
    }
  };
  auto state = [&] {
    return nlohmann::json{{"steps", step}, {"s_p2", t.s_p2}, {"s_k3", t.s_k3}, {"pn", pn},
                          {"budget", options.budget}};
  };

  while (!(std::abs(t.s_k3) < pn && std::abs(t.s_p2) < pn)) {
    if (step >= options.budget) {
      check();
      finish();
      throw Error(ErrorKind::kConvergenceFailure,
                  "phase-2 budget exhausted before |S(K3)|, |S(P2)| < pn", state());
    }
    const PairClass q = quadrant(t.s_k3, t.s_p2);
    const auto out_edge = reservoir.take(q);
    const auto in_edge = reservoir.take(PairClass::kE5);
    if (!out_edge || !in_edge) {
      finish();
      throw Error(ErrorKind::kReservoirShortfall,
                  "reservoir class " + to_string(out_edge ? PairClass::kE5 : q) +
                      " exhausted during phase 2",
                  state());
    }
    const auto s_out = pair_statistics(g, p, out_edge->u, out_edge->v);
    g.set_edge(out_edge->u, out_edge->v, false);
    const auto s_in = pair_statistics(g, p, in_edge->u, in_edge->v);
    g.set_edge(in_edge->u, in_edge->v, true);
    t.s_p2 += s_in.y1 - s_out.y1;
    t.s_k3 += s_in.y2 - s_out.y2;

    // step window for the removed pair, logged only
    const double hi_p2 = 2 / options.eps * root_pn;
    const double hi_k3 = 2 / options.eps * p_root_n;
    const double sign_p2 = (q == PairClass::kE1 || q == PairClass::kE2) ? 1 : -1;
    const double sign_k3 = (q == PairClass::kE1 || q == PairClass::kE3) ? 1 : -1;
    const double d_p2 = sign_p2 * s_out.y1;
    const double d_k3 = sign_k3 * s_out.y2;
    if (d_p2 < 0.8 * root_pn || d_p2 > hi_p2 || d_k3 < 0.8 * p_root_n || d_k3 > hi_k3) ++warnings;

    ++step;
    record(log, 2, step, k2, t);
    if (options.check_every > 0 && step % options.check_every == 0) check();
  }
  check();
  finish();
  return g;
}

nlohmann::json ConstructionReport::to_json() const {
  nlohmann::json j;
  j["parameters"] = {{"n", options.n},
                     {"p", options.p.to_string()},
                     {"k", options.k},
                     {"seed", options.seed},
                     {"eps", options.eps},
                     {"cap_c", options.cap_c},
                     {"max_retries", options.max_retries},
                     {"budget", budget},
                     {"regime_floor", options.properties.regime_floor},
                     {"exact_pair_limit", options.properties.exact_pair_limit},
                     {"monte_carlo_samples", options.properties.monte_carlo_samples}};
  j["eps_used"] = eps_used;
  j["attempts"] = attempts;
  j["complement_route"] = complement_route;
  j["sample_seed"] = sample_seed;
  j["properties"] = properties.to_json();
  auto stats = [&](const std::vector<double>& v) {
    nlohmann::json m = nlohmann::json::object();
    for (std::size_t i = 0; i < family.size(); ++i) {
      m[family[i]] = std::isnan(v[i]) ? nlohmann::json(nullptr) : nlohmann::json(v[i]);
    }
    return m;
  };
  j["S_before"] = stats(s_before);
  j["S_after"] = stats(s_after);
  j["S_K2_final"] = s_k2_final;
  j["D"] = nearest_distance;
  j["reservoir"] = {{"E1", reservoir_sizes[0]}, {"E2", reservoir_sizes[1]}, {"E3", reservoir_sizes[2]},
                    {"E4", reservoir_sizes[3]}, {"E5", reservoir_sizes[4]},
                    {"max_degree", reservoir_max_degree}};
  j["phase1_steps"] = log.phase1_steps;
  j["phase2_steps"] = log.phase2_steps;
  j["window_warnings"] = log.window_warnings;
  j["bookkeeping"] = {{"checks", log.bookkeeping_checks}, {"max_relative_error", log.bookkeeping_max_error}};
  j["u_k"] = u_k ? nlohmann::json(*u_k) : nlohmann::json(nullptr);
  j["u_k_decomposition"] = u_k_decomposition ? nlohmann::json(*u_k_decomposition) : nlohmann::json(nullptr);
  j["u_k_argmax"] = u_k_argmax;
  j["kappa"] = kappa;
  j["edges"] = graph.edge_count();
  nlohmann::json traj = nlohmann::json::array();
  for (const auto& pt : log.trajectory) {
    traj.push_back({{"phase", pt.phase}, {"step", pt.step}, {"S_K2", pt.s_k2}, {"S_P2", pt.s_p2},
                    {"S_K3", pt.s_k3}});
  }
  j["trajectory"] = traj;
  j["notes"] = notes;
  j["wall_time_s"] = wall_time_s;
  return j;
}

ConstructionReport construct(const ConstructOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  const int n = options.n;
  const int k = options.k;
  if (k < 3 || k > kMaxClassOrder) throw Error(ErrorKind::kUnsupported, "k must lie in [3,5]");
  if (n < 4) throw Error(ErrorKind::kInvalidArgument, "n must be at least 4");
  if (options.max_retries < 1) throw Error(ErrorKind::kInvalidArgument, "retries must be positive");
  const double p_orig = options.p.value();
  const bool flip_side = p_orig > 0.5;
  const EdgeProbability p_run = flip_side ? options.p.complement() : options.p;
  const double p = p_run.value();
  const double regime = p * (1 - p) * std::sqrt(static_cast<double>(n));
  if (regime < options.properties.regime_floor) {
    throw Error(ErrorKind::kPrecondition,
                "p(1-p)sqrt(n) is below the regime floor; the construction needs "
                "1/(p(1-p)) = o(n^{1/2}) with k >= 3 fixed",
                nlohmann::json{{"n", n}, {"p", p_orig}, {"value", regime},
                               {"floor", options.properties.regime_floor}});
  }

  ConstructionReport rep;
  rep.options = options;
  rep.complement_route = flip_side;
  if (flip_side) rep.notes.push_back("p > 1/2: built for 1-p and complemented");

  PropertyOptions props = options.properties;
  props.seed = splitmix64(options.seed ^ 0x5EEDULL);
  std::optional<Graph> sample;
  double eps = options.eps;
  nlohmann::json failures = nlohmann::json::array();
  for (int pass = 0; pass < 2 && !sample; ++pass) {
    if (pass == 1) {
      eps /= 2;
      rep.notes.push_back("all retries failed; eps halved once");
    }
    for (int r = 0; r < options.max_retries; ++r) {
      const std::uint64_t s = splitmix64(options.seed + 0x9E3779B97F4A7C15ULL * (rep.attempts + 1));
      ++rep.attempts;
      Graph g = sample_gnp(n, p_run, Seed{s});
      auto pr = verify_sample_properties(g, p, k, eps, props);
      if (pr.all()) {
        sample = std::move(g);
        rep.properties = pr;
        rep.sample_seed = s;
        break;
      }
      if (failures.size() < 5) failures.push_back(pr.to_json());
    }
  }
  if (!sample) {
    throw Error(ErrorKind::kRetriesExhausted, "no sample satisfied properties A, B and C",
                nlohmann::json{{"attempts", rep.attempts}, {"eps", eps}, {"first_failures", failures}});
  }
  rep.eps_used = eps;

  const Family fam = family_Fk(k);
  const auto& cat = Catalog::instance();
  for (const auto& F : fam.members) rep.family.push_back(cat.name(F));
  rep.s_before = rep.properties.a_values;
  if (flip_side) {
    // complementing at 1-p flips the sign of odd-size members
    for (std::size_t f = 0; f < fam.members.size(); ++f) {
      if (fam.members[f].edges() % 2) rep.s_before[f] = -rep.s_before[f];
    }
  }
  if (!rep.properties.a_skipped.empty()) {
    rep.notes.push_back("5-vertex signed sums not evaluated: census above the work cap");
  }

  ReservoirOptions ro;
  ro.eps = eps;
  ro.cap_c = options.cap_c;
  ro.properties = props;
  FlipReservoir reservoir = build_flip_reservoir(*sample, p, k, ro);
  for (int c = 0; c < 5; ++c) rep.reservoir_sizes[c] = static_cast<std::int64_t>(reservoir.lists[c].size());
  rep.reservoir_max_degree = reservoir.max_degree;

  rep.budget = options.budget ? *options.budget
                              : static_cast<int>(std::ceil(2 * std::sqrt(p) * n));
  Graph g = balance_edge_count(std::move(*sample), p, reservoir, &rep.log);
  TriadOptions to;
  to.budget = rep.budget;
  to.eps = eps;
  g = balance_triad_stats(std::move(g), p, reservoir, to, &rep.log);

  rep.graph = flip_side ? complement(g) : std::move(g);
  const auto census = family_census(rep.graph, k, props.census_cap);
  rep.s_after.assign(fam.members.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t f = 0; f < fam.members.size(); ++f) {
    const auto it = census.find(fam.members[f].k);
    if (it != census.end()) rep.s_after[f] = signed_sum_from_census<double>(fam.members[f], it->second, p_orig);
  }
  rep.s_k2_final = rep.graph.edge_count() - p_orig * static_cast<double>(choose2(n));
  rep.nearest_distance = nearest_integer_distance(n, options.p);

  for (std::size_t f = 0; f < fam.members.size(); ++f) {
    const auto& F = fam.members[f];
    if (F.k < 4 || std::isnan(rep.s_after[f])) continue;
    rep.kappa = std::max(rep.kappa, std::abs(rep.s_after[f]) / (p * std::pow(n, F.k - 2)));
  }

  if (const auto it = census.find(k); it != census.end()) {
    const auto dev = deviation_from_census<double>(it->second, p_orig);
    rep.u_k = dev.u_k;
    rep.u_k_argmax = cat.name(cat.classes(k)[dev.argmax]);
    double worst = 0;
    for (const auto& H : cat.classes(k)) {
      const auto dc = decomposition_coefficients(H, n);
      double sum = 0;
      for (std::size_t f = 0; f < dc.members.size(); ++f) {
        sum += dc.coefficients[f].evaluate<double>(p_orig) * rep.s_after[f];
      }
      worst = std::max(worst, std::abs(sum));
    }
    rep.u_k_decomposition = worst;
  } else {
    rep.notes.push_back("u_k not evaluated: census above the work cap");
  }
  rep.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return rep;
}

}  // namespace quasirand
