#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "quasirand/rational.hpp"

namespace quasirand {

// Edge probability p in (0,1). Carries an exact rational form when the value
// was given as a fraction; statistics then run on exact rationals.
class EdgeProbability {
 public:
  static EdgeProbability from_double(double p);
  static EdgeProbability from_fraction(std::int64_t num, std::int64_t den);
  static EdgeProbability from_rational(const Rational& r);
  // Accepts "a/b" (exact) or a decimal literal (floating point).
  static EdgeProbability parse(std::string_view text);

  double value() const noexcept { return value_; }
  bool is_exact() const noexcept { return exact_.has_value(); }
  const Rational& exact() const;  // throws unless is_exact()

  template <class S>
  S as() const {
    if constexpr (std::is_same_v<S, Rational>) {
      return exact();
    } else {
      return static_cast<S>(value_);
    }
  }

  EdgeProbability complement() const;
  std::string to_string() const;

 private:
  double value_ = 0.5;
  std::optional<Rational> exact_;
};

struct Seed {
  std::uint64_t value = 0;
};

struct Edge {
  int u = 0;
  int v = 0;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Dense simple graph on vertices 0..n-1 with packed bitset rows. Loops are
// stored separately and are only allowed when loops are enabled.
class Graph {
 public:
  Graph() = default;
  explicit Graph(int n, bool loops_enabled = false);

  int order() const noexcept { return n_; }
  bool loops_enabled() const noexcept { return loops_enabled_; }
  int words_per_row() const noexcept { return words_; }

  bool has_edge(int i, int j) const {
    return (rows_[static_cast<std::size_t>(i) * words_ + (j >> 6)] >> (j & 63)) & 1U;
  }
  bool has_loop(int i) const { return loops_enabled_ && loops_[i] != 0; }

  void set_edge(int i, int j, bool present);
  void toggle_edge(int i, int j);
  void set_loop(int i, bool present);

  std::span<const std::uint64_t> row(int i) const {
    return {rows_.data() + static_cast<std::size_t>(i) * words_,
            static_cast<std::size_t>(words_)};
  }

  std::int64_t edge_count() const noexcept { return edges_; }
  int loop_count() const noexcept;
  int degree(int i) const;
  int max_degree() const;
  int common_neighbors(int i, int j) const;
  std::vector<Edge> edges() const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.loops_enabled_ == b.loops_enabled_ &&
           a.rows_ == b.rows_ && a.loops_ == b.loops_;
  }

 private:
  int n_ = 0;
  int words_ = 0;
  bool loops_enabled_ = false;
  std::int64_t edges_ = 0;
  std::vector<std::uint64_t> rows_;
  std::vector<std::uint8_t> loops_;
};

inline std::int64_t choose2(std::int64_t n) { return n * (n - 1) / 2; }
std::int64_t binomial(std::int64_t n, int k);

// Each pair (and each loop when `loops` is set) is present independently with
// probability p. Uses std::mt19937_64 seeded with `seed`; pairs are drawn in
// lexicographic order (i < j), then loops for vertices 0..n-1. A pair is
// present when the 53-bit uniform draw is below p.
Graph sample_gnp(int n, const EdgeProbability& p, Seed seed, bool loops = false);

// Toggles every pair, and every loop when loops are enabled.
Graph complement(const Graph& g);

// Copy of g with pair ij toggled. i == j is rejected.
Graph flip_pair(const Graph& g, int i, int j);

// Distance from p*C(n,2) to the nearest integer.
double nearest_integer_distance(int n, const EdgeProbability& p);
Rational nearest_integer_distance_exact(int n, const Rational& p);

// Integer edge count closest to p*C(n,2) (ties go down).
std::int64_t nearest_edge_count(int n, const EdgeProbability& p);

}  // namespace quasirand
