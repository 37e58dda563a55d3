#include <doctest.h>

#include "builders.hpp"
#include "quasirand/census.hpp"
#include "quasirand/error.hpp"
#include "quasirand/graph.hpp"

using namespace quasirand;
using qt::cls;

TEST_CASE("census of K3 and C4") {
  auto k3 = induced_census(qt::complete_graph(3), 3);
  CHECK(k3.count(cls("K3")) == 1);
  CHECK(k3.count(cls("P2")) == 0);
  CHECK(k3.total() == 1);

  for (auto method : {CensusMethod::kEnumerate, CensusMethod::kAlgebraic}) {
    auto c4 = induced_census(qt::cycle_graph(4), 3, method);
    CHECK(c4.count(cls("P2")) == 4);
    CHECK(c4.count(cls("K3")) == 0);
    CHECK(c4.count(cls("K2+K1")) == 0);
    CHECK(c4.count(cls("3K1")) == 0);
    CHECK(c4.total() == 4);
  }
}

TEST_CASE("census preconditions") {
  Graph loops(5, true);
  CHECK_THROWS_AS(induced_census(loops, 3), Error);
  CHECK_THROWS_AS(induced_census(Graph(3), 4), Error);
  CHECK_THROWS_AS(induced_census(Graph(8), 6), Error);
  CHECK_THROWS_AS(induced_census(Graph(8), 5, CensusMethod::kAlgebraic), Error);
}

TEST_CASE("algebraic census matches enumeration") {
  for (std::uint64_t s = 0; s < 500; ++s) {
    const double p = 0.1 + 0.8 * static_cast<double>(s % 9) / 8.0;
    auto g = sample_gnp(25, EdgeProbability::from_double(p), Seed{s});
    for (int k = 3; k <= 4; ++k) {
      auto a = induced_census(g, k, CensusMethod::kAlgebraic);
      auto b = induced_census(g, k, CensusMethod::kEnumerate);
      CHECK(a.counts == b.counts);
    }
  }
  // multiword rows
  auto g = sample_gnp(150, EdgeProbability::from_double(0.5), Seed{11});
  CHECK(induced_census(g, 4, CensusMethod::kAlgebraic).counts ==
        induced_census(g, 4, CensusMethod::kEnumerate).counts);
}

TEST_CASE("census totals") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    auto g = sample_gnp(13, EdgeProbability::from_double(0.4), Seed{s});
    for (int k = 1; k <= 5; ++k) CHECK(induced_census(g, k).total() == binomial(13, k));
  }
}

TEST_CASE("expected counts") {
  const Rational p(2, 7);
  CHECK(expected_count(cls("K3"), 3, p) == p * p * p);
  CHECK(expected_count(cls("K2"), 9, p) == p * 36);
  CHECK(expected_count(cls("P2"), 3, Rational(1, 2)) == Rational(3, 8));
  CHECK(expected_count(cls("P2"), 3, 0.5) == doctest::Approx(0.375));
  // expectations of a fixed order sum to C(n,k)
  for (int k = 2; k <= 5; ++k) {
    Rational sum = 0;
    for (const auto& f : Catalog::instance().classes(k)) sum += expected_count(f, 11, p);
    CHECK(sum == Rational(binomial(11, k)));
  }
}

TEST_CASE("deviation examples") {
  auto five = qt::make_graph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 4}});
  CHECK(deviation(five, Rational(1, 2), 2).u_k == 0);
  CHECK(deviation(qt::complete_graph(5), Rational(1, 2), 2).u_k == 5);
  auto k3 = deviation(qt::complete_graph(3), Rational(1, 2), 3);
  CHECK(k3.u_k == Rational(7, 8));
  CHECK(Catalog::instance().classes(3)[k3.argmax] == cls("K3"));
}

TEST_CASE("complement symmetry of u_k") {
  for (std::uint64_t s = 0; s < 30; ++s) {
    auto g = sample_gnp(10, EdgeProbability::from_double(0.5), Seed{s});
    const Rational p(1, 3);
    for (int k = 2; k <= 5; ++k) {
      CHECK(deviation(g, p, k).u_k == deviation(complement(g), Rational(1 - p), k).u_k);
    }
  }
}

TEST_CASE("step-up identity and inequality") {
  const auto& cat = Catalog::instance();
  const Rational p(2, 5);
  for (std::uint64_t s = 0; s < 40; ++s) {
    const int n = 6 + static_cast<int>(s % 6);
    auto g = sample_gnp(n, EdgeProbability::from_double(0.5), Seed{s});
    for (int k = 2; k <= 4; ++k) {
      auto lo = induced_census(g, k);
      auto hi = induced_census(g, k + 1);
      auto dlo = deviation_from_census(lo, p);
      auto dhi = deviation_from_census(hi, p);
      auto lower = cat.classes(k);
      auto upper = cat.classes(k + 1);
      for (std::size_t f = 0; f < lower.size(); ++f) {
        std::int64_t rhs = 0;
        Rational weighted = 0;
        for (std::size_t h = 0; h < upper.size(); ++h) {
          const auto c = count_induced_small(lower[f], upper[h]);
          rhs += c * hi.counts[h];
          weighted += Rational(c) * dhi.per_class[h];
        }
        CHECK((n - k) * lo.counts[f] == rhs);
        CHECK(weighted >= Rational(n - k) * dlo.per_class[f]);
      }
    }
  }
}

TEST_CASE("census is identical across worker counts") {
  auto g = sample_gnp(60, EdgeProbability::from_double(0.5), Seed{2});
  auto a = induced_census(g, 5);
  setenv("QUASIRAND_THREADS", "1", 1);
  auto b = induced_census(g, 5);
  auto c = induced_census(g, 4);
  unsetenv("QUASIRAND_THREADS");
  CHECK(a.counts == b.counts);
  CHECK(c.counts == induced_census(g, 4).counts);
}
