#include <doctest.h>

#include <cmath>
#include <random>

#include "builders.hpp"
#include "quasirand/census.hpp"
#include "quasirand/signed_stats.hpp"

using namespace quasirand;
using qt::cls;

TEST_CASE("signed sum examples") {
  auto k3 = qt::complete_graph(3);
  CHECK(signed_sum(cls("K2"), k3, 0.5) == doctest::Approx(1.5));
  const Rational p(2, 7);
  CHECK(signed_sum(cls("K3"), k3, p) == (1 - p) * (1 - p) * (1 - p));
  auto p2 = qt::make_graph(3, {{0, 1}, {0, 2}});
  CHECK(signed_sum(cls("P2"), p2, p) == (1 - p) * (1 - p) - 2 * p * (1 - p));
  CHECK(signed_sum_direct(cls("P2"), p2, p) == (1 - p) * (1 - p) - 2 * p * (1 - p));
}

TEST_CASE("S(K2) is the edge excess") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    auto g = sample_gnp(9, EdgeProbability::from_double(0.5), Seed{s});
    const Rational p(1, 3);
    CHECK(signed_sum(cls("K2"), g, p) == Rational(g.edge_count()) - p * 36);
  }
}

TEST_CASE("census route matches direct enumeration") {
  const Rational p(3, 8);
  for (std::uint64_t s = 0; s < 25; ++s) {
    auto g = sample_gnp(8, EdgeProbability::from_double(0.45), Seed{s});
    for (const auto& f : family_Fk(5).members) {
      CHECK(signed_sum(f, g, p) == signed_sum_direct(f, g, p));
    }
  }
  auto g = sample_gnp(30, EdgeProbability::from_double(0.3), Seed{4});
  for (const auto& f : family_Fk(4).members) {
    CHECK(signed_sum(f, g, 0.3) == doctest::Approx(signed_sum_direct(f, g, 0.3)).epsilon(1e-9));
  }
}

TEST_CASE("signed_stats bundles the family") {
  auto g = sample_gnp(12, EdgeProbability::from_double(0.5), Seed{8});
  const Rational p(1, 2);
  auto stats = signed_stats(g, family_Fk(4), p);
  REQUIRE(stats.values.size() == 10);
  for (const auto& f : stats.members) CHECK(stats.value(f) == signed_sum(f, g, p));
}

TEST_CASE("pair delta") {
  std::mt19937_64 rng(5);
  const Rational p(2, 5);
  auto g0 = sample_gnp(9, EdgeProbability::from_double(0.5), Seed{3});
  CHECK(pair_delta(cls("K2"), g0, p, 0, 1) == 1);
  CHECK(pair_delta(cls("K2"), g0, 0.4, 2, 5) == 1.0);

  for (int trial = 0; trial < 200; ++trial) {
    const int n = 5 + static_cast<int>(rng() % 11);
    auto g = sample_gnp(n, EdgeProbability::from_double(0.5), Seed{rng()});
    const int i = static_cast<int>(rng() % n);
    int j = static_cast<int>(rng() % (n - 1));
    if (j >= i) ++j;
    const auto fam = family_Fk(n >= 5 ? 5 : 4).members;
    const auto& f = fam[rng() % fam.size()];
    Graph with = g;
    with.set_edge(i, j, true);
    Graph without = g;
    without.set_edge(i, j, false);
    const Rational want = signed_sum_direct(f, with, p) - signed_sum_direct(f, without, p);
    CHECK(pair_delta(f, g, p, i, j) == want);
    CHECK(pair_delta_direct(f, g, p, i, j) == want);
  }
}

TEST_CASE("pair delta on multiword rows") {
  auto g = sample_gnp(140, EdgeProbability::from_double(0.5), Seed{12});
  for (const auto& f : family_Fk(4).members) {
    const double fast = pair_delta(f, g, 0.5, 3, 130);
    const double slow = pair_delta_direct(f, g, 0.5, 3, 130);
    CHECK(fast == doctest::Approx(slow).epsilon(1e-9));
  }
}

TEST_CASE("decomposition coefficients") {
  auto k2 = decomposition_coefficients(cls("K2"), 7);
  REQUIRE(k2.members.size() == 1);
  CHECK(k2.coefficients[0] == Polynomial::constant(1));
  CHECK(k2.constant == Polynomial::binomial_power(0, 21, 1));

  auto k3 = decomposition_coefficients(cls("K3"), 9);
  for (std::size_t i = 0; i < k3.members.size(); ++i) {
    const auto name = Catalog::instance().name(k3.members[i]);
    const auto& c = k3.coefficients[i];
    if (name == "K2") CHECK(c == Polynomial(std::vector<Rational>{0, 0, 7}));
    if (name == "P2") CHECK(c == Polynomial(std::vector<Rational>{0, 1}));
    if (name == "K3") CHECK(c == Polynomial::constant(1));
  }

  const Rational p(1, 3);
  for (int k = 2; k <= 5; ++k) {
    for (const auto& h : Catalog::instance().classes(k)) {
      auto dc = decomposition_coefficients(h, 8);
      CHECK(dc.constant.evaluate(p) == expected_count(h, 8, p));
    }
  }
}

TEST_CASE("decomposition identity on random graphs") {
  const Rational p(1, 3);
  for (std::uint64_t s = 0; s < 10; ++s) {
    auto g = sample_gnp(6, EdgeProbability::from_double(0.5), Seed{s});
    for (int k = 2; k <= 5; ++k) {
      for (const auto& h : Catalog::instance().classes(k)) {
        CHECK(decomposition_residual(decomposition_coefficients(h, 6), g, p) == 0);
      }
    }
  }
}

TEST_CASE("deviation equals the decomposition's signed part") {
  const Rational p(2, 5);
  auto g = sample_gnp(7, EdgeProbability::from_double(0.5), Seed{77});
  auto stats = signed_stats(g, family_Fk(4), p);
  auto dev = deviation(g, p, 4);
  const auto classes = Catalog::instance().classes(4);
  for (std::size_t i = 0; i < classes.size(); ++i) {
    auto dc = decomposition_coefficients(classes[i], 7);
    Rational sum = 0;
    for (std::size_t f = 0; f < dc.members.size(); ++f) {
      sum += dc.coefficients[f].evaluate(p) * stats.value(dc.members[f]);
    }
    CHECK(dev.per_class[i] == abs(sum));
  }
}

TEST_CASE("edge square weights") {
  CHECK(edge_square_weight(cls("K2")) == 1);
  CHECK(edge_square_weight(cls("P2")) == 2);
  CHECK(edge_square_weight(cls("K3")) == 6);
  for (const auto& f : Catalog::instance().classes(4)) {
    int disjoint = 0;
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b)
        if (f.has_edge(a, b)) {
          int c = -1, d = -1;
          for (int v = 0; v < 4; ++v)
            if (v != a && v != b) (c < 0 ? c : d) = v;
          if (f.has_edge(c, d)) ++disjoint;
        }
    CHECK(edge_square_weight(f) == disjoint);  // each disjoint pair counted from both ends
  }
}

TEST_CASE("quadratic identities") {
  auto empty = quadratic_identities_check(Graph(5), Rational(1, 3));
  CHECK(empty.edge_square_residual == 0);
  CHECK(empty.signed_residual == 0);
  CHECK(empty.s_k2 == Rational(-10, 3));

  auto full = quadratic_identities_check(qt::complete_graph(5), Rational(1, 2));
  CHECK(full.edge_square_residual == 0);
  CHECK(full.signed_residual == 0);

  for (std::uint64_t s = 0; s < 10; ++s) {
    auto g = sample_gnp(40, EdgeProbability::from_double(0.3), Seed{s});
    auto r = quadratic_identities_check(g, 0.3);
    CHECK(r.edge_square_residual == 0.0);
    CHECK(std::abs(r.signed_residual) < 1e-6 * (1 + r.s_k2 * r.s_k2));
  }
}
