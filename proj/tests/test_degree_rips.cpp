#include <doctest.h>

#include "layerscope/degree_rips.hpp"
#include "support/oracles.hpp"

using namespace layerscope;

namespace {

FiniteMetricSpace line013() {
  return load_matrix_csv_text("a,b,c\n0,1,3\n1,0,2\n3,2,0\n");
}

}  // namespace

TEST_CASE("lesnick graph on the 0,1,3 line") {
  auto space = line013();

  auto g = lesnick_graph(space, Rational(1), 0);
  CHECK(g.vertices == std::vector<index_t>{0, 1, 2});
  REQUIRE(g.edges.size() == 1);
  CHECK(g.edges[0] == std::pair<index_t, index_t>{0, 1});

  auto g1 = lesnick_graph(space, Rational(1), 1);
  CHECK(g1.vertices == std::vector<index_t>{0, 1});  // c's nearest point is 2 away
  CHECK(g1.edges.size() == 1);

  auto g2 = lesnick_graph(space, Rational(2), 2);
  CHECK(g2.vertices == std::vector<index_t>{1});  // only b sees two points within 2
  CHECK(g2.edges.empty());

  auto g0 = lesnick_graph(space, Rational(0), 0);
  CHECK(g0.vertices.size() == 3);
  CHECK(g0.edges.empty());

  CHECK(lesnick_graph(space, Rational(-1), 0).vertices.empty());
  CHECK_THROWS_AS(lesnick_graph(space, Rational(1), -1), Error);
}

TEST_CASE("components keep uncovered points uncovered") {
  auto space = line013();
  auto all = components(lesnick_graph(space, Rational(2), 0));
  REQUIRE(all.count() == 1);
  CHECK(all.clusters()[0] == std::vector<index_t>{0, 1, 2});

  auto partial = components(lesnick_graph(space, Rational(1), 1));
  REQUIRE(partial.count() == 1);
  CHECK(partial.clusters()[0] == std::vector<index_t>{0, 1});
  CHECK(partial.owner(0) == 0);
  CHECK(partial.owner(2) == Clustering::kNone);
  CHECK(partial.ground_size() == 3);
}

TEST_CASE("clusterings canonicalize and validate their input") {
  Clustering c(5, {{4, 2}, {1, 3}});
  REQUIRE(c.count() == 2);
  CHECK(c.clusters()[0] == std::vector<index_t>{1, 3});
  CHECK(c.clusters()[1] == std::vector<index_t>{2, 4});
  CHECK(c.owner(4) == 1);
  CHECK(c.index_of({1, 3}) == std::size_t{0});
  CHECK_FALSE(c.index_of({1}).has_value());
  CHECK_FALSE(c.index_of({0}).has_value());
  CHECK_FALSE(c.index_of({}).has_value());

  CHECK_THROWS_AS(Clustering(3, {{}}), Error);
  CHECK_THROWS_AS(Clustering(3, {{0, 1}, {1, 2}}), Error);
  CHECK_THROWS_AS(Clustering(3, {{0, 3}}), Error);
}

TEST_CASE("real density parameters round up to the next degree") {
  auto space = line013();
  CHECK(clustering_at(space, Rational(1), Rational(1, 2)) ==
        clustering_at_degree(space, Rational(1), 1));
  CHECK(clustering_at(space, Rational(1), Rational(1)) ==
        clustering_at_degree(space, Rational(1), 1));
  CHECK(clustering_at(space, Rational(2), Rational(6, 5)) ==
        clustering_at_degree(space, Rational(2), 2));
  CHECK(clustering_at(space, Rational(-1), Rational(0)).empty());
  CHECK(clustering_at(space, Rational(1), Rational(-1, 2)).empty());
  CHECK(clustering_at(space, Rational(3), Rational(100)).empty());
}

TEST_CASE("critical grid lists a sentinel, zero and the distinct distances") {
  auto grid = critical_grid(line013(), 2);
  CHECK(grid.k_max == 2);
  REQUIRE(grid.scales.size() == 5);
  CHECK(grid.scales[0] == Rational(-1));
  CHECK(grid.scales[1] == Rational(0));
  CHECK(grid.scales[2] == Rational(1));
  CHECK(grid.scales[3] == Rational(2));
  CHECK(grid.scales[4] == Rational(3));
  CHECK_THROWS_AS(critical_grid(line013(), -1), Error);
}

TEST_CASE("union find reports genuine merges") {
  UnionFind uf(4);
  CHECK(uf.unite(0, 1));
  CHECK(uf.unite(2, 3));
  CHECK(uf.unite(0, 3));
  CHECK_FALSE(uf.unite(1, 2));
  CHECK(uf.find(0) == uf.find(2));
}

TEST_CASE("clusterings agree with the closure oracle across the grid") {
  oracles::Rng rng(40115);
  for (int trial = 0; trial < 60; ++trial) {
    auto space = oracles::random_space(rng, 2 + rng.below(6));
    auto grid = critical_grid(space, 3);
    for (const Rational& scale : grid.scales) {
      if (scale < 0) continue;
      for (int degree = 0; degree <= 3; ++degree) {
        CAPTURE(trial);
        CAPTURE(degree);
        auto got = clustering_at_degree(space, scale, degree);
        CHECK(oracles::cluster_sets(got) == oracles::naive_components(space, scale, degree));
      }
    }
  }
}

TEST_CASE("off-grid parameters match the oracle evaluated with rounding") {
  oracles::Rng rng(40116);
  for (int trial = 0; trial < 40; ++trial) {
    auto space = oracles::random_space(rng, 2 + rng.below(5));
    Rational scale(static_cast<long>(rng.below(40)), 7);
    Rational density(static_cast<long>(rng.below(14)), 4);
    auto got = clustering_at(space, scale, density);
    long degree = ceil_rational(density).convert_to<long>();
    CHECK(oracles::cluster_sets(got) == oracles::naive_components(space, scale, degree));
  }
}
