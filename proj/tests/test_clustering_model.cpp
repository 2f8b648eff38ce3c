#include <doctest.h>

#include "layerscope/clustering_model.hpp"
#include "support/oracles.hpp"

using namespace layerscope;

namespace {

FiniteMetricSpace line013() {
  return load_matrix_csv_text("a,b,c\n0,1,3\n1,0,2\n3,2,0\n");
}

Clustering on3(std::vector<std::vector<index_t>> clusters) {
  return Clustering(3, std::move(clusters));
}

}  // namespace

TEST_CASE("axis grids locate points in poset order") {
  AxisGrid up{+1, {Rational(-1), Rational(0), Rational(2)}};
  CHECK(up.locate(Rational(1)) == std::size_t{1});
  CHECK(up.locate(Rational(2)) == std::size_t{2});
  CHECK(up.locate(Rational(100)) == std::size_t{2});
  CHECK(up.locate(Rational(-1)) == std::size_t{0});
  CHECK_FALSE(up.locate(Rational(-2)).has_value());
  CHECK(up.position_of(Rational(0)) == std::size_t{1});
  CHECK_FALSE(up.position_of(Rational(1)).has_value());

  AxisGrid down{-1, {Rational(2), Rational(1), Rational(0)}};
  CHECK(down.locate(Rational(1, 2)) == std::size_t{1});  // smallest grid value above 1/2
  CHECK(down.locate(Rational(0)) == std::size_t{2});
  CHECK(down.locate(Rational(2)) == std::size_t{0});
  CHECK_FALSE(down.locate(Rational(5)).has_value());
  CHECK(down.position_of(Rational(1)) == std::size_t{1});
}

TEST_CASE("refinement order on clusterings") {
  CHECK(clustering_leq(on3({}), on3({{0, 1, 2}})));
  CHECK(clustering_leq(on3({{0}, {1}}), on3({{0, 1}, {2}})));
  CHECK_FALSE(clustering_leq(on3({{0, 1}}), on3({{0}, {1}})));
  CHECK_FALSE(clustering_leq(on3({{2}}), on3({{0, 1}})));
  CHECK_FALSE(clustering_leq(on3({{0, 2}}), on3({{0, 1}, {2}})));
  CHECK_THROWS_AS(clustering_leq(on3({}), Clustering(2, {})), Error);
}

TEST_CASE("step clustering construction validates the table") {
  AxisGrid axis{+1, {Rational(-1), Rational(0), Rational(1)}};
  auto labels = numeric_labels(2);
  Clustering empty2(2, {});
  Clustering split(2, {{0}, {1}});
  Clustering joined(2, {{0, 1}});

  StepClustering ok({axis}, 2, labels, {empty2, split, joined});
  CHECK(ok.cell_count() == 3);
  CHECK(ok.variance() == std::vector<int>{1});

  CHECK_THROWS_AS(StepClustering({axis}, 2, labels, {split, split, joined}), Error);
  CHECK_THROWS_AS(StepClustering({axis}, 2, labels, {empty2, joined, split}), Error);
  CHECK_THROWS_AS(StepClustering({axis}, 2, labels, {empty2, joined}), Error);
  CHECK_THROWS_AS(StepClustering({}, 2, labels, {}), Error);
  AxisGrid bad{+1, {Rational(0), Rational(0)}};
  CHECK_THROWS_AS(StepClustering({bad}, 2, labels, {empty2, empty2}), Error);
}

TEST_CASE("degree rips model of the 0,1,3 line") {
  auto H = from_degree_rips(line013(), 1);
  REQUIRE(H.axis_count() == 2);
  CHECK(H.axes()[0].variance == 1);
  CHECK(H.axes()[0].values ==
        std::vector<Rational>{Rational(-1), Rational(0), Rational(1), Rational(2), Rational(3)});
  CHECK(H.axes()[1].variance == -1);
  CHECK(H.axes()[1].values == std::vector<Rational>{Rational(2), Rational(1), Rational(0)});
  CHECK(H.cell_count() == 15);
  CHECK(H.ground_labels() == std::vector<std::string>{"a", "b", "c"});

  // Step evaluation against direct clustering computation.
  std::vector<Rational> p{Rational(1), Rational(1)};
  CHECK(H.at(p) == clustering_at_degree(line013(), Rational(1), 1));
  std::vector<Rational> q{Rational(1, 2), Rational(7, 10)};
  CHECK(H.at(q) == clustering_at_degree(line013(), Rational(0), 1));
  std::vector<Rational> big{Rational(100), Rational(0)};
  CHECK(H.at(big).count() == 1);
  std::vector<Rational> neg{Rational(-5), Rational(0)};
  CHECK(H.at(neg).empty());
  std::vector<Rational> deep{Rational(3), Rational(3, 2)};
  CHECK(H.at(deep).empty());  // degrees above k_max are outside the model
}

TEST_CASE("cell positions and linear cells are inverse") {
  auto H = from_degree_rips(line013(), 2);
  for (std::size_t cell = 0; cell < H.cell_count(); ++cell) {
    auto pos = H.cell_position(cell);
    CHECK(H.linear_cell(pos) == cell);
    auto values = H.cell_values(cell);
    REQUIRE(values.size() == 2);
    CHECK(values[0] == H.axes()[0].values[pos[0]]);
    CHECK(values[1] == H.axes()[1].values[pos[1]]);
  }
}

TEST_CASE("step cells move along one axis only") {
  auto H = from_degree_rips(line013(), 1);
  std::size_t cell = H.linear_cell(std::vector<std::uint32_t>{2, 1});
  auto up0 = H.step_cell(cell, 0, +1);
  REQUIRE(up0.has_value());
  CHECK(H.cell_position(*up0) == std::vector<std::uint32_t>{3, 1});
  auto down1 = H.step_cell(cell, 1, -1);
  REQUIRE(down1.has_value());
  CHECK(H.cell_position(*down1) == std::vector<std::uint32_t>{2, 0});
  std::size_t top = H.linear_cell(std::vector<std::uint32_t>{4, 2});
  CHECK_FALSE(H.step_cell(top, 0, +1).has_value());
  CHECK_FALSE(H.step_cell(top, 1, +1).has_value());
}

TEST_CASE("the model agrees with direct clusterings everywhere") {
  oracles::Rng rng(52001);
  for (int trial = 0; trial < 25; ++trial) {
    auto space = oracles::random_space(rng, 2 + rng.below(5));
    int k_max = 1 + static_cast<int>(rng.below(3));
    auto H = from_degree_rips(space, k_max);
    for (std::size_t cell = 0; cell < H.cell_count(); ++cell) {
      auto values = H.cell_values(cell);
      if (values[0] < 0 || values[1] > Rational(k_max)) {
        CHECK(H.cell(cell).empty());
        continue;
      }
      CHECK(oracles::cluster_sets(H.cell(cell)) ==
            oracles::naive_components(space, values[0], values[1].convert_to<long>()));
    }
    // Off-grid points fall back to the cell below them.
    Rational s(static_cast<long>(rng.below(30)), 7);
    Rational t(static_cast<long>(rng.below(4 * static_cast<std::uint64_t>(k_max))), 4);
    std::vector<Rational> coords{s, t};
    CHECK(H.at(coords) == clustering_at(space, s, t));
  }
}

TEST_CASE("slices pin all but one axis") {
  auto space = line013();
  auto H = from_degree_rips(space, 1);

  auto scale_line = slice(H, SliceSpec{0, {Rational(1)}});
  REQUIRE(scale_line.axis_count() == 1);
  CHECK(scale_line.axes()[0].values == H.axes()[0].values);
  for (std::size_t cell = 0; cell < scale_line.cell_count(); ++cell) {
    Rational s = scale_line.axes()[0].values[cell];
    CHECK(scale_line.cell(cell) == clustering_at_degree(space, s, 1));
  }

  auto degree_line = slice(H, SliceSpec{1, {Rational(2)}});
  REQUIRE(degree_line.axis_count() == 1);
  CHECK(degree_line.axes()[0].variance == -1);
  CHECK(degree_line.cell(0).empty());
  CHECK(degree_line.cell(1).count() == 1);
  CHECK(degree_line.cell(2).count() == 1);

  CHECK_THROWS_AS(slice(H, SliceSpec{2, {Rational(0)}}), Error);
  CHECK_THROWS_AS(slice(H, SliceSpec{0, {Rational(1), Rational(0)}}), Error);
  CHECK_THROWS_AS(slice(H, SliceSpec{0, {Rational(1, 2)}}), Error);
}

TEST_CASE("truncation empties everything below the cutoff") {
  auto space = line013();
  auto H = slice(from_degree_rips(space, 0), SliceSpec{0, {Rational(0)}});

  auto mid = truncate_below(H, Rational(3, 2));
  CHECK(mid.axes()[0].values ==
        std::vector<Rational>{Rational(-1), Rational(3, 2), Rational(2), Rational(3)});
  CHECK(mid.cell(0).empty());
  CHECK(mid.cell(1) == clustering_at_degree(space, Rational(1), 0));
  CHECK(mid.cell(2) == clustering_at_degree(space, Rational(2), 0));
  std::vector<Rational> below{Rational(1)};
  CHECK(mid.at(below).empty());
  std::vector<Rational> above{Rational(7, 4)};
  CHECK(mid.at(above) == clustering_at_degree(space, Rational(1), 0));

  auto zero = truncate_below(H, Rational(0));
  CHECK(zero.axes()[0].values == H.axes()[0].values);

  auto on_grid = truncate_below(H, Rational(1));
  CHECK(on_grid.axes()[0].values ==
        std::vector<Rational>{Rational(-1), Rational(1), Rational(2), Rational(3)});

  CHECK_THROWS_AS(truncate_below(H, Rational(-1, 2)), Error);
  CHECK_THROWS_AS(truncate_below(from_degree_rips(space, 1), Rational(1)), Error);
}

TEST_CASE("reinterpreting a model over a larger ground set") {
  auto space = line013();
  auto H = slice(from_degree_rips(space, 0), SliceSpec{0, {Rational(0)}});
  auto lifted = with_ground(H, {1, 3, 4}, 5, numeric_labels(5));
  CHECK(lifted.ground_size() == 5);
  std::vector<Rational> at2{Rational(2)};
  const Clustering& c = lifted.at(at2);
  REQUIRE(c.count() == 1);
  CHECK(c.clusters()[0] == std::vector<index_t>{1, 3, 4});
  CHECK(c.owner(0) == Clustering::kNone);

  CHECK_THROWS_AS(with_ground(H, {1, 3}, 5, numeric_labels(5)), Error);
  CHECK_THROWS_AS(with_ground(H, {1, 1, 4}, 5, numeric_labels(5)), Error);
}

TEST_CASE("step clustering json is deterministic") {
  auto H = from_degree_rips(line013(), 1);
  auto a = step_clustering_json(H);
  auto b = step_clustering_json(H);
  CHECK(a == b);
  CHECK(a.find("layerscope/step-clustering/1") != std::string::npos);
  CHECK(a.back() == '\n');
}
