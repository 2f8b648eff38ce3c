#include <doctest.h>

#include <cmath>

#include "layerscope/metric.hpp"
#include "support/oracles.hpp"

using namespace layerscope;

namespace {

// Runs f, expecting an Error; returns its message for substring checks.
template <typename F>
std::string error_message(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("matrix loader reads the 0,1,3 line") {
  auto space = load_matrix_csv_text("a,b,c\n0,1,3\n1,0,2\n3,2,0\n");
  REQUIRE(space.size() == 3);
  CHECK(space.label(0) == "a");
  CHECK(space.d(0, 1) == Rational(1));
  CHECK(space.d(0, 2) == Rational(3));
  CHECK(space.d(2, 1) == Rational(2));
}

TEST_CASE("matrix loader rejects malformed input") {
  CHECK(contains(error_message([] { load_matrix_csv_text(""); }), "empty"));
  CHECK(contains(error_message([] { load_matrix_csv_text("a,b\n0,1\n"); }), "expected 2 matrix rows"));
  CHECK(contains(error_message([] { load_matrix_csv_text("a,b\n0,x\nx,0\n"); }),
                 "not a decimal number"));
  CHECK(contains(error_message([] { load_matrix_csv_text("a,b\n0,1\n2,0\n"); }), "asymmetric"));
  CHECK(contains(error_message([] { load_matrix_csv_text("a,b\n1,1\n1,0\n"); }), "nonzero diagonal"));
  CHECK(contains(error_message([] { load_matrix_csv_text("a,a\n0,1\n1,0\n"); }), "duplicate label"));
  CHECK(contains(
      error_message([] { load_matrix_csv_text("a,b,c\n0,1,9\n1,0,2\n9,2,0\n"); }),
      "triangle inequality fails"));
}

TEST_CASE("point loader is exact for manhattan, chebyshev and 1-D euclidean") {
  auto l1 = load_points_csv_text("a,0,0\nb,3,4\n", PointMetric::manhattan);
  CHECK(l1.d(0, 1) == Rational(7));
  auto linf = load_points_csv_text("a,0,0\nb,3,4\n", PointMetric::chebyshev);
  CHECK(linf.d(0, 1) == Rational(4));
  auto line = load_points_csv_text("a,0.5\nb,3\n", PointMetric::euclidean);
  CHECK(line.d(0, 1) == Rational(5, 2));
}

TEST_CASE("euclidean distances use exact square roots when possible") {
  auto space = load_points_csv_text("a,0,0\nb,3,4\nc,0.3,0.4\n", PointMetric::euclidean);
  CHECK(space.d(0, 1) == Rational(5));
  CHECK(space.d(0, 2) == Rational(1, 2));
}

TEST_CASE("irrational euclidean distances snap to the 1e-12 grid") {
  auto space = load_points_csv_text("a,0,0\nb,1,1\n", PointMetric::euclidean);
  const Rational& d = space.d(0, 1);
  CHECK(d == quantize(std::sqrt(2.0)));
  CHECK(d * d != Rational(2));  // snapped, not exact
  Rational error = d * d - Rational(2);
  if (error < 0) error = -error;
  CHECK(error < Rational(1, 100000000000));  // within ~3e-12 of the true square
}

TEST_CASE("snapping that could merge distinct distances is rejected") {
  // Squared distances 2 and 2 + 1e-13: the roots differ by far less than one
  // grid step, so no 1e-12 snapping can keep them apart.
  auto msg = error_message([] {
    load_points_csv_text("a,0,0\nb,1,1\nc,5,0\nd,6,1.00000000000005\n", PointMetric::euclidean);
  });
  CHECK(contains(msg, "differ by less than 1e-12"));
}

TEST_CASE("phase change profile of the 0,1,3 line") {
  auto space = load_matrix_csv_text("a,b,c\n0,1,3\n1,0,2\n3,2,0\n");
  auto profile = phase_change_profile(space);
  REQUIRE(profile.values.size() == 4);
  CHECK(profile.values[0] == Rational(0));
  CHECK(profile.values[1] == Rational(1));
  CHECK(profile.values[2] == Rational(2));
  CHECK(profile.values[3] == Rational(3));
  CHECK(profile.merge_index == 2);
}

TEST_CASE("phase change profile with duplicate points") {
  auto space = load_points_csv_text("a,0\nb,0\n", PointMetric::euclidean);
  auto profile = phase_change_profile(space);
  REQUIRE(profile.values.size() == 1);
  CHECK(profile.values[0] == Rational(0));
  CHECK(profile.merge_index == 0);
}

TEST_CASE("hausdorff and density radius on the worked subsample") {
  auto parent = load_points_csv_text("y0,0\ny1,0.5\ny2,10\ny3,10.5\ny4,20\ny5,20.5\n",
                                     PointMetric::euclidean);
  auto sample = Subsample::of(parent, {0, 2, 4});
  CHECK(directional_hausdorff(parent, sample) == Rational(1, 2));
  CHECK(density_radius(sample, parent, 0) == Rational(0));
  CHECK(density_radius(sample, parent, 1) == Rational(1, 2));
  CHECK(density_radius(sample, parent, 2) == Rational(10));
}

TEST_CASE("density radius matches the sorted-distance oracle on random spaces") {
  oracles::Rng rng(7101);
  for (int trial = 0; trial < 40; ++trial) {
    auto space = oracles::random_space(rng, 2 + rng.below(6));
    auto sample = Subsample::full(space);
    for (int k = 0; k < static_cast<int>(space.size()); ++k) {
      CHECK(density_radius(sample, space, k) == oracles::naive_density_radius(sample, space, k));
    }
  }
}

TEST_CASE("density radius insists on enough ambient points") {
  auto space = load_points_csv_text("a,0\nb,1\n", PointMetric::euclidean);
  CHECK_THROWS_AS(density_radius(Subsample::full(space), space, 2), Error);
}

TEST_CASE("nearest point map warns about ties and duplicates") {
  auto parent = load_points_csv_text("a,0\nb,1\nc,2\n", PointMetric::euclidean);
  auto map = nearest_point_map(parent, Subsample::of(parent, {0, 2}));
  CHECK(map.to_sample[0] == 0);
  CHECK(map.to_sample[1] == 0);  // tie broken toward the smaller index
  CHECK(map.to_sample[2] == 2);
  REQUIRE(map.warnings.size() == 1);
  CHECK(contains(map.warnings[0], "equidistant"));

  auto dup_parent = load_points_csv_text("a,0\nb,0\nc,5\n", PointMetric::euclidean);
  auto dup_map = nearest_point_map(dup_parent, Subsample::of(dup_parent, {0, 1}));
  CHECK(dup_map.to_sample[0] == 0);  // duplicated sample points still map to themselves
  CHECK(dup_map.to_sample[1] == 1);
  CHECK(dup_map.to_sample[2] == 0);
  REQUIRE(dup_map.warnings.size() == 3);
  CHECK(contains(dup_map.warnings[0], "duplicates"));
  CHECK(contains(dup_map.warnings[1], "duplicates"));
  CHECK(contains(dup_map.warnings[2], "equidistant"));
}

TEST_CASE("farthest point sampling is greedy and seeded") {
  auto space = load_points_csv_text("a,0\nb,1\nc,3\nd,10\n", PointMetric::euclidean);
  auto two = farthest_point_sample(space, 2, 0);
  REQUIRE(two.indices.size() == 2);
  CHECK(two.indices[0] == 0);
  CHECK(two.indices[1] == 3);
  auto from_c = farthest_point_sample(space, 2, 2);  // starts at index 2
  CHECK(from_c.indices[0] == 2);
  CHECK(from_c.indices[1] == 3);
  auto all = farthest_point_sample(space, 4, 17);
  CHECK(all.indices == std::vector<index_t>{0, 1, 2, 3});
  CHECK_THROWS_AS(farthest_point_sample(space, 0, 0), Error);
  CHECK_THROWS_AS(farthest_point_sample(space, 5, 0), Error);
}

TEST_CASE("subsample restriction inherits labels and distances") {
  auto parent = load_matrix_csv_text("a,b,c\n0,1,3\n1,0,2\n3,2,0\n");
  auto sub = Subsample::of(parent, {0, 2});
  auto restricted = sub.restricted(parent);
  REQUIRE(restricted.size() == 2);
  CHECK(restricted.label(0) == "a");
  CHECK(restricted.label(1) == "c");
  CHECK(restricted.d(0, 1) == Rational(3));
}

TEST_CASE("subsample validation") {
  auto parent = load_matrix_csv_text("a,b,c\n0,1,3\n1,0,2\n3,2,0\n");
  CHECK_THROWS_AS(Subsample::of(parent, {}), Error);
  CHECK_THROWS_AS(Subsample::of(parent, {0, 0}), Error);
  CHECK_THROWS_AS(Subsample::of(parent, {2, 1}), Error);
  CHECK_THROWS_AS(Subsample::of(parent, {3}), Error);
}
