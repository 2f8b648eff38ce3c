#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <layerscope.h>

#include <cstddef>
#include <cstring>
#include <string>
#include <vector>

namespace {

const char* kLineMatrix = "a,b,c\n0,1,3\n1,0,2\n3,2,0\n";
const char* kPairPoints = "y0,0\ny1,0.5\ny2,10\ny3,10.5\ny4,20\ny5,20.5\n";

std::string take(char* s) {
  std::string out = s ? s : "";
  ls_string_free(s);
  return out;
}

bool contains(const std::string& text, const std::string& needle) {
  return text.find(needle) != std::string::npos;
}

ls_space* line_space() {
  ls_space* space = nullptr;
  REQUIRE(ls_space_from_matrix_csv(kLineMatrix, &space) == LS_OK);
  return space;
}

ls_space* pair_space() {
  ls_space* space = nullptr;
  REQUIRE(ls_space_from_points_csv(kPairPoints, "euclidean", &space) == LS_OK);
  return space;
}

}  // namespace

TEST_CASE("version and error state") {
  CHECK(std::strcmp(ls_version(), "0.1.0") == 0);
  CHECK(std::string(ls_last_error()).empty());
}

TEST_CASE("matrix loader round trip and failures") {
  ls_space* space = line_space();
  size_t n = 0;
  CHECK(ls_space_size(space, &n) == LS_OK);
  CHECK(n == 3);
  ls_space_free(space);

  ls_space* bad = nullptr;
  CHECK(ls_space_from_matrix_csv("a,b\n0,1\n2,0\n", &bad) == LS_ERROR_VALIDATION);
  CHECK(contains(ls_last_error(), "asymmetric"));
  CHECK(ls_space_from_matrix_csv("a,b\n0,q\nq,0\n", &bad) == LS_ERROR_PARSE);
  CHECK(contains(ls_last_error(), "not a decimal"));
  CHECK(ls_space_from_matrix_csv(nullptr, &bad) == LS_ERROR_ARGUMENT);
  CHECK(contains(ls_last_error(), "must not be null"));

  // A successful call clears the sticky message.
  space = line_space();
  CHECK(std::string(ls_last_error()).empty());
  ls_space_free(space);
}

TEST_CASE("points loader and metric names") {
  ls_space* space = pair_space();
  size_t n = 0;
  CHECK(ls_space_size(space, &n) == LS_OK);
  CHECK(n == 6);
  ls_space_free(space);

  ls_space* bad = nullptr;
  CHECK(ls_space_from_points_csv("a,0\nb,1\n", "minkowski", &bad) == LS_ERROR_ARGUMENT);
  CHECK(contains(ls_last_error(), "unknown metric"));

  // Manhattan distance between (0,0) and (3,4) is 7; it shows up as a scale
  // axis value of the exported clustering.
  ls_space* taxi = nullptr;
  REQUIRE(ls_space_from_points_csv("p,0,0\nq,3,4\n", "manhattan", &taxi) == LS_OK);
  ls_clustering* clustering = nullptr;
  REQUIRE(ls_degree_rips(taxi, 0, &clustering) == LS_OK);
  char* text = nullptr;
  REQUIRE(ls_clustering_json(clustering, &text) == LS_OK);
  CHECK(contains(take(text), "\"7\""));
  ls_clustering_free(clustering);
  ls_space_free(taxi);
}

TEST_CASE("farthest point sampling") {
  ls_space* space = nullptr;
  REQUIRE(ls_space_from_points_csv("a,0\nb,1\nc,3\nd,10\n", "euclidean", &space) == LS_OK);

  size_t* picks = nullptr;
  size_t len = 0;
  REQUIRE(ls_farthest_point_sample(space, 2, 0, &picks, &len) == LS_OK);
  REQUIRE(len == 2);
  CHECK(picks[0] == 0);
  CHECK(picks[1] == 3);
  ls_indices_free(picks);

  REQUIRE(ls_farthest_point_sample(space, 2, 2, &picks, &len) == LS_OK);
  REQUIRE(len == 2);
  CHECK(picks[0] == 2);
  CHECK(picks[1] == 3);
  ls_indices_free(picks);

  REQUIRE(ls_farthest_point_sample(space, 4, 7, &picks, &len) == LS_OK);
  REQUIRE(len == 4);
  for (size_t i = 0; i < 4; ++i) CHECK(picks[i] == i);
  ls_indices_free(picks);

  CHECK(ls_farthest_point_sample(space, 0, 0, &picks, &len) == LS_ERROR_ARGUMENT);
  CHECK(ls_farthest_point_sample(space, 5, 0, &picks, &len) == LS_ERROR_ARGUMENT);
  ls_space_free(space);
}

TEST_CASE("degree rips exports") {
  ls_space* space = line_space();
  ls_clustering* clustering = nullptr;
  REQUIRE(ls_degree_rips(space, 1, &clustering) == LS_OK);

  char* first = nullptr;
  char* second = nullptr;
  REQUIRE(ls_clustering_json(clustering, &first) == LS_OK);
  REQUIRE(ls_clustering_json(clustering, &second) == LS_OK);
  std::string a = take(first);
  std::string b = take(second);
  CHECK(a == b);
  CHECK(contains(a, "layerscope/step-clustering/1"));
  CHECK(contains(a, "\"a\""));
  CHECK(a.back() == '\n');

  char* dot = nullptr;
  REQUIRE(ls_gamma_dot(clustering, &dot) == LS_OK);
  CHECK(contains(take(dot), "digraph"));

  ls_clustering* none = nullptr;
  CHECK(ls_degree_rips(space, -1, &none) == LS_ERROR_ARGUMENT);
  ls_clustering_free(clustering);
  ls_space_free(space);
}

TEST_CASE("layer point selection") {
  ls_space* space = line_space();
  ls_clustering* clustering = nullptr;
  REQUIRE(ls_degree_rips(space, 0, &clustering) == LS_OK);

  char* out = nullptr;
  REQUIRE(ls_layer_points_json(clustering, LS_LAYER_POINTS, 0, &out) == LS_OK);
  std::string layers = take(out);
  CHECK(contains(layers, "layerscope/layer-points/1"));
  CHECK(contains(layers, "global-layer"));
  CHECK(contains(layers, "slice-1-layer"));
  CHECK(contains(layers, "slice-2-layer"));
  CHECK_FALSE(contains(layers, "branch"));

  REQUIRE(ls_layer_points_json(clustering, LS_BRANCH_POINTS, 0, &out) == LS_OK);
  std::string branches = take(out);
  CHECK(contains(branches, "global-branch"));
  CHECK_FALSE(contains(branches, "global-layer"));

  REQUIRE(ls_layer_points_json(clustering, LS_LAYER_POINTS | LS_BRANCH_POINTS, 0, &out) == LS_OK);
  std::string both = take(out);
  CHECK(contains(both, "global-layer"));
  CHECK(contains(both, "global-branch"));

  REQUIRE(ls_layer_points_json(clustering, LS_LAYER_POINTS, 1, &out) == LS_OK);
  std::string sliced = take(out);
  CHECK(contains(sliced, "slice-1-layer"));
  CHECK_FALSE(contains(sliced, "global-layer"));
  CHECK_FALSE(contains(sliced, "slice-2-layer"));

  REQUIRE(ls_layer_points_dot(clustering, LS_LAYER_POINTS, 0, &out) == LS_OK);
  CHECK(contains(take(out), "digraph lambda"));

  CHECK(ls_layer_points_json(clustering, 0, 0, &out) == LS_ERROR_ARGUMENT);
  CHECK(ls_layer_points_json(clustering, 4, 0, &out) == LS_ERROR_ARGUMENT);
  CHECK(ls_layer_points_json(clustering, LS_LAYER_POINTS, 3, &out) == LS_ERROR_ARGUMENT);
  CHECK(contains(ls_last_error(), "slice axis out of range"));
  CHECK(ls_layer_points_json(clustering, LS_LAYER_POINTS, -1, &out) == LS_ERROR_ARGUMENT);

  ls_clustering_free(clustering);
  ls_space_free(space);
}

TEST_CASE("retract check outcomes") {
  ls_space* pairs = pair_space();
  size_t good[] = {0, 2, 4};
  char* report = nullptr;
  int outcome = -1;
  REQUIRE(ls_retract_check(pairs, good, 3, 1, nullptr, nullptr, nullptr, 0, &report, &outcome) ==
          LS_OK);
  std::string text = take(report);
  CHECK(outcome == 0);
  CHECK(contains(text, "layerscope/retract-report/1"));
  CHECK(contains(text, "\"mode\": \"main\""));

  REQUIRE(ls_retract_check(pairs, good, 3, 1, nullptr, nullptr, nullptr, 1, &report, &outcome) ==
          LS_OK);
  take(report);
  CHECK(outcome == 0);
  ls_space_free(pairs);

  ls_space* line = line_space();
  size_t tight[] = {0, 2};
  REQUIRE(ls_retract_check(line, tight, 2, 1, nullptr, nullptr, nullptr, 0, &report, &outcome) ==
          LS_OK);
  take(report);
  CHECK(outcome == 1);

  size_t oob[] = {0, 3};
  CHECK(ls_retract_check(line, oob, 2, 1, nullptr, nullptr, nullptr, 0, &report, &outcome) ==
        LS_ERROR_ARGUMENT);
  CHECK(contains(ls_last_error(), "out of range"));
  CHECK(ls_retract_check(line, nullptr, 0, 1, nullptr, nullptr, nullptr, 0, &report, &outcome) ==
        LS_ERROR_ARGUMENT);
  CHECK(contains(ls_last_error(), "nonempty"));
  size_t unsorted[] = {2, 0};
  CHECK(ls_retract_check(line, unsorted, 2, 1, nullptr, nullptr, nullptr, 0, &report, &outcome) ==
        LS_ERROR_ARGUMENT);
  CHECK(contains(ls_last_error(), "strictly increasing"));
  CHECK(ls_retract_check(line, tight, 2, -1, nullptr, nullptr, nullptr, 0, &report, &outcome) ==
        LS_ERROR_ARGUMENT);
  CHECK(ls_retract_check(line, tight, 2, 1, "abc", nullptr, nullptr, 0, &report, &outcome) ==
        LS_ERROR_PARSE);
  CHECK(contains(ls_last_error(), "invalid decimal value for c"));
  ls_space_free(line);
}

TEST_CASE("smallparam check outcomes") {
  ls_space* pairs = pair_space();
  size_t good[] = {0, 2, 4};
  char* report = nullptr;
  int outcome = -1;
  REQUIRE(ls_smallparam_check(pairs, good, 3, 1, 0, &report, &outcome) == LS_OK);
  std::string text = take(report);
  CHECK(outcome == 0);
  CHECK(contains(text, "\"mode\": \"smallparam\""));
  ls_space_free(pairs);

  ls_space* line = line_space();
  size_t tight[] = {0, 2};
  REQUIRE(ls_smallparam_check(line, tight, 2, 1, 0, &report, &outcome) == LS_OK);
  take(report);
  CHECK(outcome == 1);
  ls_space_free(line);
}

TEST_CASE("truncation check outcomes") {
  ls_space* line = line_space();
  char* report = nullptr;
  int outcome = -1;
  REQUIRE(ls_truncation_check(line, "0.4", 0, &report, &outcome) == LS_OK);
  std::string text = take(report);
  CHECK(outcome == 0);
  CHECK(contains(text, "layerscope/truncation-report/1"));

  REQUIRE(ls_truncation_check(line, "1.5", 0, &report, &outcome) == LS_OK);
  take(report);
  CHECK(outcome == 1);

  REQUIRE(ls_truncation_check(line, nullptr, 0, &report, &outcome) == LS_OK);
  take(report);
  CHECK(outcome == 0);

  CHECK(ls_truncation_check(line, "x", 0, &report, &outcome) == LS_ERROR_PARSE);
  ls_space_free(line);
}

TEST_CASE("xy note outcomes") {
  ls_space* line = line_space();
  char* report = nullptr;
  int outcome = -1;
  REQUIRE(ls_xy_note_check(line, 1, nullptr, nullptr, nullptr, &report, &outcome) == LS_OK);
  std::string text = take(report);
  CHECK(outcome == 0);
  CHECK(contains(text, "layerscope/k-positive-note/1"));

  REQUIRE(ls_xy_note_check(line, 0, nullptr, nullptr, nullptr, &report, &outcome) == LS_OK);
  take(report);
  CHECK(outcome == 1);

  CHECK(ls_xy_note_check(line, -1, nullptr, nullptr, nullptr, &report, &outcome) ==
        LS_ERROR_ARGUMENT);
  ls_space_free(line);

  ls_space* twins = nullptr;
  REQUIRE(ls_space_from_points_csv("a,0\nb,0\n", "euclidean", &twins) == LS_OK);
  REQUIRE(ls_xy_note_check(twins, 1, nullptr, nullptr, nullptr, &report, &outcome) == LS_OK);
  take(report);
  CHECK(outcome == 1);
  ls_space_free(twins);
}

TEST_CASE("null arguments are rejected") {
  size_t n = 0;
  CHECK(ls_space_size(nullptr, &n) == LS_ERROR_ARGUMENT);
  char* out = nullptr;
  CHECK(ls_clustering_json(nullptr, &out) == LS_ERROR_ARGUMENT);
  CHECK(ls_gamma_dot(nullptr, &out) == LS_ERROR_ARGUMENT);
  CHECK(ls_layer_points_json(nullptr, LS_LAYER_POINTS, 0, &out) == LS_ERROR_ARGUMENT);
  ls_clustering* clustering = nullptr;
  CHECK(ls_degree_rips(nullptr, 0, &clustering) == LS_ERROR_ARGUMENT);
  ls_space* space = line_space();
  CHECK(ls_degree_rips(space, 0, nullptr) == LS_ERROR_ARGUMENT);
  ls_space_free(space);
  // Freeing null is a no-op, mirroring free().
  ls_space_free(nullptr);
  ls_clustering_free(nullptr);
  ls_string_free(nullptr);
  ls_indices_free(nullptr);
}
