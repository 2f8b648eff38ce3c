#include "layerscope.h"

#include <algorithm>
#include <cstring>
#include <optional>
#include <string>

#include "layerscope/layer_points.hpp"
#include "layerscope/stability.hpp"

struct ls_space {
  layerscope::FiniteMetricSpace space;
};

struct ls_clustering {
  layerscope::StepClustering H;
};

namespace {

using namespace layerscope;

thread_local std::string g_last_error;

ls_status fail(ls_status code, const std::string& message) {
  g_last_error = message;
  return code;
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename F>
ls_status guarded(F&& body) {
  try {
    g_last_error.clear();
    return body();
  } catch (const Error& e) {
    switch (e.code()) {
      case ErrorCode::parse:
        return fail(LS_ERROR_PARSE, e.what());
      case ErrorCode::validation:
        return fail(LS_ERROR_VALIDATION, e.what());
      case ErrorCode::argument:
        return fail(LS_ERROR_ARGUMENT, e.what());
    }
    return fail(LS_ERROR_INTERNAL, e.what());
  } catch (const std::exception& e) {
    return fail(LS_ERROR_INTERNAL, e.what());
  }
}

void require(bool ok, const char* message) {
  if (!ok) throw Error(ErrorCode::argument, message);
}

std::optional<Rational> parse_param(const char* text, const char* name) {
  if (!text) return std::nullopt;
  auto value = parse_decimal(text);
  if (!value)
    throw Error(ErrorCode::parse, std::string("invalid decimal value for ") + name + ": " + text);
  return value;
}

Subsample make_subsample(const FiniteMetricSpace& parent, const size_t* sample, size_t len) {
  require(sample != nullptr && len > 0, "subsample must be nonempty");
  std::vector<index_t> indices;
  indices.reserve(len);
  for (size_t i = 0; i < len; ++i) {
    require(sample[i] < parent.size(), "subsample index out of range");
    indices.push_back(static_cast<index_t>(sample[i]));
  }
  return Subsample::of(parent, std::move(indices));
}

int retract_outcome(const StabilityReport& r) {
  if (r.soundness_violation) return 3;
  if (r.approximation_valid && r.retract_verified) return 0;
  return 1;
}

int smallparam_outcome(const SmallParamReport& r) {
  bool definite = r.run.diagram_built &&
                  r.run.upper_verdict == verdict_name(TriangleVerdict::commutes) &&
                  r.run.top_identity && r.run.retract_verified;
  if (r.run.soundness_violation || (r.condition && !definite)) return 3;
  return r.verified ? 0 : 1;
}

int truncation_outcome(const TruncationReport& r) {
  if (r.soundness_violation) return 3;
  if ((r.diagram_applicable && r.triangles_exact) || (r.iso_applicable && r.iso_holds)) return 0;
  return 1;
}

int xy_note_outcome(const KPositiveReport& r) {
  if (r.violated) return 3;
  if (r.applicable && r.admissible && r.obstruction_holds) return 0;
  return 1;
}

void restrict_to_axis(LayerPointSet& set, std::size_t axis) {
  set.global_points.clear();
  for (std::size_t i = 0; i < set.slice_points.size(); ++i)
    if (i != axis) set.slice_points[i].clear();
}

// Resolves the families/slice_axis selection shared by the layer-point exports.
struct PointSelection {
  GammaPoset gamma;
  std::optional<LayerPointSet> layer;
  std::optional<LayerPointSet> branch;
};

PointSelection select_points(const ls_clustering* clustering, unsigned families, int slice_axis) {
  require(clustering != nullptr, "clustering must not be null");
  require(families != 0 && (families & ~3u) == 0,
          "families must combine LS_LAYER_POINTS and LS_BRANCH_POINTS");
  PointSelection sel{build_gamma(clustering->H), std::nullopt, std::nullopt};
  require(slice_axis >= 0 && slice_axis <= static_cast<int>(sel.gamma.axis_count()),
          "slice axis out of range");
  if (families & LS_LAYER_POINTS) sel.layer = global_layer_points(sel.gamma);
  if (families & LS_BRANCH_POINTS) sel.branch = branch_point_set(sel.gamma);
  if (slice_axis > 0) {
    if (sel.layer) restrict_to_axis(*sel.layer, static_cast<std::size_t>(slice_axis - 1));
    if (sel.branch) restrict_to_axis(*sel.branch, static_cast<std::size_t>(slice_axis - 1));
  }
  return sel;
}

}  // namespace

extern "C" {

const char* ls_version(void) { return "0.1.0"; }

const char* ls_last_error(void) { return g_last_error.c_str(); }

void ls_string_free(char* s) { delete[] s; }

void ls_indices_free(size_t* indices) { delete[] indices; }

ls_status ls_space_from_matrix_csv(const char* text, ls_space** out) {
  return guarded([&]() -> ls_status {
    require(text != nullptr && out != nullptr, "text and out must not be null");
    *out = new ls_space{load_matrix_csv_text(text)};
    return LS_OK;
  });
}

ls_status ls_space_from_points_csv(const char* text, const char* metric, ls_space** out) {
  return guarded([&]() -> ls_status {
    require(text != nullptr && metric != nullptr && out != nullptr,
            "text, metric and out must not be null");
    auto m = point_metric_from_name(metric);
    if (!m)
      throw Error(ErrorCode::argument, std::string("unknown metric: ") + metric +
                                           " (expected euclidean, manhattan or chebyshev)");
    *out = new ls_space{load_points_csv_text(text, *m)};
    return LS_OK;
  });
}

void ls_space_free(ls_space* space) { delete space; }

ls_status ls_space_size(const ls_space* space, size_t* out) {
  return guarded([&]() -> ls_status {
    require(space != nullptr && out != nullptr, "space and out must not be null");
    *out = space->space.size();
    return LS_OK;
  });
}

ls_status ls_farthest_point_sample(const ls_space* space, size_t count, uint64_t seed,
                                   size_t** indices, size_t* len) {
  return guarded([&]() -> ls_status {
    require(space != nullptr && indices != nullptr && len != nullptr,
            "space, indices and len must not be null");
    Subsample sub = farthest_point_sample(space->space, count, seed);
    size_t* out = new size_t[sub.indices.size()];
    for (std::size_t i = 0; i < sub.indices.size(); ++i) out[i] = sub.indices[i];
    *indices = out;
    *len = sub.indices.size();
    return LS_OK;
  });
}

ls_status ls_degree_rips(const ls_space* space, int k_max, ls_clustering** out) {
  return guarded([&]() -> ls_status {
    require(space != nullptr && out != nullptr, "space and out must not be null");
    *out = new ls_clustering{from_degree_rips(space->space, k_max)};
    return LS_OK;
  });
}

void ls_clustering_free(ls_clustering* clustering) { delete clustering; }

ls_status ls_clustering_json(const ls_clustering* clustering, char** out) {
  return guarded([&]() -> ls_status {
    require(clustering != nullptr && out != nullptr, "clustering and out must not be null");
    *out = copy_string(step_clustering_json(clustering->H));
    return LS_OK;
  });
}

ls_status ls_gamma_dot(const ls_clustering* clustering, char** out) {
  return guarded([&]() -> ls_status {
    require(clustering != nullptr && out != nullptr, "clustering and out must not be null");
    GammaPoset g = build_gamma(clustering->H);
    *out = copy_string(gamma_dot(g));
    return LS_OK;
  });
}

ls_status ls_layer_points_json(const ls_clustering* clustering, unsigned families,
                               int slice_axis, char** out) {
  return guarded([&]() -> ls_status {
    require(out != nullptr, "out must not be null");
    PointSelection sel = select_points(clustering, families, slice_axis);
    *out = copy_string(layer_points_json(sel.gamma, sel.layer ? &*sel.layer : nullptr,
                                         sel.branch ? &*sel.branch : nullptr));
    return LS_OK;
  });
}

ls_status ls_layer_points_dot(const ls_clustering* clustering, unsigned families,
                              int slice_axis, char** out) {
  return guarded([&]() -> ls_status {
    require(out != nullptr, "out must not be null");
    PointSelection sel = select_points(clustering, families, slice_axis);
    std::vector<element_t> points;
    auto collect = [&points](const LayerPointSet& set) {
      points.insert(points.end(), set.global_points.begin(), set.global_points.end());
      for (const auto& axis_points : set.slice_points)
        points.insert(points.end(), axis_points.begin(), axis_points.end());
    };
    if (sel.layer) collect(*sel.layer);
    if (sel.branch) collect(*sel.branch);
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    *out = copy_string(lambda_dot(sel.gamma, points));
    return LS_OK;
  });
}

ls_status ls_retract_check(const ls_space* parent, const size_t* sample, size_t sample_len,
                           int k, const char* c, const char* eps, const char* delta,
                           int force_merge_index_max, char** report, int* outcome) {
  return guarded([&]() -> ls_status {
    require(parent != nullptr && report != nullptr && outcome != nullptr,
            "parent, report and outcome must not be null");
    require(k >= 0, "k must be nonnegative");
    Subsample sub = make_subsample(parent->space, sample, sample_len);
    RetractDefaults params =
        default_parameters(parent->space, sub, k, parse_param(c, "c"), parse_param(eps, "eps"),
                           parse_param(delta, "delta"));
    RetractAnalysis analysis(parent->space, sub, k, params.c, params.eps, params.delta,
                             force_merge_index_max != 0);
    *report = copy_string(stability_report_json(analysis.report()));
    *outcome = retract_outcome(analysis.report());
    return LS_OK;
  });
}

ls_status ls_smallparam_check(const ls_space* parent, const size_t* sample, size_t sample_len,
                              int k, int force_merge_index_max, char** report, int* outcome) {
  return guarded([&]() -> ls_status {
    require(parent != nullptr && report != nullptr && outcome != nullptr,
            "parent, report and outcome must not be null");
    require(k >= 0, "k must be nonnegative");
    Subsample sub = make_subsample(parent->space, sample, sample_len);
    SmallParamReport r = check_smallparam(parent->space, sub, k, force_merge_index_max != 0);
    *report = copy_string(smallparam_report_json(r));
    *outcome = smallparam_outcome(r);
    return LS_OK;
  });
}

ls_status ls_truncation_check(const ls_space* space, const char* c, int force_merge_index_max,
                              char** report, int* outcome) {
  return guarded([&]() -> ls_status {
    require(space != nullptr && report != nullptr && outcome != nullptr,
            "space, report and outcome must not be null");
    Rational level = parse_param(c, "c").value_or(Rational(0));
    TruncationReport r = check_truncation_iso(space->space, level, force_merge_index_max != 0);
    *report = copy_string(truncation_report_json(r));
    *outcome = truncation_outcome(r);
    return LS_OK;
  });
}

ls_status ls_xy_note_check(const ls_space* space, int k, const char* c, const char* eps,
                           const char* delta, char** report, int* outcome) {
  return guarded([&]() -> ls_status {
    require(space != nullptr && report != nullptr && outcome != nullptr,
            "space, report and outcome must not be null");
    require(k >= 0, "k must be nonnegative");
    Subsample full = Subsample::full(space->space);
    RetractDefaults params = default_parameters(space->space, full, k, parse_param(c, "c"),
                                                parse_param(eps, "eps"), parse_param(delta, "delta"));
    KPositiveReport r =
        check_k_positive_note(space->space, k, params.c, params.eps, params.delta);
    *report = copy_string(k_positive_report_json(r));
    *outcome = xy_note_outcome(r);
    return LS_OK;
  });
}

}  // extern "C"
