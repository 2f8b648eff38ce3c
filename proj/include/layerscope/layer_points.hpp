#pragma once

#include "layerscope/gamma.hpp"

namespace layerscope {

// Flagged elements of a Gamma poset. `slice_points[i]` holds the points of
// kind "per-axis i" (layer or branch points of the slices along axis i,
// re-embedded); `global_points` the global ones.
struct LayerPointSet {
  enum class Kind { layer, branch };

  Kind kind = Kind::layer;
  std::vector<element_t> global_points;
  std::vector<std::vector<element_t>> slice_points;
};

// Elements whose cluster does not occur strictly below them. Fills the
// per-axis sets through the slice machinery as well.
LayerPointSet global_layer_points(const GammaPoset& g);

// Layer points of every slice along `axis`, over all anchor cells of the
// remaining axes, mapped back into g.
std::vector<element_t> slice_layer_points(const GammaPoset& g, std::size_t axis);

using AxisOrder = std::vector<std::size_t>;

// Walks e down `axis` while its cluster persists, staying inside the layer.
element_t max_layer_point_step(const GammaPoset& g, element_t e, std::size_t axis);

// The retraction m: applies the walk once per axis in the given order. The
// result is a global layer point, but it can depend on the order.
element_t max_layer_point(const GammaPoset& g, element_t e, const AxisOrder& order);

// Single-axis branch points: births (nothing strictly below) and merges
// (at least two predecessor clusters inside the element's cluster). Growth
// without merging does not qualify.
std::vector<element_t> branch_points(const GammaPoset& g);

std::vector<element_t> slice_branch_points(const GammaPoset& g, std::size_t axis);

// Elements that are branch points of every axis' slices.
std::vector<element_t> global_branch_points(const GammaPoset& g);

LayerPointSet branch_point_set(const GammaPoset& g);

std::string layer_points_json(const GammaPoset& g, const LayerPointSet* layer,
                              const LayerPointSet* branch);

// Graphviz rendering of the sub-poset induced on `points` (covering edges).
std::string lambda_dot(const GammaPoset& g, const std::vector<element_t>& points);

}  // namespace layerscope
