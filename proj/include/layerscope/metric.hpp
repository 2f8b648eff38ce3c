#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "layerscope/errors.hpp"
#include "layerscope/rational.hpp"

namespace layerscope {

using index_t = std::uint32_t;

class FiniteMetricSpace {
 public:
  // Takes row-major distances. Checks squareness, symmetry, zero diagonal,
  // nonnegativity, the triangle inequality and label uniqueness; throws
  // Error(validation) naming the offending entries otherwise.
  FiniteMetricSpace(std::vector<std::string> labels, std::vector<Rational> distances);

  std::size_t size() const { return labels_.size(); }
  const Rational& d(index_t i, index_t j) const { return dist_[i * labels_.size() + j]; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(index_t i) const { return labels_[i]; }

 private:
  std::vector<std::string> labels_;
  std::vector<Rational> dist_;
};

enum class PointMetric { euclidean, manhattan, chebyshev };

std::optional<PointMetric> point_metric_from_name(std::string_view name);

// CSV with a header row of point labels followed by a full square matrix.
FiniteMetricSpace load_matrix_csv(std::istream& in);
FiniteMetricSpace load_matrix_csv_text(std::string_view text);

// CSV rows "label,x1,...,xd" without a header. Manhattan and Chebyshev
// distances stay exact; Euclidean ones that are not exactly rational get
// snapped to the 1e-12 grid, and the input is rejected when that snapping
// could merge or reorder genuinely distinct distances.
FiniteMetricSpace load_points_csv(std::istream& in, PointMetric metric);
FiniteMetricSpace load_points_csv_text(std::string_view text, PointMetric metric);

struct Subsample {
  std::vector<index_t> indices;  // strictly increasing, nonempty

  static Subsample of(const FiniteMetricSpace& parent, std::vector<index_t> indices);
  static Subsample full(const FiniteMetricSpace& parent);
  // The induced metric space on the selected points, labels inherited.
  FiniteMetricSpace restricted(const FiniteMetricSpace& parent) const;
  std::size_t size() const { return indices.size(); }
};

struct PhaseChangeProfile {
  std::vector<Rational> values;  // distinct distances in increasing order; values[0] == 0
  std::size_t merge_index;       // least index at which everything is one component
};

PhaseChangeProfile phase_change_profile(const FiniteMetricSpace& space);

// max over the parent of the distance to the nearest sample point.
Rational directional_hausdorff(const FiniteMetricSpace& parent, const Subsample& sample);

// N_k: the (k+1)-th smallest distance from a sample point into the ambient
// space, maximized over the sample. k = 0 gives 0 (the point itself).
Rational density_radius(const Subsample& sample, const FiniteMetricSpace& ambient, int k);

struct NearestPointMap {
  std::vector<index_t> to_sample;     // parent index -> parent index of the chosen sample point
  std::vector<std::string> warnings;  // tie-break notices for equidistant sample points
};

NearestPointMap nearest_point_map(const FiniteMetricSpace& parent, const Subsample& sample);

// Greedy farthest-point subsample of the given size. The first point is
// seed % n; later picks maximize the distance to the chosen set, smallest
// index winning ties.
Subsample farthest_point_sample(const FiniteMetricSpace& space, std::size_t count,
                                std::uint64_t seed);

}  // namespace layerscope
