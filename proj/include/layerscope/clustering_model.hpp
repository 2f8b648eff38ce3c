#pragma once

#include <span>
#include <string>
#include <vector>

#include "layerscope/degree_rips.hpp"

namespace layerscope {

// One parameter axis of a multi-parameter clustering. variance = +1 means the
// axis is ordered like the reals, -1 like the opposite order (clusterings grow
// as the real value decreases). `values` are stored in poset order, strictly
// increasing, starting with a sentinel below everything; the sentinel cell
// always carries the empty clustering.
struct AxisGrid {
  int variance = +1;
  std::vector<Rational> values;

  bool poset_leq(const Rational& a, const Rational& b) const {
    return variance > 0 ? a <= b : b <= a;
  }
  std::size_t size() const { return values.size(); }
  // Largest grid position whose value is poset-below x; nullopt when x lies
  // below the whole axis.
  std::optional<std::size_t> locate(const Rational& x) const;
  // Exact grid membership.
  std::optional<std::size_t> position_of(const Rational& x) const;
};

std::vector<std::string> numeric_labels(std::size_t n);

// A hierarchical clustering presented as a step function over a finite grid:
// constant on the half-open boxes spanned by consecutive grid values, empty
// below the grid. Construction checks that every cell refines its successors
// and that the minimal cell is empty.
class StepClustering {
 public:
  StepClustering(std::vector<AxisGrid> axes, std::size_t ground_size,
                 std::vector<std::string> ground_labels, std::vector<Clustering> table);

  std::size_t axis_count() const { return axes_.size(); }
  const std::vector<AxisGrid>& axes() const { return axes_; }
  std::vector<int> variance() const;
  std::size_t ground_size() const { return ground_size_; }
  const std::vector<std::string>& ground_labels() const { return ground_labels_; }

  std::size_t cell_count() const { return table_.size(); }
  std::size_t linear_cell(std::span<const std::uint32_t> position) const;
  std::vector<std::uint32_t> cell_position(std::size_t cell) const;
  std::vector<Rational> cell_values(std::size_t cell) const;
  const Clustering& cell(std::size_t cell) const { return table_[cell]; }
  const Clustering& empty_clustering() const { return empty_; }

  // Neighbouring cell along one axis (delta = +1/-1 in poset direction).
  std::optional<std::size_t> step_cell(std::size_t cell, std::size_t axis, int delta) const;

  // Step evaluation at arbitrary real parameters.
  std::optional<std::size_t> locate_cell(std::span<const Rational> coords) const;
  const Clustering& at(std::span<const Rational> coords) const;

 private:
  std::vector<AxisGrid> axes_;
  std::size_t ground_size_ = 0;
  std::vector<std::string> ground_labels_;
  std::vector<Clustering> table_;
  std::vector<std::size_t> strides_;
  Clustering empty_;
};

// A refines B: every cluster of A is contained in one cluster of B.
bool clustering_leq(const Clustering& a, const Clustering& b);

// The degree-Rips tower of `space` up to vertex degree k_max, as a
// two-parameter step clustering (scale axis ascending, degree axis
// descending). Degrees above k_max are outside the model and evaluate empty.
StepClustering from_degree_rips(const FiniteMetricSpace& space, int k_max);

// Restriction to a line through the grid: keep `axis` free and pin every
// other axis to the anchor values (which must lie on their grids, in axis
// order with `axis` skipped).
struct SliceSpec {
  std::size_t axis = 0;
  std::vector<Rational> anchor;
};

StepClustering slice(const StepClustering& H, const SliceSpec& spec);

// Empty out everything strictly below scale c (single ascending axis only).
StepClustering truncate_below(const StepClustering& H, const Rational& c);

// Reinterprets H over a new ground set via an injective point map.
StepClustering with_ground(const StepClustering& H, const std::vector<index_t>& point_map,
                           std::size_t new_ground_size, std::vector<std::string> labels);

std::string step_clustering_json(const StepClustering& H);

}  // namespace layerscope
