#pragma once

#include "layerscope/clustering_model.hpp"

namespace layerscope {

using element_t = std::uint32_t;
inline constexpr element_t kNoElement = static_cast<element_t>(-1);

// One (cell, cluster) pair of a step clustering.
struct GammaElement {
  std::uint32_t cell = 0;
  std::uint32_t cluster = 0;
};

// The poset of all (cell, cluster) pairs of H, ordered by cell order together
// with cluster inclusion. Elements are indexed in (cell, cluster) order, so
// ids are stable and exports are deterministic. Holds a pointer to H; the
// clustering must outlive the poset.
class GammaPoset {
 public:
  explicit GammaPoset(const StepClustering& H);

  const StepClustering& source() const { return *source_; }
  std::size_t count() const { return elements_.size(); }
  const GammaElement& element(element_t e) const { return elements_[e]; }
  const std::vector<index_t>& cluster_of(element_t e) const;
  std::vector<Rational> values_of(element_t e) const;

  // Element for a (cell, cluster index) pair.
  element_t find(std::uint32_t cell, std::uint32_t cluster_index) const;
  // Element at `cell` whose cluster equals `members` exactly, if any.
  std::optional<element_t> find_cluster(std::uint32_t cell,
                                        const std::vector<index_t>& members) const;
  // Element at `cell` whose cluster contains `point`, if any.
  std::optional<element_t> find_containing(std::uint32_t cell, index_t point) const;

  // Successor element along an axis: same cluster merged into the cell one
  // grid step up. kNoElement past the top of the grid.
  element_t up(element_t e, std::size_t axis) const { return up_[e * axis_count() + axis]; }

  bool leq(element_t a, element_t b) const;
  std::size_t axis_count() const { return source_->axis_count(); }

 private:
  const StepClustering* source_;
  std::vector<GammaElement> elements_;
  std::vector<std::uint32_t> offset_;  // per cell, into elements_
  std::vector<element_t> up_;
};

GammaPoset build_gamma(const StepClustering& H);

// A maximal family of comparable elements sharing one cluster.
struct Layer {
  std::vector<index_t> cluster;
  std::vector<std::uint32_t> support;  // cells, increasing
  std::vector<element_t> members;      // increasing
};

std::vector<Layer> layers(const GammaPoset& g);

// Up/down closures of a set of cells in the grid order.
std::vector<std::uint32_t> up_set(const StepClustering& H, std::span<const std::uint32_t> cells);
std::vector<std::uint32_t> down_set(const StepClustering& H,
                                    std::span<const std::uint32_t> cells);

struct ClosedBelowReport {
  bool representable = false;           // support equals updown closure
  std::vector<std::uint32_t> minimal_cells;
  std::vector<std::uint32_t> excess;    // updown cells missing from the support
};

ClosedBelowReport is_closed_below(const GammaPoset& g, const Layer& layer);

// Graphviz rendering with one node per element and covering edges only.
std::string gamma_dot(const GammaPoset& g);

}  // namespace layerscope
