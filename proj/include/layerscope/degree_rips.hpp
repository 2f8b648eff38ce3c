#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "layerscope/metric.hpp"

namespace layerscope {

struct UnionFind {
  std::vector<index_t> parent;
  std::vector<index_t> rank;

  explicit UnionFind(std::size_t n);
  index_t find(index_t v);
  // Returns true when two classes were actually merged.
  bool unite(index_t a, index_t b);
};

// 1-skeleton of the degree-Rips complex at a fixed scale and degree: an edge
// needs length <= scale, and a vertex needs at least `degree` distinct
// neighbours within the scale.
struct LesnickGraph {
  Rational scale;
  int degree = 0;
  std::size_t space_size = 0;
  std::vector<index_t> vertices;                   // increasing
  std::vector<std::pair<index_t, index_t>> edges;  // i < j, lexicographic
};

LesnickGraph lesnick_graph(const FiniteMetricSpace& space, const Rational& scale, int degree);

// A partition of a subset of the ground set. Clusters are kept sorted and
// ordered by their least element, which is also the canonical cluster label.
class Clustering {
 public:
  static constexpr index_t kNone = static_cast<index_t>(-1);

  Clustering() = default;
  Clustering(std::size_t ground_size, std::vector<std::vector<index_t>> clusters);

  std::size_t ground_size() const { return ground_size_; }
  const std::vector<std::vector<index_t>>& clusters() const { return clusters_; }
  std::size_t count() const { return clusters_.size(); }
  bool empty() const { return clusters_.empty(); }
  // Index of the cluster containing `point`, kNone when uncovered.
  index_t owner(index_t point) const { return owner_[point]; }
  // Index of a cluster equal (as a set) to `members`, if present.
  std::optional<std::size_t> index_of(const std::vector<index_t>& members) const;

  friend bool operator==(const Clustering& a, const Clustering& b) {
    return a.ground_size_ == b.ground_size_ && a.clusters_ == b.clusters_;
  }

 private:
  std::size_t ground_size_ = 0;
  std::vector<std::vector<index_t>> clusters_;
  std::vector<index_t> owner_;
};

// Connected components of the graph, as a clustering of the ambient ground set.
Clustering components(const LesnickGraph& graph);

// The clustering at real parameters (scale, density); empty when either is
// negative, otherwise the components at degree ceil(density).
Clustering clustering_at(const FiniteMetricSpace& space, const Rational& scale,
                         const Rational& density);
Clustering clustering_at_degree(const FiniteMetricSpace& space, const Rational& scale,
                                int degree);

// Scale values where the clustering can change, shared across degrees 0..k_max:
// one sentinel below zero, then zero and all pairwise distances.
struct CriticalGrid {
  std::vector<Rational> scales;
  int k_max = 0;
};

CriticalGrid critical_grid(const FiniteMetricSpace& space, int k_max);

}  // namespace layerscope
