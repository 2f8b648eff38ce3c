#include "layerscope/degree_rips.hpp"

#include <algorithm>
#include <set>

namespace layerscope {

UnionFind::UnionFind(std::size_t n) : parent(n), rank(n, 0) {
  for (std::size_t i = 0; i < n; ++i) parent[i] = static_cast<index_t>(i);
}

index_t UnionFind::find(index_t v) {
  while (parent[v] != v) {
    parent[v] = parent[parent[v]];
    v = parent[v];
  }
  return v;
}

bool UnionFind::unite(index_t a, index_t b) {
  index_t ra = find(a);
  index_t rb = find(b);
  if (ra == rb) return false;
  if (rank[ra] < rank[rb]) std::swap(ra, rb);
  parent[rb] = ra;
  if (rank[ra] == rank[rb]) ++rank[ra];
  return true;
}

LesnickGraph lesnick_graph(const FiniteMetricSpace& space, const Rational& scale, int degree) {
  if (degree < 0) throw Error(ErrorCode::argument, "degree must be nonnegative");
  LesnickGraph g;
  g.scale = scale;
  g.degree = degree;
  g.space_size = space.size();
  if (scale < 0) return g;
  std::size_t n = space.size();
  std::vector<bool> active(n, false);
  for (index_t i = 0; i < n; ++i) {
    int neighbours = 0;
    for (index_t j = 0; j < n; ++j) {
      if (j != i && space.d(i, j) <= scale) ++neighbours;
    }
    if (neighbours >= degree) {
      active[i] = true;
      g.vertices.push_back(i);
    }
  }
  for (index_t i = 0; i < n; ++i) {
    if (!active[i]) continue;
    for (index_t j = i + 1; j < n; ++j) {
      if (active[j] && space.d(i, j) <= scale) g.edges.emplace_back(i, j);
    }
  }
  return g;
}

Clustering::Clustering(std::size_t ground_size, std::vector<std::vector<index_t>> clusters)
    : ground_size_(ground_size), clusters_(std::move(clusters)) {
  owner_.assign(ground_size_, kNone);
  for (auto& cluster : clusters_) {
    if (cluster.empty()) throw Error(ErrorCode::validation, "empty cluster");
    std::sort(cluster.begin(), cluster.end());
  }
  std::sort(clusters_.begin(), clusters_.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  for (std::size_t c = 0; c < clusters_.size(); ++c) {
    for (index_t p : clusters_[c]) {
      if (p >= ground_size_) {
        throw Error(ErrorCode::validation, "cluster point out of range");
      }
      if (owner_[p] != kNone) {
        throw Error(ErrorCode::validation, "clusters overlap at point " + std::to_string(p));
      }
      owner_[p] = static_cast<index_t>(c);
    }
  }
}

std::optional<std::size_t> Clustering::index_of(const std::vector<index_t>& members) const {
  if (members.empty()) return std::nullopt;
  index_t c = owner_[members.front()];
  if (c == kNone) return std::nullopt;
  if (clusters_[c] == members) return c;
  return std::nullopt;
}

Clustering components(const LesnickGraph& graph) {
  UnionFind uf(graph.space_size);
  for (const auto& [i, j] : graph.edges) uf.unite(i, j);
  std::vector<std::vector<index_t>> by_root(graph.space_size);
  for (index_t v : graph.vertices) by_root[uf.find(v)].push_back(v);
  std::vector<std::vector<index_t>> clusters;
  for (auto& members : by_root) {
    if (!members.empty()) clusters.push_back(std::move(members));
  }
  return Clustering(graph.space_size, std::move(clusters));
}

Clustering clustering_at(const FiniteMetricSpace& space, const Rational& scale,
                         const Rational& density) {
  if (scale < 0 || density < 0) return Clustering(space.size(), {});
  Rational k = ceil_rational(density);
  // More required neighbours than there are other points leaves no vertices.
  if (k > Rational(static_cast<unsigned long>(space.size()))) {
    return Clustering(space.size(), {});
  }
  return clustering_at_degree(space, scale, k.convert_to<int>());
}

Clustering clustering_at_degree(const FiniteMetricSpace& space, const Rational& scale,
                                int degree) {
  return components(lesnick_graph(space, scale, degree));
}

CriticalGrid critical_grid(const FiniteMetricSpace& space, int k_max) {
  if (k_max < 0) throw Error(ErrorCode::argument, "k_max must be nonnegative");
  CriticalGrid grid;
  grid.k_max = k_max;
  std::set<Rational> values;
  values.insert(Rational(0));
  for (index_t i = 0; i < space.size(); ++i) {
    for (index_t j = i + 1; j < space.size(); ++j) values.insert(space.d(i, j));
  }
  grid.scales.push_back(Rational(-1));
  grid.scales.insert(grid.scales.end(), values.begin(), values.end());
  return grid;
}

}  // namespace layerscope
