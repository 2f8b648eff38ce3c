#include "layerscope/clustering_model.hpp"

#include <algorithm>

#include <json.hpp>

namespace layerscope {

std::optional<std::size_t> AxisGrid::locate(const Rational& x) const {
  if (values.empty() || !poset_leq(values[0], x)) return std::nullopt;
  std::size_t lo = 0;
  std::size_t hi = values.size() - 1;
  while (lo < hi) {
    std::size_t mid = (lo + hi + 1) / 2;
    if (poset_leq(values[mid], x)) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  return lo;
}

std::optional<std::size_t> AxisGrid::position_of(const Rational& x) const {
  auto pos = locate(x);
  if (pos && values[*pos] == x) return pos;
  return std::nullopt;
}

std::vector<std::string> numeric_labels(std::size_t n) {
  std::vector<std::string> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = std::to_string(i);
  return labels;
}

StepClustering::StepClustering(std::vector<AxisGrid> axes, std::size_t ground_size,
                               std::vector<std::string> ground_labels,
                               std::vector<Clustering> table)
    : axes_(std::move(axes)),
      ground_size_(ground_size),
      ground_labels_(std::move(ground_labels)),
      table_(std::move(table)),
      empty_(ground_size, {}) {
  if (axes_.empty()) throw Error(ErrorCode::validation, "step clustering needs an axis");
  std::size_t cells = 1;
  for (const auto& axis : axes_) {
    if (axis.variance != 1 && axis.variance != -1) {
      throw Error(ErrorCode::validation, "axis variance must be +1 or -1");
    }
    if (axis.values.empty()) throw Error(ErrorCode::validation, "axis has no grid values");
    for (std::size_t i = 1; i < axis.values.size(); ++i) {
      if (!axis.poset_leq(axis.values[i - 1], axis.values[i]) ||
          axis.values[i - 1] == axis.values[i]) {
        throw Error(ErrorCode::validation, "axis values must strictly increase in poset order");
      }
    }
    cells *= axis.size();
  }
  strides_.assign(axes_.size(), 1);
  for (std::size_t a = axes_.size(); a-- > 1;) {
    strides_[a - 1] = strides_[a] * axes_[a].size();
  }
  if (table_.size() != cells) {
    throw Error(ErrorCode::validation, "cell table size does not match the grid");
  }
  if (ground_labels_.size() != ground_size_) {
    throw Error(ErrorCode::validation, "ground label count does not match ground size");
  }
  for (const auto& clustering : table_) {
    if (clustering.ground_size() != ground_size_) {
      throw Error(ErrorCode::validation, "cell clustering has the wrong ground size");
    }
  }
  if (!table_[0].empty()) {
    throw Error(ErrorCode::validation, "clustering must be empty at the minimal cell");
  }
  for (std::size_t cell = 0; cell < table_.size(); ++cell) {
    for (std::size_t a = 0; a < axes_.size(); ++a) {
      auto next = step_cell(cell, a, +1);
      if (next && !clustering_leq(table_[cell], table_[*next])) {
        throw Error(ErrorCode::validation,
                    "clustering is not order-preserving between adjacent cells");
      }
    }
  }
}

std::vector<int> StepClustering::variance() const {
  std::vector<int> v(axes_.size());
  for (std::size_t a = 0; a < axes_.size(); ++a) v[a] = axes_[a].variance;
  return v;
}

std::size_t StepClustering::linear_cell(std::span<const std::uint32_t> position) const {
  std::size_t cell = 0;
  for (std::size_t a = 0; a < axes_.size(); ++a) cell += position[a] * strides_[a];
  return cell;
}

std::vector<std::uint32_t> StepClustering::cell_position(std::size_t cell) const {
  std::vector<std::uint32_t> pos(axes_.size());
  for (std::size_t a = 0; a < axes_.size(); ++a) {
    pos[a] = static_cast<std::uint32_t>(cell / strides_[a] % axes_[a].size());
  }
  return pos;
}

std::vector<Rational> StepClustering::cell_values(std::size_t cell) const {
  auto pos = cell_position(cell);
  std::vector<Rational> values(axes_.size());
  for (std::size_t a = 0; a < axes_.size(); ++a) values[a] = axes_[a].values[pos[a]];
  return values;
}

std::optional<std::size_t> StepClustering::step_cell(std::size_t cell, std::size_t axis,
                                                     int delta) const {
  std::size_t pos = cell / strides_[axis] % axes_[axis].size();
  if (delta > 0) {
    if (pos + 1 >= axes_[axis].size()) return std::nullopt;
    return cell + strides_[axis];
  }
  if (pos == 0) return std::nullopt;
  return cell - strides_[axis];
}

std::optional<std::size_t> StepClustering::locate_cell(std::span<const Rational> coords) const {
  if (coords.size() != axes_.size()) {
    throw Error(ErrorCode::argument, "coordinate count does not match axis count");
  }
  std::size_t cell = 0;
  for (std::size_t a = 0; a < axes_.size(); ++a) {
    auto pos = axes_[a].locate(coords[a]);
    if (!pos) return std::nullopt;
    cell += *pos * strides_[a];
  }
  return cell;
}

const Clustering& StepClustering::at(std::span<const Rational> coords) const {
  auto cell = locate_cell(coords);
  return cell ? table_[*cell] : empty_;
}

bool clustering_leq(const Clustering& a, const Clustering& b) {
  if (a.ground_size() != b.ground_size()) {
    throw Error(ErrorCode::argument, "comparing clusterings of different ground sets");
  }
  for (const auto& cluster : a.clusters()) {
    index_t target = b.owner(cluster.front());
    if (target == Clustering::kNone) return false;
    const auto& host = b.clusters()[target];
    if (!std::includes(host.begin(), host.end(), cluster.begin(), cluster.end())) {
      return false;
    }
  }
  return true;
}

StepClustering from_degree_rips(const FiniteMetricSpace& space, int k_max) {
  CriticalGrid grid = critical_grid(space, k_max);
  std::size_t n = space.size();

  AxisGrid scale_axis{+1, grid.scales};
  AxisGrid degree_axis;
  degree_axis.variance = -1;
  for (int k = k_max + 1; k >= 0; --k) degree_axis.values.push_back(Rational(k));

  std::size_t scale_cells = scale_axis.size();
  std::size_t degree_cells = degree_axis.size();
  std::vector<Clustering> table(scale_cells * degree_cells, Clustering(n, {}));

  // Distances from each point to the others, sorted, for vertex thresholds.
  std::vector<std::vector<Rational>> neighbour_dists(n);
  for (index_t i = 0; i < n; ++i) {
    for (index_t j = 0; j < n; ++j) {
      if (j != i) neighbour_dists[i].push_back(space.d(i, j));
    }
    std::sort(neighbour_dists[i].begin(), neighbour_dists[i].end());
  }

  for (std::size_t dp = 1; dp < degree_cells; ++dp) {
    int k = k_max + 1 - static_cast<int>(dp);
    // Earliest scale where each vertex (and then each edge) becomes active.
    std::vector<std::pair<Rational, index_t>> vertex_events;
    for (index_t i = 0; i < n; ++i) {
      if (k == 0) {
        vertex_events.emplace_back(Rational(0), i);
      } else if (static_cast<std::size_t>(k) <= neighbour_dists[i].size()) {
        vertex_events.emplace_back(neighbour_dists[i][k - 1], i);
      }
    }
    std::sort(vertex_events.begin(), vertex_events.end());
    std::vector<std::tuple<Rational, index_t, index_t>> edge_events;
    for (index_t i = 0; i < n; ++i) {
      if (k > 0 && static_cast<std::size_t>(k) > neighbour_dists[i].size()) continue;
      for (index_t j = i + 1; j < n; ++j) {
        if (k > 0 && static_cast<std::size_t>(k) > neighbour_dists[j].size()) continue;
        Rational threshold = space.d(i, j);
        if (k > 0) {
          threshold = std::max(threshold, neighbour_dists[i][k - 1]);
          threshold = std::max(threshold, neighbour_dists[j][k - 1]);
        }
        edge_events.emplace_back(threshold, i, j);
      }
    }
    std::sort(edge_events.begin(), edge_events.end());

    UnionFind uf(n);
    std::vector<bool> active(n, false);
    std::size_t vp = 0;
    std::size_t ep = 0;
    for (std::size_t sp = 1; sp < scale_cells; ++sp) {
      const Rational& s = scale_axis.values[sp];
      while (vp < vertex_events.size() && vertex_events[vp].first <= s) {
        active[vertex_events[vp].second] = true;
        ++vp;
      }
      while (ep < edge_events.size() && std::get<0>(edge_events[ep]) <= s) {
        uf.unite(std::get<1>(edge_events[ep]), std::get<2>(edge_events[ep]));
        ++ep;
      }
      std::vector<std::vector<index_t>> by_root(n);
      for (index_t v = 0; v < n; ++v) {
        if (active[v]) by_root[uf.find(v)].push_back(v);
      }
      std::vector<std::vector<index_t>> clusters;
      for (auto& members : by_root) {
        if (!members.empty()) clusters.push_back(std::move(members));
      }
      table[sp * degree_cells + dp] = Clustering(n, std::move(clusters));
    }
  }

  return StepClustering({scale_axis, degree_axis}, n, space.labels(), std::move(table));
}

StepClustering slice(const StepClustering& H, const SliceSpec& spec) {
  if (spec.axis >= H.axis_count()) throw Error(ErrorCode::argument, "slice axis out of range");
  if (spec.anchor.size() + 1 != H.axis_count()) {
    throw Error(ErrorCode::argument, "slice anchor needs one value per pinned axis");
  }
  std::vector<std::uint32_t> base(H.axis_count(), 0);
  std::size_t ai = 0;
  for (std::size_t a = 0; a < H.axis_count(); ++a) {
    if (a == spec.axis) continue;
    auto pos = H.axes()[a].position_of(spec.anchor[ai]);
    if (!pos) {
      throw Error(ErrorCode::argument,
                  "slice anchor " + format_exact(spec.anchor[ai]) + " is not a grid value");
    }
    base[a] = static_cast<std::uint32_t>(*pos);
    ++ai;
  }
  const AxisGrid& kept = H.axes()[spec.axis];
  std::vector<Clustering> table;
  table.reserve(kept.size());
  for (std::size_t p = 0; p < kept.size(); ++p) {
    base[spec.axis] = static_cast<std::uint32_t>(p);
    table.push_back(H.cell(H.linear_cell(base)));
  }
  return StepClustering({kept}, H.ground_size(), H.ground_labels(), std::move(table));
}

StepClustering truncate_below(const StepClustering& H, const Rational& c) {
  if (H.axis_count() != 1 || H.axes()[0].variance != 1) {
    throw Error(ErrorCode::argument, "truncation needs a single ascending axis");
  }
  if (c < 0) throw Error(ErrorCode::argument, "truncation scale must be nonnegative");
  const AxisGrid& axis = H.axes()[0];
  AxisGrid out_axis{+1, {axis.values[0], c}};
  for (const Rational& v : axis.values) {
    if (v > c) out_axis.values.push_back(v);
  }
  std::vector<Clustering> table;
  table.reserve(out_axis.size());
  table.push_back(H.empty_clustering());
  for (std::size_t p = 1; p < out_axis.size(); ++p) {
    const Rational coords[1] = {out_axis.values[p]};
    table.push_back(H.at(coords));
  }
  return StepClustering({out_axis}, H.ground_size(), H.ground_labels(), std::move(table));
}

StepClustering with_ground(const StepClustering& H, const std::vector<index_t>& point_map,
                           std::size_t new_ground_size, std::vector<std::string> labels) {
  if (point_map.size() != H.ground_size()) {
    throw Error(ErrorCode::argument, "point map size does not match the ground set");
  }
  std::vector<Clustering> table;
  table.reserve(H.cell_count());
  for (std::size_t cell = 0; cell < H.cell_count(); ++cell) {
    std::vector<std::vector<index_t>> clusters;
    for (const auto& cluster : H.cell(cell).clusters()) {
      std::vector<index_t> mapped;
      mapped.reserve(cluster.size());
      for (index_t p : cluster) mapped.push_back(point_map[p]);
      clusters.push_back(std::move(mapped));
    }
    table.emplace_back(new_ground_size, std::move(clusters));
  }
  return StepClustering(H.axes(), new_ground_size, std::move(labels), std::move(table));
}

std::string step_clustering_json(const StepClustering& H) {
  nlohmann::ordered_json doc;
  doc["schema"] = "layerscope/step-clustering/1";
  doc["ground"]["size"] = H.ground_size();
  doc["ground"]["labels"] = H.ground_labels();
  doc["axes"] = nlohmann::ordered_json::array();
  for (const auto& axis : H.axes()) {
    nlohmann::ordered_json ja;
    ja["variance"] = axis.variance;
    auto values = nlohmann::ordered_json::array();
    for (const auto& v : axis.values) values.push_back(format_exact(v));
    ja["values"] = std::move(values);
    doc["axes"].push_back(std::move(ja));
  }
  doc["cells"] = nlohmann::ordered_json::array();
  for (std::size_t cell = 0; cell < H.cell_count(); ++cell) {
    nlohmann::ordered_json jc;
    auto values = nlohmann::ordered_json::array();
    for (const auto& v : H.cell_values(cell)) values.push_back(format_exact(v));
    jc["cell"] = std::move(values);
    jc["clusters"] = H.cell(cell).clusters();
    doc["cells"].push_back(std::move(jc));
  }
  return doc.dump(2) + "\n";
}

}  // namespace layerscope
