#include "layerscope/layer_points.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include <json.hpp>

namespace layerscope {

namespace {

// On a step grid, "no strictly smaller element carries the same cluster"
// reduces to checking the immediate predecessor cells.
bool is_layer_point(const GammaPoset& g, element_t e) {
  const StepClustering& H = g.source();
  const auto& cluster = g.cluster_of(e);
  for (std::size_t a = 0; a < g.axis_count(); ++a) {
    auto pred = H.step_cell(g.element(e).cell, a, -1);
    if (pred && H.cell(*pred).index_of(cluster)) return false;
  }
  return true;
}

std::vector<element_t> layer_points_direct(const GammaPoset& g) {
  std::vector<element_t> result;
  for (element_t e = 0; e < g.count(); ++e) {
    if (is_layer_point(g, e)) result.push_back(e);
  }
  return result;
}

bool is_branch_point_single(const GammaPoset& g, element_t e) {
  const StepClustering& H = g.source();
  const auto& cluster = g.cluster_of(e);
  auto pred = H.step_cell(g.element(e).cell, 0, -1);
  std::size_t contained = 0;
  if (pred) {
    for (const auto& t : H.cell(*pred).clusters()) {
      if (std::includes(cluster.begin(), cluster.end(), t.begin(), t.end())) ++contained;
    }
  }
  return contained == 0 || contained >= 2;
}

// Runs `collect` on each slice along `axis` and re-embeds the returned slice
// elements into g. Slices copy cell clusterings verbatim, so cluster indices
// carry over unchanged.
template <typename Collect>
std::vector<element_t> for_all_slices(const GammaPoset& g, std::size_t axis, Collect collect) {
  const StepClustering& H = g.source();
  if (axis >= H.axis_count()) throw Error(ErrorCode::argument, "axis out of range");
  std::vector<element_t> result;
  std::vector<std::uint32_t> anchor_pos(H.axis_count(), 0);
  while (true) {
    SliceSpec spec;
    spec.axis = axis;
    for (std::size_t a = 0; a < H.axis_count(); ++a) {
      if (a != axis) spec.anchor.push_back(H.axes()[a].values[anchor_pos[a]]);
    }
    StepClustering sliced = slice(H, spec);
    GammaPoset sliced_gamma(sliced);
    for (element_t se : collect(sliced_gamma)) {
      std::vector<std::uint32_t> pos = anchor_pos;
      pos[axis] = sliced_gamma.element(se).cell;
      std::uint32_t cell = static_cast<std::uint32_t>(H.linear_cell(pos));
      result.push_back(g.find(cell, sliced_gamma.element(se).cluster));
    }
    // Odometer over the anchor axes.
    std::size_t a = H.axis_count();
    while (a-- > 0) {
      if (a == axis) continue;
      if (++anchor_pos[a] < H.axes()[a].size()) break;
      anchor_pos[a] = 0;
    }
    bool wrapped = true;
    for (std::size_t b = 0; b < H.axis_count(); ++b) {
      if (b != axis && anchor_pos[b] != 0) wrapped = false;
    }
    if (wrapped) break;
  }
  std::sort(result.begin(), result.end());
  result.erase(std::unique(result.begin(), result.end()), result.end());
  return result;
}

std::vector<element_t> intersect_sorted(const std::vector<std::vector<element_t>>& sets) {
  if (sets.empty()) return {};
  std::vector<element_t> acc = sets[0];
  for (std::size_t i = 1; i < sets.size(); ++i) {
    std::vector<element_t> next;
    std::set_intersection(acc.begin(), acc.end(), sets[i].begin(), sets[i].end(),
                          std::back_inserter(next));
    acc = std::move(next);
  }
  return acc;
}

}  // namespace

LayerPointSet global_layer_points(const GammaPoset& g) {
  LayerPointSet set;
  set.kind = LayerPointSet::Kind::layer;
  set.global_points = layer_points_direct(g);
  for (std::size_t a = 0; a < g.axis_count(); ++a) {
    set.slice_points.push_back(slice_layer_points(g, a));
  }
  return set;
}

std::vector<element_t> slice_layer_points(const GammaPoset& g, std::size_t axis) {
  return for_all_slices(g, axis,
                        [](const GammaPoset& s) { return layer_points_direct(s); });
}

element_t max_layer_point_step(const GammaPoset& g, element_t e, std::size_t axis) {
  const StepClustering& H = g.source();
  while (true) {
    auto pred = H.step_cell(g.element(e).cell, axis, -1);
    if (!pred) return e;
    auto below = g.find_cluster(static_cast<std::uint32_t>(*pred), g.cluster_of(e));
    if (!below) return e;
    e = *below;
  }
}

element_t max_layer_point(const GammaPoset& g, element_t e, const AxisOrder& order) {
  std::vector<bool> seen(g.axis_count(), false);
  if (order.size() != g.axis_count()) {
    throw Error(ErrorCode::argument, "axis order must list every axis once");
  }
  for (std::size_t a : order) {
    if (a >= g.axis_count() || seen[a]) {
      throw Error(ErrorCode::argument, "axis order must list every axis once");
    }
    seen[a] = true;
  }
  for (std::size_t a : order) e = max_layer_point_step(g, e, a);
  return e;
}

std::vector<element_t> branch_points(const GammaPoset& g) {
  if (g.axis_count() != 1) {
    throw Error(ErrorCode::argument, "branch points need a single-axis clustering");
  }
  std::vector<element_t> result;
  for (element_t e = 0; e < g.count(); ++e) {
    if (is_branch_point_single(g, e)) result.push_back(e);
  }
  return result;
}

std::vector<element_t> slice_branch_points(const GammaPoset& g, std::size_t axis) {
  return for_all_slices(g, axis, [](const GammaPoset& s) {
    std::vector<element_t> result;
    for (element_t e = 0; e < s.count(); ++e) {
      if (is_branch_point_single(s, e)) result.push_back(e);
    }
    return result;
  });
}

std::vector<element_t> global_branch_points(const GammaPoset& g) {
  std::vector<std::vector<element_t>> per_axis;
  for (std::size_t a = 0; a < g.axis_count(); ++a) {
    per_axis.push_back(slice_branch_points(g, a));
  }
  return intersect_sorted(per_axis);
}

LayerPointSet branch_point_set(const GammaPoset& g) {
  LayerPointSet set;
  set.kind = LayerPointSet::Kind::branch;
  for (std::size_t a = 0; a < g.axis_count(); ++a) {
    set.slice_points.push_back(slice_branch_points(g, a));
  }
  set.global_points = global_branch_points(g);
  return set;
}

std::string layer_points_json(const GammaPoset& g, const LayerPointSet* layer,
                              const LayerPointSet* branch) {
  std::map<element_t, std::vector<std::string>> kinds;
  auto add = [&](const LayerPointSet* set, const char* name) {
    if (!set) return;
    for (element_t e : set->global_points) {
      kinds[e].push_back(std::string("global-") + name);
    }
    for (std::size_t a = 0; a < set->slice_points.size(); ++a) {
      for (element_t e : set->slice_points[a]) {
        kinds[e].push_back("slice-" + std::to_string(a + 1) + "-" + name);
      }
    }
  };
  add(layer, "layer");
  add(branch, "branch");

  nlohmann::ordered_json doc;
  doc["schema"] = "layerscope/layer-points/1";
  doc["points"] = nlohmann::ordered_json::array();
  for (const auto& [e, tags] : kinds) {
    nlohmann::ordered_json jp;
    jp["element"] = e;
    auto values = nlohmann::ordered_json::array();
    for (const auto& v : g.values_of(e)) values.push_back(format_exact(v));
    jp["cell"] = std::move(values);
    jp["cluster"] = g.cluster_of(e);
    std::vector<std::string> sorted_tags = tags;
    std::sort(sorted_tags.begin(), sorted_tags.end());
    jp["kinds"] = sorted_tags;
    doc["points"].push_back(std::move(jp));
  }
  return doc.dump(2) + "\n";
}

std::string lambda_dot(const GammaPoset& g, const std::vector<element_t>& points) {
  std::vector<element_t> nodes = points;
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  std::ostringstream out;
  out << "digraph lambda {\n";
  out << "  rankdir=BT;\n";
  out << "  node [shape=box];\n";
  for (element_t e : nodes) {
    out << "  e" << e << " [label=\"(";
    auto values = g.values_of(e);
    for (std::size_t a = 0; a < values.size(); ++a) {
      if (a) out << ", ";
      out << format_exact(values[a]);
    }
    out << " | {";
    const auto& cluster = g.cluster_of(e);
    for (std::size_t i = 0; i < cluster.size(); ++i) {
      if (i) out << ' ';
      out << cluster[i];
    }
    out << "})\"];\n";
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      if (i == j || !g.leq(nodes[i], nodes[j])) continue;
      bool cover = true;
      for (std::size_t m = 0; m < nodes.size() && cover; ++m) {
        if (m == i || m == j) continue;
        if (g.leq(nodes[i], nodes[m]) && g.leq(nodes[m], nodes[j])) cover = false;
      }
      if (cover) out << "  e" << nodes[i] << " -> e" << nodes[j] << ";\n";
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace layerscope
