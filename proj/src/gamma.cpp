#include "layerscope/gamma.hpp"

#include <algorithm>
#include <sstream>

namespace layerscope {

GammaPoset::GammaPoset(const StepClustering& H) : source_(&H) {
  offset_.resize(H.cell_count() + 1, 0);
  for (std::size_t cell = 0; cell < H.cell_count(); ++cell) {
    offset_[cell + 1] = offset_[cell] + static_cast<std::uint32_t>(H.cell(cell).count());
    for (std::uint32_t c = 0; c < H.cell(cell).count(); ++c) {
      elements_.push_back({static_cast<std::uint32_t>(cell), c});
    }
  }
  up_.assign(elements_.size() * H.axis_count(), kNoElement);
  for (element_t e = 0; e < elements_.size(); ++e) {
    const auto& cluster = cluster_of(e);
    for (std::size_t a = 0; a < H.axis_count(); ++a) {
      auto next = H.step_cell(elements_[e].cell, a, +1);
      if (!next) continue;
      index_t target = H.cell(*next).owner(cluster.front());
      // Order-preservation of H guarantees a successor cluster.
      if (target == Clustering::kNone) {
        throw Error(ErrorCode::validation, "missing successor cluster in step clustering");
      }
      up_[e * H.axis_count() + a] = find(static_cast<std::uint32_t>(*next), target);
    }
  }
}

const std::vector<index_t>& GammaPoset::cluster_of(element_t e) const {
  const GammaElement& el = elements_[e];
  return source_->cell(el.cell).clusters()[el.cluster];
}

std::vector<Rational> GammaPoset::values_of(element_t e) const {
  return source_->cell_values(elements_[e].cell);
}

element_t GammaPoset::find(std::uint32_t cell, std::uint32_t cluster_index) const {
  return offset_[cell] + cluster_index;
}

std::optional<element_t> GammaPoset::find_cluster(std::uint32_t cell,
                                                  const std::vector<index_t>& members) const {
  auto idx = source_->cell(cell).index_of(members);
  if (!idx) return std::nullopt;
  return find(cell, static_cast<std::uint32_t>(*idx));
}

std::optional<element_t> GammaPoset::find_containing(std::uint32_t cell, index_t point) const {
  index_t owner = source_->cell(cell).owner(point);
  if (owner == Clustering::kNone) return std::nullopt;
  return find(cell, owner);
}

bool GammaPoset::leq(element_t a, element_t b) const {
  auto pa = source_->cell_position(elements_[a].cell);
  auto pb = source_->cell_position(elements_[b].cell);
  for (std::size_t i = 0; i < pa.size(); ++i) {
    if (pa[i] > pb[i]) return false;
  }
  const auto& ca = cluster_of(a);
  const auto& cb = cluster_of(b);
  return std::includes(cb.begin(), cb.end(), ca.begin(), ca.end());
}

GammaPoset build_gamma(const StepClustering& H) { return GammaPoset(H); }

std::vector<Layer> layers(const GammaPoset& g) {
  std::size_t n = g.count();
  UnionFind uf(n);
  for (element_t e = 0; e < n; ++e) {
    for (std::size_t a = 0; a < g.axis_count(); ++a) {
      element_t u = g.up(e, a);
      if (u != kNoElement && g.cluster_of(u) == g.cluster_of(e)) uf.unite(e, u);
    }
  }
  std::vector<std::vector<element_t>> by_root(n);
  for (element_t e = 0; e < n; ++e) by_root[uf.find(e)].push_back(e);
  std::vector<Layer> result;
  for (auto& members : by_root) {
    if (members.empty()) continue;
    Layer layer;
    layer.cluster = g.cluster_of(members.front());
    layer.members = std::move(members);
    for (element_t e : layer.members) layer.support.push_back(g.element(e).cell);
    std::sort(layer.support.begin(), layer.support.end());
    result.push_back(std::move(layer));
  }
  std::sort(result.begin(), result.end(),
            [](const Layer& a, const Layer& b) { return a.members.front() < b.members.front(); });
  return result;
}

std::vector<std::uint32_t> up_set(const StepClustering& H,
                                  std::span<const std::uint32_t> cells) {
  std::vector<bool> in(H.cell_count(), false);
  for (std::uint32_t c : cells) in[c] = true;
  for (std::size_t cell = 0; cell < H.cell_count(); ++cell) {
    if (in[cell]) continue;
    for (std::size_t a = 0; a < H.axis_count() && !in[cell]; ++a) {
      auto pred = H.step_cell(cell, a, -1);
      if (pred && in[*pred]) in[cell] = true;
    }
  }
  std::vector<std::uint32_t> result;
  for (std::size_t cell = 0; cell < in.size(); ++cell) {
    if (in[cell]) result.push_back(static_cast<std::uint32_t>(cell));
  }
  return result;
}

std::vector<std::uint32_t> down_set(const StepClustering& H,
                                    std::span<const std::uint32_t> cells) {
  std::vector<bool> in(H.cell_count(), false);
  for (std::uint32_t c : cells) in[c] = true;
  for (std::size_t cell = H.cell_count(); cell-- > 0;) {
    if (in[cell]) continue;
    for (std::size_t a = 0; a < H.axis_count() && !in[cell]; ++a) {
      auto next = H.step_cell(cell, a, +1);
      if (next && in[*next]) in[cell] = true;
    }
  }
  std::vector<std::uint32_t> result;
  for (std::size_t cell = 0; cell < in.size(); ++cell) {
    if (in[cell]) result.push_back(static_cast<std::uint32_t>(cell));
  }
  return result;
}

ClosedBelowReport is_closed_below(const GammaPoset& g, const Layer& layer) {
  const StepClustering& H = g.source();
  ClosedBelowReport report;
  auto up = up_set(H, layer.support);
  auto down = down_set(H, layer.support);
  std::vector<std::uint32_t> updown;
  std::set_intersection(up.begin(), up.end(), down.begin(), down.end(),
                        std::back_inserter(updown));
  std::set_difference(updown.begin(), updown.end(), layer.support.begin(), layer.support.end(),
                      std::back_inserter(report.excess));
  report.representable = report.excess.empty();

  // Minimal support cells: nothing of the support lies strictly below them.
  std::vector<bool> in_support(H.cell_count(), false);
  for (std::uint32_t c : layer.support) in_support[c] = true;
  std::vector<bool> above(H.cell_count(), false);
  for (std::size_t cell = 0; cell < H.cell_count(); ++cell) {
    for (std::size_t a = 0; a < H.axis_count() && !above[cell]; ++a) {
      auto pred = H.step_cell(cell, a, -1);
      if (pred && (in_support[*pred] || above[*pred])) above[cell] = true;
    }
  }
  for (std::uint32_t c : layer.support) {
    if (!above[c]) report.minimal_cells.push_back(c);
  }
  return report;
}

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string gamma_dot(const GammaPoset& g) {
  const StepClustering& H = g.source();
  std::ostringstream out;
  out << "digraph gamma {\n";
  out << "  rankdir=BT;\n";
  out << "  node [shape=box];\n";
  for (element_t e = 0; e < g.count(); ++e) {
    out << "  e" << e << " [label=\"(";
    auto values = g.values_of(e);
    for (std::size_t a = 0; a < values.size(); ++a) {
      if (a) out << ", ";
      out << format_exact(values[a]);
    }
    out << " | " << dot_escape(H.ground_labels()[g.cluster_of(e).front()]) << ")\"];\n";
  }
  for (element_t e = 0; e < g.count(); ++e) {
    for (std::size_t a = 0; a < g.axis_count(); ++a) {
      element_t u = g.up(e, a);
      if (u != kNoElement) out << "  e" << e << " -> e" << u << ";\n";
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace layerscope
