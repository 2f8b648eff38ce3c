#include "layerscope/interleaving.hpp"

#include <algorithm>

#include <json.hpp>

namespace layerscope {

namespace {

void internal_check(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::validation, std::string("internal invariant failed: ") + what);
}

void check_axes_match(const StepClustering& a, const StepClustering& b) {
  if (a.axis_count() != b.axis_count() || a.variance() != b.variance()) {
    throw Error(ErrorCode::argument, "clusterings have mismatched axes");
  }
}

void check_shift(const StepClustering& s, const std::vector<Rational>& shift) {
  if (shift.size() != s.axis_count()) {
    throw Error(ErrorCode::argument, "shift needs one entry per axis");
  }
  for (const Rational& v : shift) {
    if (v < 0) throw Error(ErrorCode::argument, "shifts must be nonnegative");
  }
}

std::vector<Rational> shifted_values(const StepClustering& src, std::size_t cell,
                                     const std::vector<Rational>& shift,
                                     const std::vector<Rational>* extra = nullptr) {
  std::vector<Rational> values = src.cell_values(cell);
  for (std::size_t a = 0; a < values.size(); ++a) {
    Rational total = shift[a];
    if (extra) total += (*extra)[a];
    if (src.axes()[a].variance > 0) {
      values[a] += total;
    } else {
      values[a] -= total;
    }
  }
  return values;
}

std::vector<index_t> image_points(const GroundMap& f, const std::vector<index_t>& cluster) {
  std::vector<index_t> mapped;
  mapped.reserve(cluster.size());
  for (index_t p : cluster) mapped.push_back(f.image[p]);
  std::sort(mapped.begin(), mapped.end());
  mapped.erase(std::unique(mapped.begin(), mapped.end()), mapped.end());
  return mapped;
}

// One round-trip family: source -> target -> source against the summed-shift
// identity, compared at the cell located from the exact shift sum.
void round_trip(const StepClustering& src, const StepClustering& dst, const ShiftedMap& out,
                const ShiftedMap& back, const char* stage, std::vector<CheckFailure>& failures) {
  for (std::size_t cell = 0; cell < src.cell_count(); ++cell) {
    const Clustering& here = src.cell(cell);
    for (std::size_t idx = 0; idx < here.count(); ++idx) {
      const auto& cluster = here.clusters()[idx];
      std::uint32_t tc = out.target_cell[cell];
      internal_check(tc != ShiftedMap::kNoCell, "existing map lacks a target cell");
      const auto& there = dst.cell(tc).clusters()[out.image_cluster[out.element_offset[cell] + idx]];
      std::vector<index_t> returned = image_points(back.ground, there);

      auto final_values = shifted_values(src, cell, out.shift, &back.shift);
      auto final_cell = src.locate_cell(final_values);
      internal_check(final_cell.has_value(), "summed shift left the grid downward");
      const Clustering& target = src.cell(*final_cell);

      index_t composite = target.owner(returned.front());
      internal_check(composite != Clustering::kNone, "round trip lost its cluster");
      for (index_t p : returned) {
        internal_check(target.owner(p) == composite, "round trip split a cluster");
      }
      index_t direct = target.owner(cluster.front());
      internal_check(direct != Clustering::kNone, "identity shift lost its cluster");

      if (composite != direct) {
        failures.push_back({stage, src.cell_values(cell), cluster,
                            "composite lands in a different cluster than the shifted identity"});
        return;
      }
    }
  }
}

std::size_t lambda_position(const std::vector<element_t>& lambda, element_t e) {
  auto it = std::lower_bound(lambda.begin(), lambda.end(), e);
  internal_check(it != lambda.end() && *it == e, "retraction left the layer point set");
  return static_cast<std::size_t>(it - lambda.begin());
}

struct VerdictResult {
  TriangleVerdict verdict = TriangleVerdict::fails;
  std::string chain;
  std::optional<element_t> witness;
};

// Searches the length-<=2 comparability chains between two maps given by
// their value lists over `domain`.
VerdictResult compare_maps(const GammaPoset& g, const std::vector<element_t>& domain,
                           const std::vector<element_t>& alpha,
                           const std::vector<element_t>& beta) {
  if (alpha == beta) return {TriangleVerdict::commutes, "equal", std::nullopt};
  bool le = true;
  bool ge = true;
  for (std::size_t i = 0; i < domain.size(); ++i) {
    if (!g.leq(alpha[i], beta[i])) le = false;
    if (!g.leq(beta[i], alpha[i])) ge = false;
  }
  if (le) return {TriangleVerdict::homotopy, "composite <= direct pointwise", std::nullopt};
  if (ge) return {TriangleVerdict::homotopy, "direct <= composite pointwise", std::nullopt};

  auto try_middle = [&](bool lower) -> std::optional<element_t> {
    // Builds the pointwise min (or max) selection; returns the middle map's
    // first failure, encoded as the domain element, or nullopt on success.
    std::vector<element_t> middle(domain.size());
    for (std::size_t i = 0; i < domain.size(); ++i) {
      bool ab = g.leq(alpha[i], beta[i]);
      bool ba = g.leq(beta[i], alpha[i]);
      if (!ab && !ba) return domain[i];
      if (lower) {
        middle[i] = ab ? alpha[i] : beta[i];
      } else {
        middle[i] = ab ? beta[i] : alpha[i];
      }
    }
    for (std::size_t i = 0; i < domain.size(); ++i) {
      for (std::size_t j = 0; j < domain.size(); ++j) {
        if (i != j && g.leq(domain[i], domain[j]) && !g.leq(middle[i], middle[j])) {
          return domain[i];
        }
      }
    }
    return std::nullopt;
  };

  if (!try_middle(true)) {
    return {TriangleVerdict::homotopy, "via a pointwise lower middle map (length 2)",
            std::nullopt};
  }
  if (!try_middle(false)) {
    return {TriangleVerdict::homotopy, "via a pointwise upper middle map (length 2)",
            std::nullopt};
  }
  std::optional<element_t> witness = try_middle(true);
  return {TriangleVerdict::fails, "no comparability chain of length <= 2", witness};
}

}  // namespace

GroundMap GroundMap::identity(std::size_t n) {
  GroundMap m;
  m.image.resize(n);
  for (std::size_t i = 0; i < n; ++i) m.image[i] = static_cast<index_t>(i);
  return m;
}

InducedMapResult induced_map(const GroundMap& f, std::vector<Rational> shift,
                             const StepClustering& source, const StepClustering& target) {
  check_axes_match(source, target);
  check_shift(source, shift);
  if (f.image.size() != source.ground_size()) {
    throw Error(ErrorCode::argument, "ground map size does not match the source ground set");
  }
  for (index_t v : f.image) {
    if (v >= target.ground_size()) {
      throw Error(ErrorCode::argument, "ground map leaves the target ground set");
    }
  }

  ShiftedMap map;
  map.ground = f;
  map.shift = std::move(shift);
  map.target_cell.assign(source.cell_count(), ShiftedMap::kNoCell);
  map.element_offset.assign(source.cell_count() + 1, 0);
  for (std::size_t cell = 0; cell < source.cell_count(); ++cell) {
    map.element_offset[cell + 1] =
        map.element_offset[cell] + static_cast<std::uint32_t>(source.cell(cell).count());
  }
  map.image_cluster.assign(map.element_offset.back(), 0);

  for (std::size_t cell = 0; cell < source.cell_count(); ++cell) {
    const Clustering& here = source.cell(cell);
    auto tc = target.locate_cell(shifted_values(source, cell, map.shift));
    if (tc) map.target_cell[cell] = static_cast<std::uint32_t>(*tc);
    if (here.empty()) continue;
    if (!tc) {
      return {std::nullopt,
              MapObstruction{source.cell_values(cell), here.clusters().front(),
                             "shifted parameters fall below the target grid"}};
    }
    const Clustering& there = target.cell(*tc);
    for (std::size_t idx = 0; idx < here.count(); ++idx) {
      std::vector<index_t> mapped = image_points(f, here.clusters()[idx]);
      index_t owner = there.owner(mapped.front());
      if (owner == Clustering::kNone) {
        return {std::nullopt,
                MapObstruction{source.cell_values(cell), here.clusters()[idx],
                               "no cluster of the target contains the image"}};
      }
      for (index_t p : mapped) {
        if (there.owner(p) != owner) {
          return {std::nullopt,
                  MapObstruction{source.cell_values(cell), here.clusters()[idx],
                                 "the image splits across target clusters"}};
        }
      }
      map.image_cluster[map.element_offset[cell] + idx] = owner;
    }
  }

  // Naturality along covering pairs. This cannot fail for order-preserving
  // inputs; treat a violation as an internal error.
  for (std::size_t cell = 0; cell < source.cell_count(); ++cell) {
    const Clustering& here = source.cell(cell);
    if (here.empty()) continue;
    for (std::size_t a = 0; a < source.axis_count(); ++a) {
      auto next = source.step_cell(cell, a, +1);
      if (!next) continue;
      for (std::size_t idx = 0; idx < here.count(); ++idx) {
        index_t succ = source.cell(*next).owner(here.clusters()[idx].front());
        internal_check(succ != Clustering::kNone, "missing successor cluster");
        const auto& t_here =
            target.cell(map.target_cell[cell])
                .clusters()[map.image_cluster[map.element_offset[cell] + idx]];
        const auto& t_next =
            target.cell(map.target_cell[*next])
                .clusters()[map.image_cluster[map.element_offset[*next] + succ]];
        internal_check(
            std::includes(t_next.begin(), t_next.end(), t_here.begin(), t_here.end()),
            "induced map is not natural");
      }
    }
  }

  return {std::move(map), std::nullopt};
}

InterleavingWitness check_interleaving(const StepClustering& H, const StepClustering& E,
                                       const GroundMap& f, std::vector<Rational> eps,
                                       const GroundMap& g, std::vector<Rational> delta) {
  check_axes_match(H, E);
  InterleavingWitness w;
  w.H = std::make_shared<const StepClustering>(H);
  w.E = std::make_shared<const StepClustering>(E);
  w.eps = eps;
  w.delta = delta;

  auto fr = induced_map(f, std::move(eps), H, E);
  if (fr.exists()) {
    w.f = std::move(*fr.map);
  } else {
    w.failures.push_back(
        {"f-existence", fr.obstruction->cell, fr.obstruction->cluster, fr.obstruction->detail});
  }
  auto gr = induced_map(g, std::move(delta), E, H);
  if (gr.exists()) {
    w.g = std::move(*gr.map);
  } else {
    w.failures.push_back(
        {"g-existence", gr.obstruction->cell, gr.obstruction->cluster, gr.obstruction->detail});
  }
  if (w.f && w.g) {
    round_trip(H, E, *w.f, *w.g, "round-trip-H", w.failures);
    round_trip(E, H, *w.g, *w.f, "round-trip-E", w.failures);
  }
  w.valid = w.f && w.g && w.failures.empty();
  return w;
}

ApproximationWitness build_approximation(const FiniteMetricSpace& parent, const Subsample& sample,
                                         const StepClustering& H_over_sample,
                                         const StepClustering& E_over_parent,
                                         std::vector<Rational> eps, std::vector<Rational> delta) {
  if (H_over_sample.ground_size() != sample.size()) {
    throw Error(ErrorCode::argument, "H is not a clustering of the sample");
  }
  if (E_over_parent.ground_size() != parent.size()) {
    throw Error(ErrorCode::argument, "E is not a clustering of the parent space");
  }
  check_shift(H_over_sample, eps);
  check_shift(E_over_parent, delta);

  StepClustering H_parent =
      with_ground(H_over_sample, sample.indices, parent.size(), parent.labels());
  NearestPointMap npm = nearest_point_map(parent, sample);

  ApproximationWitness result{
      check_interleaving(H_parent, E_over_parent, GroundMap::identity(parent.size()),
                         std::move(eps), GroundMap{npm.to_sample}, std::move(delta)),
      directional_hausdorff(parent, sample), std::move(npm.warnings)};
  return result;
}

std::string verdict_name(TriangleVerdict v) {
  switch (v) {
    case TriangleVerdict::commutes:
      return "commutes";
    case TriangleVerdict::homotopy:
      return "commutes-up-to-homotopy";
    default:
      return "fails";
  }
}

LayerDiagram induced_layer_diagram(const InterleavingWitness& w, const GammaPoset& gamma_h,
                                   const GammaPoset& gamma_e, const AxisOrder& order_h,
                                   const AxisOrder& order_e) {
  if (!w.valid) throw Error(ErrorCode::argument, "witness is not a valid interleaving");
  const StepClustering& H = gamma_h.source();
  const StepClustering& E = gamma_e.source();
  if (H.cell_count() != w.H->cell_count() || E.cell_count() != w.E->cell_count() ||
      H.ground_size() != w.H->ground_size() || E.ground_size() != w.E->ground_size()) {
    throw Error(ErrorCode::argument, "gamma posets do not match the witness clusterings");
  }

  std::vector<Rational> total = w.eps;
  for (std::size_t a = 0; a < total.size(); ++a) total[a] += w.delta[a];

  auto shifted_identity = [&](const GammaPoset& g, element_t e,
                              const std::vector<Rational>& shift) {
    const StepClustering& src = g.source();
    auto values = shifted_values(src, g.element(e).cell, shift);
    auto cell = src.locate_cell(values);
    internal_check(cell.has_value(), "identity shift left the grid");
    index_t owner = src.cell(*cell).owner(g.cluster_of(e).front());
    internal_check(owner != Clustering::kNone, "identity shift lost its cluster");
    return g.find(static_cast<std::uint32_t>(*cell), owner);
  };
  LayerDiagram d;
  d.lambda_h = global_layer_points(gamma_h).global_points;
  d.lambda_e = global_layer_points(gamma_e).global_points;

  auto map_through = [&](const GammaPoset& src, const GammaPoset& dst, const ShiftedMap& m,
                         element_t e) {
    const GammaElement& el = src.element(e);
    std::uint32_t tc = m.target_cell[el.cell];
    internal_check(tc != ShiftedMap::kNoCell, "mapped element lacks a target cell");
    return dst.find(tc, m.image_cluster[m.element_offset[el.cell] + el.cluster]);
  };

  d.top.reserve(d.lambda_h.size());
  d.forward.reserve(d.lambda_h.size());
  for (element_t lp : d.lambda_h) {
    d.top.push_back(max_layer_point(gamma_h, shifted_identity(gamma_h, lp, total), order_h));
    d.forward.push_back(max_layer_point(gamma_e, map_through(gamma_h, gamma_e, *w.f, lp), order_e));
  }
  d.bottom.reserve(d.lambda_e.size());
  d.backward.reserve(d.lambda_e.size());
  for (element_t lp : d.lambda_e) {
    d.bottom.push_back(max_layer_point(gamma_e, shifted_identity(gamma_e, lp, total), order_e));
    d.backward.push_back(max_layer_point(gamma_h, map_through(gamma_e, gamma_h, *w.g, lp), order_h));
  }

  std::vector<element_t> upper_composite(d.lambda_h.size());
  for (std::size_t i = 0; i < d.lambda_h.size(); ++i) {
    upper_composite[i] = d.backward[lambda_position(d.lambda_e, d.forward[i])];
  }
  std::vector<element_t> lower_composite(d.lambda_e.size());
  for (std::size_t i = 0; i < d.lambda_e.size(); ++i) {
    lower_composite[i] = d.forward[lambda_position(d.lambda_h, d.backward[i])];
  }

  VerdictResult upper = compare_maps(gamma_h, d.lambda_h, upper_composite, d.top);
  d.upper = upper.verdict;
  d.upper_chain = upper.chain;
  d.upper_witness = upper.witness;
  VerdictResult lower = compare_maps(gamma_e, d.lambda_e, lower_composite, d.bottom);
  d.lower = lower.verdict;
  d.lower_chain = lower.chain;
  d.lower_witness = lower.witness;

  // The Gamma-level square must commute exactly for a valid witness; recheck
  // rather than trusting the flag.
  std::vector<CheckFailure> gamma_failures;
  round_trip(H, E, *w.f, *w.g, "round-trip-H", gamma_failures);
  round_trip(E, H, *w.g, *w.f, "round-trip-E", gamma_failures);
  d.gamma_commutes = gamma_failures.empty();
  if (!gamma_failures.empty()) d.gamma_failure = gamma_failures.front();

  return d;
}

std::string interleaving_report_json(const InterleavingWitness& w, const LayerDiagram* diagram) {
  nlohmann::ordered_json doc;
  doc["schema"] = "layerscope/interleaving-report/1";
  auto shifts = [](const std::vector<Rational>& v) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& x : v) arr.push_back(format_exact(x));
    return arr;
  };
  doc["eps"] = shifts(w.eps);
  doc["delta"] = shifts(w.delta);
  doc["exists"] = static_cast<bool>(w.f) && static_cast<bool>(w.g);
  doc["commutes"] = w.valid;
  doc["failures"] = nlohmann::ordered_json::array();
  for (const auto& failure : w.failures) {
    nlohmann::ordered_json jf;
    jf["stage"] = failure.stage;
    auto cell = nlohmann::ordered_json::array();
    for (const auto& v : failure.cell) cell.push_back(format_exact(v));
    jf["cell"] = std::move(cell);
    jf["cluster"] = failure.cluster;
    jf["detail"] = failure.detail;
    doc["failures"].push_back(std::move(jf));
  }
  if (diagram) {
    nlohmann::ordered_json jd;
    jd["upper"] = verdict_name(diagram->upper);
    jd["upper_chain"] = diagram->upper_chain;
    jd["lower"] = verdict_name(diagram->lower);
    jd["lower_chain"] = diagram->lower_chain;
    jd["gamma_commutes"] = diagram->gamma_commutes;
    jd["layer_points_H"] = diagram->lambda_h;
    jd["layer_points_E"] = diagram->lambda_e;
    if (diagram->upper_witness) jd["upper_witness"] = *diagram->upper_witness;
    if (diagram->lower_witness) jd["lower_witness"] = *diagram->lower_witness;
    doc["layer_diagram"] = std::move(jd);
  }
  return doc.dump(2) + "\n";
}

}  // namespace layerscope
