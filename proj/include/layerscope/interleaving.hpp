#pragma once

#include <memory>

#include "layerscope/layer_points.hpp"

namespace layerscope {

// Map between ground sets, by index.
struct GroundMap {
  std::vector<index_t> image;

  static GroundMap identity(std::size_t n);
};

// A ground map together with a nonnegative per-axis shift, resolved against a
// concrete source/target pair: for every source element the containing target
// cluster at the shifted parameters. Shifted parameters are evaluated through
// the step extension; `target_cell` records the snap for auditability.
struct ShiftedMap {
  static constexpr std::uint32_t kNoCell = static_cast<std::uint32_t>(-1);

  GroundMap ground;
  std::vector<Rational> shift;
  std::vector<std::uint32_t> target_cell;    // per source cell
  std::vector<std::uint32_t> image_cluster;  // per source element (cell-major)
  std::vector<std::uint32_t> element_offset; // per source cell, into image_cluster
};

struct MapObstruction {
  std::vector<Rational> cell;     // source grid values where the map fails
  std::vector<index_t> cluster;
  std::string detail;             // "split" or "no containing cluster" style note
};

struct InducedMapResult {
  std::optional<ShiftedMap> map;
  std::optional<MapObstruction> obstruction;
  bool exists() const { return map.has_value(); }
};

// The cluster-level map S -> cluster containing f(S) at s + v*shift, or the
// first obstruction. Axes (count and variance) of source and target must
// agree.
InducedMapResult induced_map(const GroundMap& f, std::vector<Rational> shift,
                             const StepClustering& source, const StepClustering& target);

struct CheckFailure {
  std::string stage;           // f-existence | g-existence | round-trip-H | round-trip-E
  std::vector<Rational> cell;
  std::vector<index_t> cluster;
  std::string detail;
};

struct InterleavingWitness {
  std::shared_ptr<const StepClustering> H;
  std::shared_ptr<const StepClustering> E;
  std::vector<Rational> eps;
  std::vector<Rational> delta;
  std::optional<ShiftedMap> f;  // H -> E
  std::optional<ShiftedMap> g;  // E -> H
  bool valid = false;
  std::vector<CheckFailure> failures;
};

// Builds both induced maps and verifies the two round-trip families
// g∘f = id-shifted on H and f∘g = id-shifted on E at every grid cell.
// Composites are evaluated at cells located from the exact sum of shifts,
// never by snapping twice.
InterleavingWitness check_interleaving(const StepClustering& H, const StepClustering& E,
                                       const GroundMap& f, std::vector<Rational> eps,
                                       const GroundMap& g, std::vector<Rational> delta);

struct ApproximationWitness {
  InterleavingWitness base;
  Rational h_value;
  std::vector<std::string> warnings;  // nearest-point tie-break notes
};

// Interleaving candidate (inclusion, nearest-point map) for a subsample:
// H (over the sample's ground set) is reread as a clustering of the parent
// before checking.
ApproximationWitness build_approximation(const FiniteMetricSpace& parent, const Subsample& sample,
                                         const StepClustering& H_over_sample,
                                         const StepClustering& E_over_parent,
                                         std::vector<Rational> eps, std::vector<Rational> delta);

enum class TriangleVerdict { commutes, homotopy, fails };

std::string verdict_name(TriangleVerdict v);

struct LayerDiagram {
  std::vector<element_t> lambda_h;  // layer points of H, increasing
  std::vector<element_t> lambda_e;
  // Maps stored by position in the lambda vectors; values are Gamma elements.
  std::vector<element_t> top;       // Λ(H) -> Λ(H), m after the (ε+δ)-shift
  std::vector<element_t> forward;   // Λ(H) -> Λ(E), m∘f_ε
  std::vector<element_t> backward;  // Λ(E) -> Λ(H), m∘g_δ
  std::vector<element_t> bottom;    // Λ(E) -> Λ(E)
  TriangleVerdict upper = TriangleVerdict::fails;
  TriangleVerdict lower = TriangleVerdict::fails;
  std::string upper_chain;          // how the homotopy (if any) is witnessed
  std::string lower_chain;
  std::optional<element_t> upper_witness;  // a layer point where the verdict stuck
  std::optional<element_t> lower_witness;
  bool gamma_commutes = false;
  std::optional<CheckFailure> gamma_failure;
};

// The layer-point square induced by a valid witness, with per-triangle
// verdicts. Homotopy means the two composites are joined by a chain of
// pointwise-comparable poset maps of length at most 2; anything needing more
// is reported as fails (with a witness), never guessed.
LayerDiagram induced_layer_diagram(const InterleavingWitness& w, const GammaPoset& gamma_h,
                                   const GammaPoset& gamma_e, const AxisOrder& order_h,
                                   const AxisOrder& order_e);

std::string interleaving_report_json(const InterleavingWitness& w, const LayerDiagram* diagram);

}  // namespace layerscope
