#include "layerscope/stability.hpp"

#include <json.hpp>

#include <algorithm>
#include <utility>

namespace layerscope {

namespace {

ElementInfo info_of(const GammaPoset& g, element_t e) {
  ElementInfo out;
  out.id = e;
  out.cell = g.values_of(e);
  out.cluster = g.cluster_of(e);
  return out;
}

std::vector<Rational> consecutive_gaps(const std::vector<Rational>& values,
                                       std::size_t merge_index) {
  std::vector<Rational> gaps;
  for (std::size_t i = 0; i + 1 < values.size() && i < merge_index; ++i)
    gaps.push_back(values[i + 1] - values[i]);
  return gaps;
}

bool below_all(const Rational& x, const std::vector<Rational>& gaps) {
  return std::all_of(gaps.begin(), gaps.end(), [&](const Rational& g) { return x < g; });
}

// Position of a layer point in the sorted lambda vector. The retraction m
// always lands on a layer point, so a miss is an internal error.
std::size_t lambda_position(const std::vector<element_t>& lambda, element_t e) {
  auto it = std::lower_bound(lambda.begin(), lambda.end(), e);
  if (it == lambda.end() || *it != e)
    throw Error(ErrorCode::validation, "internal invariant failed: image is not a layer point");
  return static_cast<std::size_t>(it - lambda.begin());
}

}  // namespace

RetractAnalysis::RetractAnalysis(const FiniteMetricSpace& parent, const Subsample& sample, int k,
                                 const Rational& c, const Rational& eps, const Rational& delta,
                                 bool force_merge_index_max) {
  if (k < 0) throw Error(ErrorCode::argument, "degree parameter must be nonnegative");
  if (c < 0 || eps < 0 || delta < 0)
    throw Error(ErrorCode::argument, "parameters c, eps and delta must be nonnegative");

  FiniteMetricSpace sample_space = sample.restricted(parent);

  report_.k = k;
  report_.c = c;
  report_.eps = eps;
  report_.delta = delta;
  report_.forced_merge_index = force_merge_index_max;
  report_.ground_labels = parent.labels();
  report_.h = directional_hausdorff(parent, sample);
  report_.n_k = density_radius(sample, parent, k);

  PhaseChangeProfile profile = phase_change_profile(sample_space);
  report_.phase_values = profile.values;
  report_.merge_index = force_merge_index_max ? profile.values.size() - 1 : profile.merge_index;
  report_.gaps = consecutive_gaps(profile.values, report_.merge_index);

  const Rational total = c + eps + delta;
  report_.conditions.delta_ge_2h = delta >= Rational(2) * report_.h;
  report_.conditions.eps_window = report_.n_k - eps <= c && c <= delta;
  report_.conditions.gap = below_all(total, report_.gaps);

  StepClustering sample_tower =
      slice(from_degree_rips(sample_space, 0), SliceSpec{0, {Rational(0)}});
  StepClustering truncated = truncate_below(sample_tower, c);
  StepClustering ambient = slice(from_degree_rips(parent, k), SliceSpec{0, {Rational(k)}});

  approx_ = build_approximation(parent, sample, truncated, ambient, {eps}, {delta});
  report_.warnings = approx_.warnings;
  report_.approximation_exists = approx_.base.f.has_value() && approx_.base.g.has_value();
  report_.approximation_valid = approx_.base.valid;
  report_.failures = approx_.base.failures;

  gamma_h_ = std::make_unique<GammaPoset>(*approx_.base.H);
  gamma_e_ = std::make_unique<GammaPoset>(*approx_.base.E);

  LayerPointSet lambda_h = global_layer_points(*gamma_h_);
  const Rational spread = eps + delta;
  report_.conditions.weak_gap = true;
  for (element_t a : lambda_h.global_points) {
    for (element_t b : lambda_h.global_points) {
      if (a == b || !gamma_h_->leq(a, b)) continue;
      if (!(gamma_h_->values_of(b)[0] - gamma_h_->values_of(a)[0] > spread)) {
        report_.conditions.weak_gap = false;
        break;
      }
    }
    if (!report_.conditions.weak_gap) break;
  }

  if (approx_.base.valid) {
    diagram_.emplace(
        induced_layer_diagram(approx_.base, *gamma_h_, *gamma_e_, AxisOrder{0}, AxisOrder{0}));
    report_.diagram_built = true;
    report_.upper_verdict = verdict_name(diagram_->upper);
    report_.lower_verdict = verdict_name(diagram_->lower);
    report_.top_identity = diagram_->top == diagram_->lambda_h;

    report_.retract_verified = true;
    for (std::size_t i = 0; i < diagram_->lambda_h.size(); ++i) {
      LayerPointTrace trace;
      trace.source = info_of(*gamma_h_, diagram_->lambda_h[i]);
      element_t image = diagram_->forward[i];
      trace.i_eps = info_of(*gamma_e_, image);
      element_t back = diagram_->backward[lambda_position(diagram_->lambda_e, image)];
      trace.theta_delta = info_of(*gamma_h_, back);
      trace.identity = back == diagram_->lambda_h[i];
      if (!trace.identity) report_.retract_verified = false;
      report_.table.push_back(std::move(trace));
    }
  }

  report_.soundness_violation =
      (report_.conditions.approximation() && !report_.approximation_valid) ||
      (report_.conditions.retract() &&
       !(report_.diagram_built && report_.retract_verified));
}

std::vector<RetractAnalysis::ParamBound> RetractAnalysis::param_bounds() const {
  if (!diagram_)
    throw Error(ErrorCode::argument, "parameter bounds need a valid approximation");
  std::vector<ParamBound> out;
  const Rational two_h = Rational(2) * report_.h;
  for (std::size_t i = 0; i < diagram_->lambda_h.size(); ++i) {
    const Rational s = gamma_h_->values_of(diagram_->lambda_h[i])[0];
    if (!(s > report_.c)) continue;
    ParamBound bound;
    bound.source = info_of(*gamma_h_, diagram_->lambda_h[i]);
    bound.t = gamma_e_->values_of(diagram_->forward[i])[0];
    bound.holds = s - two_h <= bound.t && bound.t <= s + report_.eps;
    out.push_back(std::move(bound));
  }
  return out;
}

StabilityReport check_main_theorem(const FiniteMetricSpace& parent, const Subsample& sample,
                                   int k, const Rational& c, const Rational& eps,
                                   const Rational& delta, bool force_merge_index_max) {
  return RetractAnalysis(parent, sample, k, c, eps, delta, force_merge_index_max).report();
}

RetractDefaults default_parameters(const FiniteMetricSpace& parent, const Subsample& sample,
                                   int k, const std::optional<Rational>& c,
                                   const std::optional<Rational>& eps,
                                   const std::optional<Rational>& delta) {
  RetractDefaults d;
  const Rational n_k = density_radius(sample, parent, k);
  d.c = c.value_or(Rational(0));
  d.eps = eps.value_or(n_k);
  if (delta) {
    d.delta = *delta;
  } else {
    const Rational two_h = Rational(2) * directional_hausdorff(parent, sample);
    d.delta = std::max(two_h, Rational(n_k - d.eps));
  }
  return d;
}

SmallParamReport check_smallparam(const FiniteMetricSpace& parent, const Subsample& sample,
                                  int k, bool force_merge_index_max) {
  SmallParamReport r;
  r.n_k = density_radius(sample, parent, k);
  r.h = directional_hausdorff(parent, sample);
  r.lhs = r.n_k + Rational(2) * r.h;

  RetractDefaults d = default_parameters(parent, sample, k);
  RetractAnalysis analysis(parent, sample, k, d.c, d.eps, d.delta, force_merge_index_max);
  r.run = analysis.report();

  for (const Rational& gap : r.run.gaps)
    if (!r.min_gap || gap < *r.min_gap) r.min_gap = gap;
  r.condition = below_all(r.lhs, r.run.gaps);

  r.verified = r.condition && r.run.diagram_built &&
               r.run.upper_verdict == verdict_name(TriangleVerdict::commutes) &&
               r.run.top_identity && r.run.retract_verified &&
               r.run.lower_verdict != verdict_name(TriangleVerdict::fails);
  return r;
}

TruncationReport check_truncation_iso(const FiniteMetricSpace& space, const Rational& c,
                                      bool force_merge_index_max) {
  if (c < 0) throw Error(ErrorCode::argument, "truncation level must be nonnegative");

  TruncationReport r;
  r.c = c;
  r.ground_labels = space.labels();

  PhaseChangeProfile profile = phase_change_profile(space);
  r.phase_values = profile.values;
  r.merge_index = force_merge_index_max ? profile.values.size() - 1 : profile.merge_index;
  r.gaps = consecutive_gaps(profile.values, r.merge_index);
  // The (eps, delta) = (0, c) diagram shifts a layer point born at the cutoff
  // to 2c, so exact commutation needs 2c to clear every gap, not just c.
  r.diagram_applicable = below_all(c + c, r.gaps);

  StepClustering tower = slice(from_degree_rips(space, 0), SliceSpec{0, {Rational(0)}});
  StepClustering truncated = truncate_below(tower, c);

  GroundMap identity = GroundMap::identity(space.size());
  InterleavingWitness w =
      check_interleaving(truncated, tower, identity, {Rational(0)}, identity, {c});
  r.witness_valid = w.valid;

  if (w.valid) {
    GammaPoset gamma_a(*w.H);
    GammaPoset gamma_b(*w.E);
    LayerDiagram diagram =
        induced_layer_diagram(w, gamma_a, gamma_b, AxisOrder{0}, AxisOrder{0});
    r.upper_verdict = verdict_name(diagram.upper);
    r.lower_verdict = verdict_name(diagram.lower);
    r.top_identity = diagram.top == diagram.lambda_h;
    r.bottom_identity = diagram.bottom == diagram.lambda_e;
    r.triangles_exact = diagram.upper == TriangleVerdict::commutes &&
                        diagram.lower == TriangleVerdict::commutes && r.top_identity &&
                        r.bottom_identity;

    // Every cluster of a single-parameter tower supports exactly one layer, so
    // matching layer points by their cluster is well defined. The truncated
    // tower keeps a cluster iff that cluster is still alive at c.
    r.iso_applicable = r.phase_values.size() < 2 || c < r.phase_values[1];
    const auto& lam_a = diagram.lambda_h;
    const auto& lam_b = diagram.lambda_e;
    std::vector<std::size_t> partner(lam_a.size(), lam_b.size());
    std::vector<bool> matched(lam_b.size(), false);
    bool bijective = true;
    for (std::size_t i = 0; i < lam_a.size(); ++i) {
      const auto& cluster = gamma_a.cluster_of(lam_a[i]);
      for (std::size_t j = 0; j < lam_b.size(); ++j) {
        if (!matched[j] && gamma_b.cluster_of(lam_b[j]) == cluster) {
          partner[i] = j;
          matched[j] = true;
          break;
        }
      }
      if (partner[i] == lam_b.size()) bijective = false;
    }
    for (std::size_t j = 0; j < lam_b.size(); ++j)
      if (!matched[j]) {
        bijective = false;
        r.collapsed.push_back(info_of(gamma_b, lam_b[j]));
      }
    bool order_ok = bijective;
    if (bijective) {
      for (std::size_t i = 0; i < lam_a.size() && order_ok; ++i)
        for (std::size_t j = 0; j < lam_a.size(); ++j)
          if (gamma_a.leq(lam_a[i], lam_a[j]) !=
              gamma_b.leq(lam_b[partner[i]], lam_b[partner[j]])) {
            order_ok = false;
            break;
          }
    }
    r.iso_holds = order_ok;
  }

  r.soundness_violation = !r.witness_valid ||
                          (r.diagram_applicable && !r.triangles_exact) ||
                          (r.iso_applicable && !r.iso_holds);
  return r;
}

KPositiveReport check_k_positive_note(const FiniteMetricSpace& space, int k, const Rational& c,
                                      const Rational& eps, const Rational& delta) {
  if (k < 0) throw Error(ErrorCode::argument, "degree parameter must be nonnegative");
  if (c < 0 || eps < 0 || delta < 0)
    throw Error(ErrorCode::argument, "parameters c, eps and delta must be nonnegative");

  KPositiveReport r;
  r.k = k;
  r.c = c;
  r.eps = eps;
  r.delta = delta;
  r.n_k = density_radius(Subsample::full(space), space, k);
  PhaseChangeProfile profile = phase_change_profile(space);
  if (profile.values.size() > 1) r.s1 = profile.values[1];

  r.applicable = k > 0 && r.n_k > 0 && r.s1.has_value();
  r.admissible = r.n_k - eps <= c && c <= delta;
  r.sum = c + eps + delta;
  if (r.applicable && r.admissible) {
    r.obstruction_holds = r.sum >= *r.s1;
    r.violated = !r.obstruction_holds;
  }
  return r;
}

namespace {

using nlohmann::ordered_json;

ordered_json rational_array(const std::vector<Rational>& values) {
  auto arr = ordered_json::array();
  for (const auto& v : values) arr.push_back(format_exact(v));
  return arr;
}

ordered_json label_array(const std::vector<index_t>& points,
                         const std::vector<std::string>& labels) {
  auto arr = ordered_json::array();
  for (index_t p : points) {
    if (p < labels.size())
      arr.push_back(labels[p]);
    else
      arr.push_back(p);
  }
  return arr;
}

ordered_json element_json(const ElementInfo& info, const std::vector<std::string>& labels) {
  ordered_json j;
  j["id"] = info.id;
  j["cell"] = rational_array(info.cell);
  j["cluster"] = label_array(info.cluster, labels);
  return j;
}

ordered_json failure_json(const CheckFailure& failure, const std::vector<std::string>& labels) {
  ordered_json j;
  j["stage"] = failure.stage;
  j["cell"] = rational_array(failure.cell);
  j["cluster"] = label_array(failure.cluster, labels);
  j["detail"] = failure.detail;
  return j;
}

ordered_json report_object(const StabilityReport& r) {
  ordered_json doc;
  ordered_json inputs;
  inputs["k"] = r.k;
  inputs["c"] = format_exact(r.c);
  inputs["eps"] = format_exact(r.eps);
  inputs["delta"] = format_exact(r.delta);
  inputs["forced_merge_index"] = r.forced_merge_index;
  doc["inputs"] = std::move(inputs);

  ordered_json stats;
  stats["h"] = format_exact(r.h);
  stats["n_k"] = format_exact(r.n_k);
  stats["phase_change_values"] = rational_array(r.phase_values);
  stats["merge_index"] = r.merge_index;
  stats["gaps"] = rational_array(r.gaps);
  doc["stats"] = std::move(stats);

  ordered_json cond;
  cond["delta_ge_2h"] = r.conditions.delta_ge_2h;
  cond["eps_window"] = r.conditions.eps_window;
  cond["gap"] = r.conditions.gap;
  cond["weak_gap"] = r.conditions.weak_gap;
  cond["approximation_guaranteed"] = r.conditions.approximation();
  cond["retract_guaranteed"] = r.conditions.retract();
  doc["conditions"] = std::move(cond);

  ordered_json approx;
  approx["exists"] = r.approximation_exists;
  approx["valid"] = r.approximation_valid;
  approx["failures"] = ordered_json::array();
  for (const auto& failure : r.failures)
    approx["failures"].push_back(failure_json(failure, r.ground_labels));
  approx["warnings"] = r.warnings;
  doc["approximation"] = std::move(approx);

  ordered_json diagram;
  diagram["built"] = r.diagram_built;
  if (r.diagram_built) {
    diagram["upper"] = r.upper_verdict;
    diagram["lower"] = r.lower_verdict;
    diagram["top_identity"] = r.top_identity;
  }
  doc["layer_diagram"] = std::move(diagram);

  doc["table"] = ordered_json::array();
  for (const auto& trace : r.table) {
    ordered_json row;
    row["source"] = element_json(trace.source, r.ground_labels);
    row["i_eps"] = element_json(trace.i_eps, r.ground_labels);
    row["theta_delta"] = element_json(trace.theta_delta, r.ground_labels);
    row["identity"] = trace.identity;
    doc["table"].push_back(std::move(row));
  }

  ordered_json outcome;
  outcome["retract_verified"] = r.retract_verified;
  outcome["soundness_violation"] = r.soundness_violation;
  doc["outcome"] = std::move(outcome);
  return doc;
}

}  // namespace

std::string stability_report_json(const StabilityReport& report) {
  ordered_json doc;
  doc["schema"] = "layerscope/retract-report/1";
  doc["mode"] = "main";
  doc.update(report_object(report));
  return doc.dump(2) + "\n";
}

std::string smallparam_report_json(const SmallParamReport& report) {
  ordered_json doc;
  doc["schema"] = "layerscope/retract-report/1";
  doc["mode"] = "smallparam";
  ordered_json sp;
  sp["n_k"] = format_exact(report.n_k);
  sp["h"] = format_exact(report.h);
  sp["n_k_plus_2h"] = format_exact(report.lhs);
  sp["min_gap"] = report.min_gap ? ordered_json(format_exact(*report.min_gap))
                                 : ordered_json(nullptr);
  sp["condition"] = report.condition;
  sp["verified"] = report.verified;
  doc["smallparam"] = std::move(sp);
  doc["run"] = report_object(report.run);
  return doc.dump(2) + "\n";
}

std::string truncation_report_json(const TruncationReport& report) {
  ordered_json doc;
  doc["schema"] = "layerscope/truncation-report/1";
  doc["c"] = format_exact(report.c);
  ordered_json stats;
  stats["phase_change_values"] = rational_array(report.phase_values);
  stats["merge_index"] = report.merge_index;
  stats["gaps"] = rational_array(report.gaps);
  doc["stats"] = std::move(stats);
  ordered_json diagram;
  diagram["applicable"] = report.diagram_applicable;
  diagram["witness_valid"] = report.witness_valid;
  if (report.witness_valid) {
    diagram["upper"] = report.upper_verdict;
    diagram["lower"] = report.lower_verdict;
    diagram["top_identity"] = report.top_identity;
    diagram["bottom_identity"] = report.bottom_identity;
    diagram["triangles_exact"] = report.triangles_exact;
  }
  doc["diagram"] = std::move(diagram);
  ordered_json iso;
  iso["applicable"] = report.iso_applicable;
  iso["holds"] = report.iso_holds;
  iso["collapsed"] = ordered_json::array();
  for (const auto& info : report.collapsed)
    iso["collapsed"].push_back(element_json(info, report.ground_labels));
  doc["iso"] = std::move(iso);
  doc["soundness_violation"] = report.soundness_violation;
  return doc.dump(2) + "\n";
}

std::string k_positive_report_json(const KPositiveReport& report) {
  ordered_json doc;
  doc["schema"] = "layerscope/k-positive-note/1";
  doc["k"] = report.k;
  doc["c"] = format_exact(report.c);
  doc["eps"] = format_exact(report.eps);
  doc["delta"] = format_exact(report.delta);
  doc["n_k"] = format_exact(report.n_k);
  doc["s1"] = report.s1 ? ordered_json(format_exact(*report.s1)) : ordered_json(nullptr);
  doc["applicable"] = report.applicable;
  doc["admissible"] = report.admissible;
  doc["sum"] = format_exact(report.sum);
  doc["obstruction_holds"] = report.obstruction_holds;
  doc["violated"] = report.violated;
  return doc.dump(2) + "\n";
}

}  // namespace layerscope
