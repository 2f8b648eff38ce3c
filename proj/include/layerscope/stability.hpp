#pragma once

#include "layerscope/interleaving.hpp"

namespace layerscope {

struct RetractConditions {
  bool delta_ge_2h = false;
  bool eps_window = false;  // N_k - eps <= c <= delta
  bool gap = false;         // c + eps + delta below every phase gap before the merge
  bool weak_gap = false;    // scale gap between comparable layer points exceeds eps + delta

  // What the theory needs for the approximation, resp. the full retract.
  bool approximation() const { return delta_ge_2h && eps_window; }
  bool retract() const { return approximation() && (gap || weak_gap); }
};

struct ElementInfo {
  element_t id = kNoElement;
  std::vector<Rational> cell;
  std::vector<index_t> cluster;
};

struct LayerPointTrace {
  ElementInfo source;       // layer point of the truncated sample clustering
  ElementInfo i_eps;        // its image layer point downstairs
  ElementInfo theta_delta;  // pulled back up
  bool identity = false;
};

struct StabilityReport {
  int k = 0;
  Rational c, eps, delta;
  bool forced_merge_index = false;
  std::vector<std::string> ground_labels;

  Rational h, n_k;
  std::vector<Rational> phase_values;
  std::size_t merge_index = 0;
  std::vector<Rational> gaps;  // consecutive differences up to the merge index

  RetractConditions conditions;
  bool approximation_exists = false;
  bool approximation_valid = false;
  std::vector<CheckFailure> failures;
  std::vector<std::string> warnings;

  bool diagram_built = false;
  std::string upper_verdict, lower_verdict;
  bool top_identity = false;
  bool retract_verified = false;
  bool soundness_violation = false;
  std::vector<LayerPointTrace> table;
};

// Builds the truncated sample clustering and the ambient degree-k clustering,
// runs the approximation and layer diagram, and evaluates every condition of
// the retract statement on exact arithmetic. Owns all intermediate objects.
class RetractAnalysis {
 public:
  RetractAnalysis(const FiniteMetricSpace& parent, const Subsample& sample, int k,
                  const Rational& c, const Rational& eps, const Rational& delta,
                  bool force_merge_index_max = false);

  const StabilityReport& report() const { return report_; }
  const GammaPoset& gamma_sample() const { return *gamma_h_; }
  const GammaPoset& gamma_ambient() const { return *gamma_e_; }
  const InterleavingWitness& witness() const { return approx_.base; }
  const LayerDiagram* diagram() const { return diagram_ ? &*diagram_ : nullptr; }

  struct ParamBound {
    ElementInfo source;
    Rational t;
    bool holds = false;  // s - 2h <= t <= s + eps
  };
  // The parameter bound for every layer point with scale above c. Needs a
  // valid approximation.
  std::vector<ParamBound> param_bounds() const;

 private:
  ApproximationWitness approx_;
  std::unique_ptr<GammaPoset> gamma_h_;
  std::unique_ptr<GammaPoset> gamma_e_;
  std::optional<LayerDiagram> diagram_;
  StabilityReport report_;
};

StabilityReport check_main_theorem(const FiniteMetricSpace& parent, const Subsample& sample,
                                   int k, const Rational& c, const Rational& eps,
                                   const Rational& delta, bool force_merge_index_max = false);

struct RetractDefaults {
  Rational c, eps, delta;
};

// Fills in whichever parameters were not given: c = 0, eps = N_k, and
// delta = max(2h, N_k - eps) with the resolved eps.
RetractDefaults default_parameters(const FiniteMetricSpace& parent, const Subsample& sample,
                                   int k, const std::optional<Rational>& c = {},
                                   const std::optional<Rational>& eps = {},
                                   const std::optional<Rational>& delta = {});

struct SmallParamReport {
  Rational n_k, h, lhs;             // lhs = N_k + 2h
  std::optional<Rational> min_gap;  // absent when there are no gaps to beat
  bool condition = false;           // lhs below every gap
  StabilityReport run;              // the c=0, eps=N_k, delta=max(2h, N_k-eps) instance
  bool verified = false;
};

SmallParamReport check_smallparam(const FiniteMetricSpace& parent, const Subsample& sample,
                                  int k, bool force_merge_index_max = false);

struct TruncationReport {
  Rational c;
  std::vector<std::string> ground_labels;
  std::vector<Rational> phase_values;
  std::size_t merge_index = 0;
  std::vector<Rational> gaps;
  bool diagram_applicable = false;  // 2c below every gap before the merge index
  bool witness_valid = false;
  std::string upper_verdict, lower_verdict;
  bool top_identity = false;
  bool bottom_identity = false;
  bool triangles_exact = false;     // both triangles of the (0, c) diagram commute on the nose
  bool iso_applicable = false;      // c < s_1
  bool iso_holds = false;           // cluster-identity bijection, order-preserving both ways
  std::vector<ElementInfo> collapsed;  // untruncated layer points without a partner
  bool soundness_violation = false;
};

TruncationReport check_truncation_iso(const FiniteMetricSpace& space, const Rational& c,
                                      bool force_merge_index_max = false);

struct KPositiveReport {
  int k = 0;
  Rational c, eps, delta;
  Rational n_k;  // N_k(X, X)
  std::optional<Rational> s1;
  bool applicable = false;  // k > 0 with positive N_k and an actual first gap
  bool admissible = false;  // N_k - eps <= c <= delta
  Rational sum;             // c + eps + delta
  bool obstruction_holds = false;  // sum >= s1
  bool violated = false;           // must never be set
};

// The k > 0 obstruction: admissible parameters force c + eps + delta to reach
// the first phase change, so the gap condition cannot be met.
KPositiveReport check_k_positive_note(const FiniteMetricSpace& space, int k, const Rational& c,
                                      const Rational& eps, const Rational& delta);

std::string stability_report_json(const StabilityReport& report);
std::string smallparam_report_json(const SmallParamReport& report);
std::string truncation_report_json(const TruncationReport& report);
std::string k_positive_report_json(const KPositiveReport& report);

}  // namespace layerscope
