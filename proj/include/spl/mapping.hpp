#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "spl/common.hpp"
#include "spl/potentials.hpp"

namespace spl {

// Ordered: Strong > Weak > RestrictedWeak > None. Unstated only comes out of the strict mode.
enum class MappingType { None = 0, RestrictedWeak = 1, Weak = 2, Strong = 3, Unstated = -1 };

std::string mapping_type_name(MappingType t);
MappingType parse_mapping_type(const std::string& s);

// (1/p, 1/q); 0 encodes infinity
struct ExponentPair {
  double inv_p = 0.0;
  double inv_q = 0.0;
  static ExponentPair from_pq(double p, double q);
  void validate() const;
};

constexpr double kBoundaryTol = 1e-12;
constexpr double kNearBoundaryTol = 1e-6;

struct Thresholds {
  double delta = 0.5;  // (a+1) v (b+1) v 1/2
  double kappa = 0.0;  // (a+1/2) ^ (b+1/2)
  double eta = 0.5;    // (nu+1) v 1/2, FB settings only
  // which Jacobi parameters the classification uses (FB settings transfer to Jacobi)
  JacobiParams transfer{};
  bool lebesgue = false;  // function-type setting (Lebesgue measure)
};
Thresholds thresholds(const SettingId& s);

enum class ClassifyMode { Resolved, Strict };
struct ClassifierOptions {
  ClassifyMode mode = ClassifyMode::Resolved;
  // mutation hook for the audit harness: forget the corner exception of the equality case sigma = kappa + 1/2
  bool drop_b2_exception = false;
};

MappingType classify(const PotentialSpec& spec, ExponentPair pq, const ClassifierOptions& opt = {});

// Levels implied by the positive statements (lower) and allowed by the negative statements (upper).
struct LevelBounds {
  MappingType lower = MappingType::None;
  MappingType upper = MappingType::Strong;
};
LevelBounds literal_bounds(const PotentialSpec& spec, ExponentPair pq, const ClassifierOptions& opt = {});

// true when pq is within kNearBoundaryTol of a line or corner where the type changes, but not on it
bool near_boundary(const PotentialSpec& spec, ExponentPair pq);

// Known counterexamples: at `at` the operator is not of type `disproved` (so the level must be lower).
struct Disproof {
  std::string id;
  std::string component;  // operator piece the argument is run on, e.g. "pol-2", "fun-6"
  std::string function_id;  // E1..E8
  ExponentPair at;
  MappingType disproved = MappingType::Strong;
  std::string note;
};
std::vector<Disproof> disproof_catalog(const PotentialSpec& spec);

struct AuditViolation {
  std::string rule;
  ExponentPair at;
  ExponentPair related;
  std::string detail;
};
std::vector<AuditViolation> consistency_audit(const PotentialSpec& spec, int resolution,
                                              const ClassifierOptions& opt = {});

// columns inv_p, inv_q, type
void write_region_grid_csv(std::ostream& os, const PotentialSpec& spec, int resolution,
                           const ClassifierOptions& opt = {});
void write_gnuplot_script(std::ostream& os, const std::string& csv_path, const std::string& title);

// Test functions from the sharpness arguments, on the angle variable of (0, pi).
struct ExtremalCase {
  std::string id;
  std::function<double(double)> f;
  double A = 0.0;  // exponent for the power cases E3/E5
  std::vector<double> breakpoints;  // support ends and singular points
  std::string law;
};
struct ExtremalParams {
  PotentialSpec spec;
  ExponentPair pq;
};
ExtremalCase extremal_function(const std::string& id, const ExtremalParams& params, double eps_or_A);

// ---- probes ----

// operator piece: a kernel_component (1..6) of the pol or fun decomposition, or 0 for the full kernel
struct ProbeOperator {
  PotentialSpec spec;
  int component = 0;
};
// (T f)(theta) = int K(theta, phi) f(phi) dm(phi) with the measure of the Jacobi setting
double apply_probe_operator(const ProbeOperator& op, const ExtremalCase& f, double theta);

enum class ProbeKind {
  SupRatio,        // ||T f_eps||_inf / ||f_eps||_p against a predicted law in eps
  LqRatio,         // ||T f_eps||_q / ||f_eps||_p, expected bounded
  PartialSupDivergence,  // sup of T applied to f cut off below eta, against log log(1/eta)
  PartialNormExponent    // int_{eta}^{1/2} |T f|^q dm ~ eta^e to the right of the singular point, fitted e
};

struct ProbeSpec {
  ProbeOperator op;
  std::string case_id;
  ExponentPair pq;
  ProbeKind kind = ProbeKind::SupRatio;
  std::vector<double> ladder;
  double case_param = 0.0;  // eps for E3/E5 (fixed), unused otherwise
  std::function<double(double)> law;  // predicted growth in the ladder variable
  double predicted_exponent = 0.0;    // for PartialNormExponent
  double singular_point = 0.0;        // where the output blows up (0 or 1)
  double theta0 = 0.0;                // PartialSupDivergence: evaluate here; <= 0 means take a sup over theta
};

struct ProbeReport {
  std::vector<double> ladder, input_norm, output_norm, ratio, law_ratio;
  double fitted = 0.0;  // fitted exponent or slope
  double predicted = 0.0;
  double band = 0.0;  // max/min of ratio/law (or of ratio for bounded probes)
  bool confirmed = false;
  std::string verdict;
};
ProbeReport blowup_probe(const ProbeSpec& spec);

// the fixed sharpness suite: T2/E1 law, E2 and E7 divergences, E3/E5 exponents, critical-line spot checks
struct NamedProbe {
  std::string id;
  std::string description;
  ProbeSpec spec;
};
std::vector<NamedProbe> sharpness_probe_suite();

}  // namespace spl
