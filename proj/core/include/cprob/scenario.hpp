#ifndef CPROB_SCENARIO_HPP
#define CPROB_SCENARIO_HPP

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cprob/frequency.hpp"
#include "cprob/state_space.hpp"

namespace cprob {

/// A runnable experiment: state space, initial proposition, kernel schedule
/// and named query propositions, plus the free parameters it was built from.
struct Scenario {
  std::string name;
  StateSpace space;
  std::optional<std::string> init_label;  // set when init is a single state
  Eigen::VectorXcd init;
  std::vector<std::pair<std::string, Kernel>> kernels;  // declaration order
  std::vector<std::string> chain_order;                 // kernel names
  std::vector<std::pair<std::string, Proposition>> queries;
  std::map<std::string, double> parameters;

  KernelChain chain() const;
  const Kernel& kernel_named(const std::string& name) const;

  bool operator==(const Scenario& other) const;
};

struct EndpointDeficit {
  std::string state;
  double deficit = 0.0;
  std::size_t path_count = 0;  // paths with nonzero value
};

struct ScenarioResult {
  std::string scenario_name;
  std::vector<std::pair<std::string, FrequencyResult>> queries;
  std::vector<EndpointDeficit> deficits;  // empty when the chain is not
                                          // oracle-enumerable or init is mixed
  std::map<std::string, double> parameters;
  double elapsed_seconds = 0.0;  // wall-clock metadata; not part of data output
};

/// Validates and runs a scenario: every query is evaluated with prob and, for
/// single-state initial conditions on oracle-enumerable chains, per-endpoint
/// interference deficits are recorded. Deterministic across runs.
ScenarioResult run(const Scenario& scenario);

/// The figure-1 interferometer: U = {src, m1, m2, d1, d2}; balanced splitter
/// rows ((1-i)/2, (1+i)/2), second splitter phased so d1 is the bright port;
/// mirrors and detectors are identity rows. Queries: d1, d2.
Scenario build_mach_zehnder();

/// The figure-2 interferometer with a hit/no-hit flag of efficiency eta in
/// [0,1]: U = {src,m1,m2,d1,d2} x {h,n}. The splitter kernels are tensored
/// with the flag identity; between them the mirror step applies, at m1, the
/// flag row (n->h, n->n) = ((1+eta)/2, (1-eta)/2) and at m2 the mirrored row
/// ((1-eta)/2, (1+eta)/2). eta = 1 records the path perfectly, eta = 0 makes
/// the flag independent of it. Queries: d1, d2 (across flags).
Scenario build_which_path(double eta);

enum class SlitMode { BothOpen, SlitOneOnly };

struct TwoSlitConfig {
  int screen_points = 64;
  double wavelength = 1.0;
  double separation = 4.0;   // transverse slit separation
  double distance = 32.0;    // slit plane to screen
  double screen_spacing = 1.0;
  SlitMode mode = SlitMode::BothOpen;
};

/// The two-slit experiment: U = {src, s1, s2} + screen points. The source row
/// is the balanced splitter pair (or (1,0) with slit 2 blocked); each slit row
/// is e^{i phi_k(x)} normalized by its own sum, phi_k(x) = 2 pi |slit_k - x| /
/// wavelength. Queries: one per screen point plus the whole screen.
/// Throws ParameterRange (screen_points < 16, bad geometry) and DegenerateRow
/// (slit row sum below 1e-6 in magnitude).
Scenario build_two_slit(const TwoSlitConfig& config = TwoSlitConfig{});

/// Names accepted by built-in lookup: "mach_zehnder", "which_path",
/// "two_slit". Parameters: which_path takes "eta"; two_slit takes
/// "wavelength", "separation", "distance". Throws UnknownLabel for other
/// names, UnknownParameter for parameters the builder does not expose.
Scenario build_named(const std::string& name,
                     const std::map<std::string, double>& parameters = {});

struct ParseIssue {
  std::size_t line = 0;  // 1-based
  std::string kind;      // SyntaxError | UnknownLabel | RowSumViolation
  std::string message;
};

struct ParseResult {
  std::optional<Scenario> scenario;
  std::vector<ParseIssue> issues;
  bool ok() const { return scenario.has_value() && issues.empty(); }
};

/// Parses the line-oriented scenario text format (see serialize_scenario for
/// the canonical shape). All diagnosable problems are collected with line
/// numbers rather than thrown; kernels violating the row-sum law are reported
/// as RowSumViolation naming the row and its sum.
ParseResult parse_scenario(const std::string& text,
                           const std::string& name = "scenario");

/// Canonical text form; parse_scenario(serialize_scenario(s)) reproduces s
/// and serialization is idempotent after that one normalization pass.
std::string serialize_scenario(const Scenario& scenario);

}  // namespace cprob

#endif  // CPROB_SCENARIO_HPP
