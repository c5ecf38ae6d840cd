#pragma once

// Maximum-entropy fitting by iterative proportional fitting (IPF), the
// interaction information it yields, and the redundancy decomposition
// R = I - mu*.

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "imprint/joint_table.hpp"

namespace imprint {

inline constexpr double kDefaultIpfTolerance = 1e-10;
inline constexpr std::size_t kDefaultIpfMaxIterations = 10000;

// Constraint subsets for IPF. Each subset is stored with its members sorted
// and the list itself is sorted lexicographically, which fixes the order the
// constraints are visited in.
class MarginSet {
 public:
  explicit MarginSet(std::vector<VariableSubset> constraints);

  // {AB, AC, BC, ...}: every pair of the table's axes.
  static MarginSet all_pairs(const JointTable& table);
  // Parses "A,B;A,C;B,C".
  static MarginSet parse(const std::string& spec);

  const std::vector<VariableSubset>& constraints() const noexcept { return constraints_; }
  std::string to_string() const;

  // Throws AxisNotFoundError for unknown axes and InvalidSubsetsError when
  // some axis of `table` is not covered by any constraint.
  void validate_for(const JointTable& table) const;

 private:
  std::vector<VariableSubset> constraints_;
};

struct IpfResult {
  JointTable fitted;
  std::size_t iterations = 0;     // full constraint cycles performed
  double max_margin_error = 0.0;  // after the last cycle
  bool converged = false;
  // max_margin_error after each cycle, in order.
  std::vector<double> error_history;
};

// Starts from the uniform table and rescales it cyclically until each
// constrained margin matches the corresponding margin of `target` within
// `tolerance` (max absolute cell difference), or `max_iterations` cycles have
// run. Running out of iterations returns converged = false.
IpfResult ipf_fit(const JointTable& target, const MarginSet& margins,
                  double tolerance = kDefaultIpfTolerance,
                  std::size_t max_iterations = kDefaultIpfMaxIterations);

// Largest absolute difference between any constrained margin of `fitted` and
// of `target`.
// Same iteration, started from `start` instead of the uniform table. Feeding
// a previous fit back in is how a re-fit is done.
IpfResult ipf_fit_from(const JointTable& start, const JointTable& target, const MarginSet& margins,
                       double tolerance = kDefaultIpfTolerance,
                       std::size_t max_iterations = kDefaultIpfMaxIterations);

double max_margin_error(const JointTable& fitted, const JointTable& target, const MarginSet& margins);

// H(maxent fit) - H(table) over all axes. Not negative for a converged fit.
double interaction_information(const JointTable& table, const MarginSet& margins,
                               double tolerance = kDefaultIpfTolerance,
                               std::size_t max_iterations = kDefaultIpfMaxIterations);
double interaction_information(const JointTable& table, const IpfResult& fit);

// R = I - mu*; the sign tells whether redundancy (> 0) or uncertainty (< 0)
// is left over.
constexpr double redundancy(double interaction, double mu_star) noexcept {
  return interaction - mu_star;
}

struct MeasureReport {
  std::vector<std::string> axes;
  std::map<std::string, double> entropies;       // per axis
  std::map<std::string, double> pair_entropies;  // keyed "A,B"
  double joint_entropy = 0.0;
  double mu_star = 0.0;
  double q = 0.0;
  double i = 0.0;
  double r = 0.0;
  // I - Q, the other sign convention for redundancy; kept for comparison.
  double r_krippendorff = 0.0;
  std::size_t ipf_iterations = 0;
  double ipf_max_margin_error = 0.0;
  bool ipf_converged = false;
  double tolerance = kDefaultIpfTolerance;
  std::size_t max_iterations = kDefaultIpfMaxIterations;
};

// All measures of a three-axis table with the pairwise model {AB, AC, BC}.
MeasureReport full_report(const JointTable& table, double tolerance = kDefaultIpfTolerance,
                          std::size_t max_iterations = kDefaultIpfMaxIterations);

// Stable key order; doubles in shortest round-trip form.
std::string to_json(const MeasureReport& report, int indent = 2);
MeasureReport measure_report_from_json(const std::string& text);

}  // namespace imprint
