#include "imprint/info_measures.hpp"

#include <cmath>
#include <vector>

#include "imprint/errors.hpp"

namespace imprint {

namespace {

std::vector<double> marginal_cells(const JointTable& table, const std::vector<std::size_t>& keep) {
  const auto shape = table.shape();
  std::size_t n = 1;
  for (auto k : keep) n *= shape[k];
  const auto map = projection_map(shape, keep);
  std::vector<double> out(n, 0.0);
  const auto cells = table.cells();
  for (std::size_t i = 0; i < cells.size(); ++i) out[map[i]] += cells[i];
  return out;
}

double entropy_of(const std::vector<double>& p) {
  double h = 0.0;
  for (double q : p) {
    if (q > 0.0) h -= q * std::log2(q);
  }
  // A single-state marginal can sum to 1 + ulp and give -1e-16.
  return h < 0.0 ? 0.0 : h;
}

}  // namespace

JointTable marginalize(const JointTable& table, const VariableSubset& subset) {
  const auto keep = table.resolve(subset);
  std::vector<Axis> axes;
  for (auto k : keep) axes.push_back(table.axes()[k]);
  return JointTable(std::move(axes), marginal_cells(table, keep));
}

double entropy(const JointTable& table, const VariableSubset& subset) {
  return entropy_of(marginal_cells(table, table.resolve(subset)));
}

double transmission(const JointTable& table, const VariableSubset& x, const VariableSubset& y) {
  std::vector<std::string> joint = x.members();
  for (const auto& m : y.members()) {
    if (x.contains(m)) throw InvalidSubsetsError("subsets overlap on axis '" + m + "'");
    joint.push_back(m);
  }
  return entropy(table, x) + entropy(table, y) - entropy(table, VariableSubset(std::move(joint)));
}

double co_information(const JointTable& table, const VariableSubset& subset) {
  const std::size_t n = subset.size();
  if (n < 2) throw ArityError("co-information needs at least two variables");
  if (n > kMaxCoInformationArity) {
    throw ArityError("co-information supports at most " + std::to_string(kMaxCoInformationArity) +
                     " variables");
  }
  const auto axes = table.resolve(subset);

  double mu = 0.0;
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    std::vector<std::size_t> keep;
    for (std::size_t b = 0; b < n; ++b) {
      if (mask & (std::size_t{1} << b)) keep.push_back(axes[b]);
    }
    const double h = entropy_of(marginal_cells(table, keep));
    // Odd-sized subsets enter positively.
    mu += (keep.size() % 2 == 1) ? h : -h;
  }
  return mu;
}

double q_measure(const JointTable& table, const VariableSubset& subset) {
  return -co_information(table, subset);
}

}  // namespace imprint
