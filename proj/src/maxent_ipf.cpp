#include "imprint/maxent_ipf.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <json.hpp>

#include "imprint/errors.hpp"
#include "imprint/info_measures.hpp"

namespace imprint {

using nlohmann::json;

MarginSet::MarginSet(std::vector<VariableSubset> constraints) {
  if (constraints.empty()) throw InvalidSubsetsError("margin set must not be empty");
  for (auto& c : constraints) constraints_.push_back(c.sorted());
  std::sort(constraints_.begin(), constraints_.end(),
            [](const VariableSubset& a, const VariableSubset& b) { return a.members() < b.members(); });
  constraints_.erase(std::unique(constraints_.begin(), constraints_.end()), constraints_.end());
}

MarginSet MarginSet::all_pairs(const JointTable& table) {
  if (table.rank() < 2) throw ArityError("pairwise margins need at least two axes");
  std::vector<VariableSubset> pairs;
  const auto& axes = table.axes();
  for (std::size_t a = 0; a < axes.size(); ++a) {
    for (std::size_t b = a + 1; b < axes.size(); ++b) pairs.push_back(VariableSubset{axes[a].name, axes[b].name});
  }
  return MarginSet(std::move(pairs));
}

MarginSet MarginSet::parse(const std::string& spec) {
  std::vector<VariableSubset> constraints;
  std::stringstream groups(spec);
  std::string group;
  while (std::getline(groups, group, ';')) {
    std::vector<std::string> members;
    std::stringstream names(group);
    std::string name;
    while (std::getline(names, name, ',')) {
      const auto first = name.find_first_not_of(" \t");
      const auto last = name.find_last_not_of(" \t");
      if (first == std::string::npos) continue;
      members.push_back(name.substr(first, last - first + 1));
    }
    if (!members.empty()) constraints.emplace_back(std::move(members));
  }
  return MarginSet(std::move(constraints));
}

std::string MarginSet::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < constraints_.size(); ++i) {
    if (i) s += ';';
    s += constraints_[i].to_string();
  }
  return s;
}

void MarginSet::validate_for(const JointTable& table) const {
  std::set<std::string> covered;
  for (const auto& c : constraints_) {
    table.resolve(c);
    covered.insert(c.members().begin(), c.members().end());
  }
  for (const auto& a : table.axes()) {
    if (!covered.count(a.name)) {
      throw InvalidSubsetsError("margin set " + to_string() + " does not cover axis '" + a.name + "'");
    }
  }
}

namespace {

struct Constraint {
  std::vector<std::size_t> map;  // cell -> margin cell
  std::vector<double> target;    // margin of the input table
};

std::vector<double> project(std::span<const double> cells, const Constraint& c) {
  std::vector<double> m(c.target.size(), 0.0);
  for (std::size_t i = 0; i < cells.size(); ++i) m[c.map[i]] += cells[i];
  return m;
}

std::vector<Constraint> build_constraints(const JointTable& target, const MarginSet& margins) {
  margins.validate_for(target);
  const auto shape = target.shape();
  std::vector<Constraint> out;
  for (const auto& subset : margins.constraints()) {
    const auto keep = target.resolve(subset);
    std::size_t n = 1;
    for (auto k : keep) n *= shape[k];
    Constraint c{projection_map(shape, keep), std::vector<double>(n, 0.0)};
    c.target = project(target.cells(), c);
    out.push_back(std::move(c));
  }
  return out;
}

double margin_error(std::span<const double> cells, const std::vector<Constraint>& constraints) {
  double err = 0.0;
  for (const auto& c : constraints) {
    const auto m = project(cells, c);
    for (std::size_t j = 0; j < m.size(); ++j) err = std::max(err, std::abs(m[j] - c.target[j]));
  }
  return err;
}

}  // namespace

IpfResult ipf_fit(const JointTable& target, const MarginSet& margins, double tolerance,
                  std::size_t max_iterations) {
  return ipf_fit_from(JointTable::uniform(target.axes()), target, margins, tolerance, max_iterations);
}

IpfResult ipf_fit_from(const JointTable& start, const JointTable& target, const MarginSet& margins,
                       double tolerance, std::size_t max_iterations) {
  if (!(tolerance > 0.0)) throw DomainError("IPF tolerance must be > 0");
  if (max_iterations < 1) throw DomainError("IPF needs at least one iteration");
  if (start.axes() != target.axes()) throw InvalidTableError("start and target tables have different axes");
  const auto constraints = build_constraints(target, margins);

  std::vector<double> cells(start.cells().begin(), start.cells().end());
  std::vector<double> factor;
  IpfResult result{start, 0, 0.0, false, {}};

  while (result.iterations < max_iterations) {
    for (const auto& c : constraints) {
      const auto current = project(cells, c);
      factor.assign(current.size(), 0.0);
      // A zero running margin yields factor 0, never a division by zero.
      for (std::size_t j = 0; j < current.size(); ++j) {
        if (current[j] > 0.0) factor[j] = c.target[j] / current[j];
      }
      for (std::size_t i = 0; i < cells.size(); ++i) cells[i] *= factor[c.map[i]];
    }
    ++result.iterations;
    result.max_margin_error = margin_error(cells, constraints);
    result.error_history.push_back(result.max_margin_error);
    if (result.max_margin_error <= tolerance) {
      result.converged = true;
      break;
    }
  }

  double total = 0.0;
  for (double p : cells) total += p;
  if (!(total > 0.0)) throw NumericError("IPF collapsed to an all-zero table");
  for (double& p : cells) p /= total;
  result.fitted = JointTable(target.axes(), std::move(cells));
  return result;
}

double max_margin_error(const JointTable& fitted, const JointTable& target, const MarginSet& margins) {
  if (fitted.axes() != target.axes()) throw InvalidTableError("tables have different axes");
  return margin_error(fitted.cells(), build_constraints(target, margins));
}

double interaction_information(const JointTable& table, const IpfResult& fit) {
  const auto all = table.all_axes();
  return entropy(fit.fitted, all) - entropy(table, all);
}

double interaction_information(const JointTable& table, const MarginSet& margins, double tolerance,
                               std::size_t max_iterations) {
  return interaction_information(table, ipf_fit(table, margins, tolerance, max_iterations));
}

MeasureReport full_report(const JointTable& table, double tolerance, std::size_t max_iterations) {
  if (table.rank() != 3) {
    throw ArityError("measure report needs exactly 3 axes, table has " + std::to_string(table.rank()));
  }
  MeasureReport report;
  const auto& axes = table.axes();
  for (const auto& a : axes) {
    report.axes.push_back(a.name);
    report.entropies[a.name] = entropy(table, VariableSubset{a.name});
  }
  for (std::size_t a = 0; a < axes.size(); ++a) {
    for (std::size_t b = a + 1; b < axes.size(); ++b) {
      report.pair_entropies[axes[a].name + "," + axes[b].name] =
          entropy(table, VariableSubset{axes[a].name, axes[b].name});
    }
  }
  const auto all = table.all_axes();
  report.joint_entropy = entropy(table, all);
  report.mu_star = co_information(table, all);
  report.q = -report.mu_star;

  const auto fit = ipf_fit(table, MarginSet::all_pairs(table), tolerance, max_iterations);
  report.i = interaction_information(table, fit);
  report.r = redundancy(report.i, report.mu_star);
  report.r_krippendorff = report.i - report.q;
  report.ipf_iterations = fit.iterations;
  report.ipf_max_margin_error = fit.max_margin_error;
  report.ipf_converged = fit.converged;
  report.tolerance = tolerance;
  report.max_iterations = max_iterations;
  return report;
}

std::string to_json(const MeasureReport& report, int indent) {
  json doc;
  doc["axes"] = report.axes;
  doc["entropies"] = report.entropies;
  doc["pair_entropies"] = report.pair_entropies;
  doc["joint_entropy"] = report.joint_entropy;
  doc["mu_star"] = report.mu_star;
  doc["q"] = report.q;
  doc["i"] = report.i;
  doc["r"] = report.r;
  doc["r_krippendorff"] = report.r_krippendorff;
  doc["ipf"] = {{"iterations", report.ipf_iterations},
                {"max_margin_error", report.ipf_max_margin_error},
                {"converged", report.ipf_converged}};
  doc["settings"] = {{"tolerance", report.tolerance}, {"max_iterations", report.max_iterations}};
  return doc.dump(indent);
}

MeasureReport measure_report_from_json(const std::string& text) {
  try {
    const auto doc = json::parse(text);
    MeasureReport r;
    r.axes = doc.at("axes").get<std::vector<std::string>>();
    r.entropies = doc.at("entropies").get<std::map<std::string, double>>();
    r.pair_entropies = doc.at("pair_entropies").get<std::map<std::string, double>>();
    r.joint_entropy = doc.at("joint_entropy").get<double>();
    r.mu_star = doc.at("mu_star").get<double>();
    r.q = doc.at("q").get<double>();
    r.i = doc.at("i").get<double>();
    r.r = doc.at("r").get<double>();
    r.r_krippendorff = doc.at("r_krippendorff").get<double>();
    const auto& ipf = doc.at("ipf");
    r.ipf_iterations = ipf.at("iterations").get<std::size_t>();
    r.ipf_max_margin_error = ipf.at("max_margin_error").get<double>();
    r.ipf_converged = ipf.at("converged").get<bool>();
    const auto& settings = doc.at("settings");
    r.tolerance = settings.at("tolerance").get<double>();
    r.max_iterations = settings.at("max_iterations").get<std::size_t>();
    return r;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed measure report: ") + e.what());
  }
}

}  // namespace imprint
